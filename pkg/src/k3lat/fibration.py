"""Mordell-Weil rank of an isotropic class and the search for classes of
positive rank.

For a primitive isotropic ``c`` in a hyperbolic lattice ``S`` the rank is

    r(c) = rank(c⊥) - rank(frame) = (rank S - 2) - rank(root span of c⊥/Zc)

where the frame is generated by ``c`` and the roots orthogonal to ``c``.
It depends only on the isometry class of ``c``, which the search exploits.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np

from . import _linalg as la
from .catalog import membership
from .enumeration import (SearchBudget, ShortVectorSearch, box_vectors_of_norm, roots,
                          vectors_of_norm)
from .lattice import (Sublattice, cartan_matrix, lattice, orthogonal_complement,
                      quotient_by_isotropic, saturate)
from .verdict import Answer, Verdict

__all__ = [
    "FibrationClass", "frame_lattice", "fibration_rank", "fibration_class",
    "FibrationEngine", "isotropic_representatives", "check_condition_finel",
    "reflect",
]


def reflect(S, delta, x):
    """The 2-reflection ``x + (x.delta) delta`` in a root ``delta``."""
    t = S.inner(x, delta)
    return tuple(xi + t * di for xi, di in zip(x, delta))


def _check_class(S, c):
    c = tuple(int(x) for x in c)
    if len(c) != S.rank:
        raise ValueError(f"vector must have length {S.rank}")
    if not any(c) or la.content(c) != 1:
        raise ValueError("c must be primitive")
    if S.norm(c) != 0:
        raise ValueError("c must be isotropic")
    return c


def _quotient_roots(S, c):
    cperp = orthogonal_complement(Sublattice(S, (c,)))
    q = quotient_by_isotropic(cperp, c)
    rs = vectors_of_norm(q.lattice, -2) if q.lattice.rank else []
    return cperp, q, rs


@dataclass(frozen=True)
class FibrationClass:
    c: tuple
    frame: Sublattice
    frame_saturated: Sublattice
    mw_rank: int

    def to_json(self):
        return {"c": list(self.c), "mw_rank": self.mw_rank,
                "frame_rank": self.frame.rank,
                "frame_saturated_basis": [list(r) for r in self.frame_saturated.basis]}


def _frame_and_rank(S, c):
    cperp, q, rs = _quotient_roots(S, c)
    lifts = [tuple(sum(r[i] * q.lift[i][j] for i in range(len(r))) for j in range(S.rank))
             for r in rs]
    frame = Sublattice.span(S, [c] + lifts)
    via_frame = cperp.rank - frame.rank
    via_quotient = (S.rank - 2) - (la.rank(rs) if rs else 0)
    if via_frame != via_quotient:
        raise AssertionError(f"rank formulas disagree at c={c}: {via_frame} vs {via_quotient}")
    return frame, via_frame


def frame_lattice(S, c):
    """Sublattice generated by ``c`` and all roots orthogonal to ``c``."""
    S = lattice(S)
    c = _check_class(S, c)
    return _frame_and_rank(S, c)[0]


def fibration_rank(S, c):
    """``r(c)``, computed through the frame and through the quotient; both must agree."""
    S = lattice(S)
    c = _check_class(S, c)
    return _frame_and_rank(S, c)[1]


def fibration_class(S, c):
    S = lattice(S)
    c = _check_class(S, c)
    frame, r = _frame_and_rank(S, c)
    return FibrationClass(c, frame, saturate(frame), r)


# ----------------------------------------------------------- fast oracles

def _u_block(S):
    if S.blocks is None:
        return None
    for blk in S.blocks:
        if blk.atom.kind == "U":
            return blk
    return None


class _SplitOracle:
    """``r(c)`` on ``S = U(n) + K`` without building ``c⊥/Zc``.

    Writing ``c = a e + b f + w`` with ``b != 0``, the quotient ``c⊥/Zc`` is
    isometric to the set of ``k - (y/b) w`` (``k`` in K, ``y`` in Z) subject to
    ``k.w + n y a = 0 mod n b``.  Its roots are found by closest-vector
    searches in the fixed definite lattice K around the points ``y w / b``.
    """

    def __init__(self, S, blk):
        self.S = S
        self.pos = blk.start
        self.n = blk.scale
        self.rest = [j for j in range(S.rank) if j not in (self.pos, self.pos + 1)]
        GK = [[S.gram[i][j] for j in self.rest] for i in self.rest]
        self.P = [[-x for x in row] for row in GK]
        self.search = ShortVectorSearch(self.P) if self.rest else None
        self.kroots = [v for v in self.search.search(2) if self._pnorm(v) == 2] if self.rest else []
        self.target = S.rank - 2

    def _pair(self, u, v):
        P = self.P
        return sum(u[i] * P[i][j] * v[j] for i in range(len(u)) if u[i]
                   for j in range(len(v)) if v[j])

    def _pnorm(self, u):
        return self._pair(u, u)

    def __call__(self, c):
        a, b = c[self.pos], c[self.pos + 1]
        w = [c[j] for j in self.rest]
        if b == 0 or (a != 0 and abs(a) < abs(b)):
            a, b = b, a
        n = self.n
        if self.target == 0:
            return 0
        mod = n * b
        Pw = [sum(row[j] * w[j] for j in range(len(w)) if w[j]) for row in self.P]
        found = []
        # y = 0: roots of K with k.w = 0 mod nb
        for k in self.kroots:
            if sum(ki * pi for ki, pi in zip(k, Pw)) % mod == 0:
                found.append(list(k))
        if found and la.rank_mod_p(found) == self.target:
            return 0
        for y in range(1, abs(b) // 2 + 1):
            center = [Fraction(y * x, b) for x in w]
            # exact: P(k - y w / b) = 2
            for k in self.search.search(2, center, exact=True):
                if (-sum(ki * pi for ki, pi in zip(k, Pw)) + n * y * a) % mod:
                    continue
                found.append([ki * b - y * wi for ki, wi in zip(k, w)])
            if found and la.rank_mod_p(found) == self.target:
                return 0
        return self.target - (la.rank(found) if found else 0)


class _PoolOracle:
    """``r(c)`` using a growing pool of known roots of ``S``.

    If the pool roots orthogonal to ``c`` already span a rank ``n-1`` lattice
    together with ``c``, then ``r(c) = 0`` (rank mod p bounds the true rank
    from below).  Otherwise the quotient is built and its roots, lifted back,
    join the pool.
    """

    def __init__(self, S):
        self.S = S
        self.G = np.array(S.gram, dtype=object)
        seed = []
        if S.blocks is not None:
            for blk in S.blocks:
                if blk.atom.kind in ("A", "D", "E") and blk.scale == 1:
                    for r in vectors_of_norm(_block_lattice(blk.atom), -2):
                        v = [0] * S.rank
                        v[blk.start:blk.stop] = r
                        seed.append(tuple(v))
        self.pool = set(seed)
        self._arr = None

    def _array(self):
        if self._arr is None:
            self._arr = np.array(sorted(self.pool), dtype=object).reshape(-1, self.S.rank)
        return self._arr

    def __call__(self, c):
        n = self.S.rank
        if n == 2:
            return 0
        if self.pool:
            arr = self._array()
            gc = np.array(self.S.dual_image(c), dtype=object)
            sel = arr[arr.dot(gc) == 0]
            if len(sel) and la.rank_mod_p([list(map(int, r)) for r in sel] + [list(c)]) == n - 1:
                return 0
        cperp, q, rs = _quotient_roots(self.S, c)
        for r in rs:
            lift = tuple(sum(r[i] * q.lift[i][j] for i in range(len(r))) for j in range(n))
            self.pool.add(lift)
        self._arr = None
        return (n - 2) - (la.rank(rs) if rs else 0)


@lru_cache(maxsize=None)
def _block_lattice(atom):
    from .lattice import realize
    return realize(str(atom))


class FibrationEngine:
    """Fast ``r(c)`` for many classes of one lattice."""

    def __init__(self, S):
        self.S = lattice(S)
        blk = _u_block(self.S)
        self.method = "split" if blk is not None else "pool"
        self._oracle = _SplitOracle(self.S, blk) if blk is not None else _PoolOracle(self.S)

    def mw_rank(self, c):
        return self._oracle(_check_class(self.S, c))


# ------------------------------------------------- isotropic representatives

@lru_cache(maxsize=None)
def _ade_data(kind, n):
    C = cartan_matrix(kind, n)
    Cinv = _rational_inverse(C)
    rts = [r for r in vectors_of_norm(_block_lattice_kind(kind, n), -2)]
    theta = max(rts, key=lambda r: (sum(r), r))
    return C, Cinv, tuple(theta)


def _block_lattice_kind(kind, n):
    from .expr import Atom
    return _block_lattice(Atom(kind, n))


def _rational_inverse(C):
    n = len(C)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(C)]
    for col in range(n):
        piv = next(i for i in range(col, n) if A[i][col])
        A[col], A[piv] = A[piv], A[col]
        p = A[col][col]
        A[col] = [x / p for x in A[col]]
        for i in range(n):
            if i != col and A[i][col]:
                f = A[i][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[col])]
    return [row[n:] for row in A]


@lru_cache(maxsize=None)
def diagram_automorphisms(kind, n):
    """Permutations of the simple roots preserving the Cartan matrix."""
    C = cartan_matrix(kind, n)
    out = []

    def rec(perm, used):
        i = len(perm)
        if i == n:
            out.append(tuple(perm))
            return
        for j in range(n):
            if j in used:
                continue
            if all(C[i][k] == C[j][perm[k]] for k in range(i)) and C[i][i] == C[j][j]:
                rec(perm + [j], used | {j})

    rec([], frozenset())
    return tuple(out)


def alcove_norm_bound(atom, level):
    """Largest unscaled norm of a point of the scaled alcove (a real bound)."""
    if atom.kind == "Scalar":
        return abs(atom.n) * (level // 2) ** 2
    C, Cinv, theta = _ade_data(atom.kind, atom.n)
    return max(Cinv[j][j] * level * level / (theta[j] * theta[j]) for j in range(len(C)))


@lru_cache(maxsize=None)
def extra_shifts(kind, r, n):
    """Weights ``p`` (root coordinates, one per nonzero class of P/Q) for which
    the transvection ``w -> w + n b p`` is an integral isometry of
    ``U(n) + K``: ``n p`` lies in the root lattice and ``n p.p`` is even."""
    C, Cinv, theta = _ade_data(kind, r)
    out = []
    for j in range(r):
        if theta[j] != 1:
            continue
        p = tuple(Cinv[i][j] for i in range(r))
        if all((n * x).denominator == 1 for x in p) and (n * Cinv[j][j]) % 2 == 0:
            out.append(p)
    return tuple(out)


def scalar_period(value, n):
    """Translation period, in units of b, of a rank-one summand ``[value]``
    under the transvections of ``U(n) + [value]``."""
    m = abs(value)
    n = abs(n)
    t = next(t for t in range(1, m + 1) if (n * t) % m == 0 and (n * t * t) % (2 * m) == 0)
    return n * t // m


_MAX_DUAL_CLASSES = 1 << 16


def _dual_classes(bl, n):
    """Classes ``k`` of the dual of one summand modulo the summand with
    ``n k`` in the summand, as ``(coordinates, k.k)`` with ``k.k`` taken
    positive.  Summands of scale other than one contribute only zero."""
    r = bl.stop - bl.start
    zero = (tuple(Fraction(0) for _ in range(r)), Fraction(0))
    if bl.atom.kind == "Scalar":
        m = abs(bl.atom.n * bl.scale)
        return [(((Fraction(t, m)),), Fraction(t * t, m)) for t in range(m) if (n * t) % m == 0]
    if bl.scale != 1:
        return [zero]
    C, Cinv, theta = _ade_data(bl.atom.kind, bl.atom.n)
    out = [zero]
    for j in range(r):
        if theta[j] == 1:
            p = tuple(Cinv[i][j] for i in range(r))
            if all((n * x).denominator == 1 for x in p):
                out.append((p, Cinv[j][j]))
    return out


class _ShiftLattice:
    """Closest-vector test for the transvections along f.

    The shifts ``k`` allowed in ``U(n) + K`` form a lattice between K and
    its dual (K plus the weights of ``extra_shifts`` and the rank-one
    periods).  The transvection along f with shift ``k`` sends ``b`` to
    ``(n a / 2) P(k + w / (n a))``, ``P = -K``; ``reduces`` says whether
    some shift makes that smaller than ``b``.
    """

    def __init__(self, S, blk):
        n = abs(blk.scale)
        self.pos = pos = blk.start
        self.n = blk.scale
        self.rest = rest = [j for j in range(S.rank) if j not in (pos, pos + 1)]
        r = len(rest)
        self.P = [[-S.gram[i][j] for j in rest] for i in rest]
        gens = []
        per_block = []
        for bl in S.blocks:
            if bl is blk:
                continue
            off = rest.index(bl.start)
            for i in range(bl.stop - bl.start):
                v = [Fraction(0)] * r
                v[off + i] = Fraction(1)
                gens.append(v)
            per_block.append((off, _dual_classes(bl, n)))
        # classes of K^v/K killed by n, with n k.k even across all blocks
        combos = 1
        for _, cl in per_block:
            combos *= len(cl)
        if combos > _MAX_DUAL_CLASSES:
            per_block = [(off, [c for c in cl if (n * c[1]) % 2 == 0]) for off, cl in per_block]
            choices = [[(off, c)] for off, cl in per_block for c in cl]
        else:
            choices = [list(zip([off for off, _ in per_block], pick))
                       for pick in itertools.product(*[cl for _, cl in per_block])]
        for pick in choices:
            if (n * sum(c[1] for _, c in pick)) % 2 != 0:
                continue
            v = [Fraction(0)] * r
            for off, (p, _) in pick:
                v[off:off + len(p)] = p
            if any(v):
                gens.append(v)
        D = 1
        for v in gens:
            for x in v:
                D = D * x.denominator // gcd(D, x.denominator)
        rows = [r_ for r_ in la.hnf([[int(x * D) for x in v] for v in gens]) if any(r_)]
        self.D = D
        self.basis = [list(r_) for r_ in rows]
        self.trivial = D == 1
        if not self.trivial:
            Q = la.gram_of(self.basis, self.P)
            self.inv = _rational_inverse(self.basis)
            self.search = ShortVectorSearch(Q)

    def reduces(self, c):
        if self.trivial:
            # shifts in K alone never beat an alcove point
            return False
        b = c[self.pos + 1]
        na = self.n * c[self.pos]
        D, P = self.D, self.P
        w = [c[j] for j in self.rest]
        r = len(w)
        target = [Fraction(-D * x, na) for x in w]
        center = [sum(target[i] * self.inv[i][j] for i in range(r) if target[i]) for j in range(r)]
        lim = 2 * b * na * D * D
        for y in self.search.search(Fraction(lim, na * na), center):
            k = [sum(y[i] * self.basis[i][j] for i in range(r) if y[i]) for j in range(r)]
            d = [na * kj + D * wj for kj, wj in zip(k, w)]
            if sum(d[i] * P[i][j] * d[j] for i in range(r) if d[i] for j in range(r) if d[j]) < lim:
                return True
        return False


@lru_cache(maxsize=None)
def shift_permutations(kind, r, n):
    """Each shift of ``extra_shifts`` acts on the alcove as a permutation of
    the extended coordinates ``(m_0, m_1, .., m_r)``, ``m_0 = level - (m, theta)``.
    Found once from a point whose extended coordinates are distinct."""
    C, Cinv, theta = _ade_data(kind, r)
    m = [Fraction(2 ** (i + 1)) for i in range(r)]
    level = sum(t * mi for t, mi in zip(theta, m)) + 1
    x = [sum(Cinv[i][j] * m[j] for j in range(r)) for i in range(r)]
    ext = [level - sum(t * mi for t, mi in zip(theta, m))] + m
    out = []
    for p in extra_shifts(kind, r, n):
        _, m2 = _to_alcove(C, theta, level, [xi + level * pi for xi, pi in zip(x, p)])
        ext2 = [level - sum(t * mi for t, mi in zip(theta, m2))] + list(m2)
        out.append(tuple(ext.index(v) for v in ext2))
    return tuple(out)


def _to_alcove(C, theta, level, x):
    """Image of ``x`` (root coordinates) in the level-``level`` alcove under
    the affine Weyl group."""
    r = len(x)
    x = list(x)
    while True:
        m = [sum(C[i][j] * x[j] for j in range(r)) for i in range(r)]
        i = next((i for i in range(r) if m[i] < 0), None)
        if i is not None:
            x[i] -= m[i]
            continue
        h = sum(t * mi for t, mi in zip(theta, m))
        if h > level:
            x = [xi - (h - level) * t for xi, t in zip(x, theta)]
            continue
        return x, m


@lru_cache(maxsize=None)
def alcove_points(atom, level, min_norm=0, n=None):
    """Lattice points of the scaled fundamental alcove of one summand with
    unscaled positive norm at least ``min_norm``.

    For a root lattice these are the ``x`` with ``(x, alpha_i) >= 0`` for all
    simple roots and ``(x, theta) <= level``; for a rank-one summand they are
    ``0 <= x <= level/2``.  Returned as ``(coords, norm)`` sorted by norm,
    one point per orbit of the diagram symmetries.  With ``n`` given, the
    orbits are those of the diagram symmetries together with the shifts by
    ``level * p`` for the weights ``p`` of ``extra_shifts``.
    The norm is convex in the coordinates ``m_i = (x, alpha_i)``, so over the
    simplex left for the unassigned ``m_j`` it peaks at a vertex; subtrees
    whose vertices all fall short are skipped.
    """
    if atom.kind == "Scalar":
        pts = [((x,), abs(atom.n) * x * x) for x in range(level // 2 + 1)]
        return tuple(p for p in pts if p[1] >= min_norm)
    C, Cinv, theta = _ade_data(atom.kind, atom.n)
    r = len(C)
    # integer arithmetic: D * Cinv is integral
    D = 1
    for row in Cinv:
        for v in row:
            D = D * v.denominator // gcd(D, v.denominator)
    Ci = [[int(v * D) for v in row] for row in Cinv]
    floor = min_norm * D
    out = []
    m = [0] * r
    # diagram symmetries fix the alcove; keep the lexicographically largest image
    autos = [g for g in diagram_automorphisms(atom.kind, atom.n) if list(g) != list(range(r))]
    perms = shift_permutations(atom.kind, atom.n, n) if n is not None else ()

    def rec(i, left, u, q):
        # u = D Cinv m (assigned part), q = D m . Cinv m
        if i == r:
            if q < floor or any(v % D for v in u):
                return
            mt = tuple(m)
            if any(tuple(mt[k] for k in g) > mt for g in autos):
                return
            if perms:
                ext = (level - sum(t * mi for t, mi in zip(theta, mt)),) + mt
                for sg in perms:
                    m2 = tuple(ext[sg[j]] for j in range(1, r + 1))
                    if m2 > mt or any(tuple(m2[k] for k in g) > mt for g in autos):
                        return
            out.append((tuple(v // D for v in u), q // D))
            return
        if q < floor:
            for j in range(i, r):
                th = theta[j]
                if q * th * th + 2 * left * th * u[j] + left * left * Ci[j][j] >= floor * th * th:
                    break
            else:
                return
        col = [Ci[p][i] for p in range(r)]
        for t in range(left // theta[i] + 1):
            m[i] = t
            if t:
                nu = [a + t * c for a, c in zip(u, col)]
                nq = q + 2 * t * u[i] + t * t * Ci[i][i]
            else:
                nu, nq = u, q
            rec(i + 1, left - t * theta[i], nu, nq)
        m[i] = 0

    rec(0, level, [0] * r, 0)
    return tuple(sorted(out, key=lambda p: (p[1], p[0])))


def _dominant(kind, n, x):
    """W-dominant representative of ``x`` (root coordinates) for ``(x, alpha_i) >= 0``."""
    C = _ade_data(kind, n)[0]
    x = list(x)
    while True:
        for i in range(n):
            p = sum(C[i][j] * x[j] for j in range(n))
            if p < 0:
                x[i] -= p
                break
        else:
            return tuple(x)


def _descent_representatives(S, blk, budget):
    """Terminal points of the Euclid-style descent on ``c = a e + b f + w``.

    The moves are: swapping e and f, changing the sign of c, Eichler
    transvections ``w -> w + n b k`` (k in K, or a dual vector ``k`` with
    ``n k`` in K and ``n k.k`` even), and the Weyl groups and diagram
    symmetries of the summands of K.  Terminal points that the
    transvections along f take to a smaller b are dropped, since their
    orbits are covered at a lower level.  Each orbit of a primitive isotropic class with
    ``min(|a|, |b|) <= B`` contains a point with ``w`` in the scaled alcove,
    ``0 <= b <= B`` and ``|a| >= b``; the swap otherwise shrinks b.
    """
    n = blk.scale
    pos = blk.start
    K = [bl for bl in S.blocks if bl is not blk]
    for bl in K:
        if bl.atom.kind == "U" or (bl.atom.kind == "Scalar" and bl.atom.n * bl.scale > 0):
            raise ValueError("complement of the U summand must be negative definite")
        if bl.scale < 0:
            raise ValueError("negative scale on a definite summand")
    order = sorted(range(len(K)), key=lambda i: (str(K[i].atom), K[i].scale))
    K = [K[i] for i in order]
    same_as_prev = [i > 0 and (K[i].atom, K[i].scale) == (K[i - 1].atom, K[i - 1].scale)
                    for i in range(len(K))]
    # finer translations from transvections by dual vectors (see extra_shifts)
    periods = [scalar_period(bl.atom.n * bl.scale, n) if bl.atom.kind == "Scalar" else abs(n)
               for bl in K]
    twist = [abs(n) if bl.atom.kind != "Scalar" and bl.scale == 1 else None for bl in K]
    shifts = _ShiftLattice(S, blk)
    e = [0] * S.rank
    e[pos] = 1
    reps = [tuple(e)]
    visited = 0
    B = budget.coefficient_bound
    for b in range(1, B + 1):
        need = 2 * abs(n) * b * b
        levels = [b * periods[i] for i in range(len(K))]
        bounds = [alcove_norm_bound(bl.atom, levels[i]) * bl.scale for i, bl in enumerate(K)]
        if sum(bounds) < need:
            continue
        scaled = []
        for i, bl in enumerate(K):
            deficit = need - (sum(bounds) - bounds[i])
            thr = -(-deficit // bl.scale) if deficit > 0 else 0
            pts = alcove_points(bl.atom, levels[i], int(thr), twist[i])
            scaled.append([(x, nrm * bl.scale) for x, nrm in pts])
        maxs = [max((nrm for _, nrm in p), default=None) for p in scaled]
        if any(mx is None for mx in maxs):
            continue
        suffix = [0] * (len(K) + 1)
        for i in range(len(K) - 1, -1, -1):
            suffix[i] = suffix[i + 1] + maxs[i]
        if suffix[0] < need:
            continue
        chosen = [None] * len(K)
        found = []

        def rec(i, start, total):
            nonlocal visited
            if total + suffix[i] < need:
                return
            if i == len(K):
                visited += 1
                if visited > budget.max_candidates:
                    raise _Exhausted
                if total % (2 * n * b):
                    return
                a = total // (2 * n * b)
                c = [0] * S.rank
                c[pos], c[pos + 1] = a, b
                for j, idx in enumerate(chosen):
                    c[K[j].start:K[j].stop] = scaled[j][idx][0]
                if la.content(c) == 1 and not shifts.reduces(c):
                    found.append(tuple(c))
                return
            lo = start if same_as_prev[i] else 0
            for idx in range(lo, len(scaled[i])):
                chosen[i] = idx
                nxt = idx if (i + 1 < len(K) and same_as_prev[i + 1]) else 0
                rec(i + 1, nxt, total + scaled[i][idx][1])

        try:
            rec(0, 0, 0)
        except _Exhausted:
            budget.exhausted = True
            reps.extend(sorted(found))
            break
        reps.extend(sorted(found))
    return reps, visited


class _Exhausted(Exception):
    pass


def _canonical_box(S, v):
    """Canonical form of ``v`` under the Weyl groups and sign changes of summands."""
    if S.blocks is None:
        return tuple(v)
    v = list(v)
    parts = []
    for bl in S.blocks:
        x = v[bl.start:bl.stop]
        if bl.atom.kind == "Scalar":
            x = [abs(x[0])]
        elif bl.atom.kind in ("A", "D", "E"):
            x = list(_dominant(bl.atom.kind, bl.atom.n, x))
        parts.append(((str(bl.atom), bl.scale), x))
    # sort identical summands
    i = 0
    while i < len(parts):
        j = i
        while j + 1 < len(parts) and parts[j + 1][0] == parts[i][0]:
            j += 1
        if j > i and parts[i][0][0] != "U":
            parts[i:j + 1] = sorted(parts[i:j + 1], key=lambda p: p[1])
        i = j + 1
    out = []
    for _, x in parts:
        out += x
    return tuple(out)


def isotropic_representatives(S, budget=None):
    """Primitive isotropic classes covering, up to isometry, everything the
    budget asks for.  Returns ``(representatives, info)``.

    With a U(n) summand the representatives come from the descent and cover
    every class with ``min(|a|, |b|) <= B``.  Otherwise the box
    ``|x|_inf <= B`` is searched and reduced by summand symmetries.
    """
    S = lattice(S)
    budget = budget or SearchBudget()
    if not S.is_hyperbolic:
        raise ValueError(f"{S} is not hyperbolic")
    blk = _u_block(S)
    if blk is not None:
        reps, visited = _descent_representatives(S, blk, budget)
        return reps, {"method": "descent", "visited": visited,
                      "representatives": len(reps), "exhausted": budget.exhausted}
    found = box_vectors_of_norm(S, 0, budget, primitive=True)
    reps = sorted({_canonical_box(S, v) for v in found})
    reps = [r for r in reps if la.content(r) == 1]
    return reps, {"method": "box", "visited": len(found),
                  "representatives": len(reps), "exhausted": budget.exhausted}


def check_condition_finel(S, budget=None, engine=None):
    """Search for an isotropic class with positive Mordell-Weil rank.

    False (certified) with the earliest witness if one is found; otherwise
    True when the lattice is in a published list, and UnknownAtBudget if not.
    """
    S = lattice(S)
    budget = budget or SearchBudget()
    engine = engine or FibrationEngine(S)
    reps, info = isotropic_representatives(S, budget)
    info["oracle"] = engine.method
    info["checked"] = 0
    for c in reps:
        info["checked"] += 1
        r = engine.mw_rank(c)
        if r > 0:
            info["mw_rank"] = r
            return Verdict(Answer.FALSE, tuple(c), "search", True, budget.to_json(), info)
    m = membership(S.expr if S.expr is not None else S.gram)
    info["catalog"] = m.to_json()
    if m.found:
        return Verdict(Answer.TRUE, None, "catalog", True, budget.to_json(), info)
    return Verdict(Answer.UNKNOWN, None, "search", False, budget.to_json(), info)
