"""Exact enumeration of lattice vectors of a given norm.

Definite lattices are searched by Fincke-Pohst on an LLL-reduced basis with
all bounds kept in exact rationals.  Indefinite lattices are searched inside a
coefficient box, solving the norm equation for one coordinate so that the
box has one dimension fewer.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _linalg as la
from .lattice import GramLattice, canonical_sign, lattice
from .verdict import Answer, Verdict

__all__ = [
    "SearchBudget", "RootSet", "ShortVectorSearch", "fincke_pohst", "vectors_of_norm", "roots",
    "box_vectors_of_norm", "primitive_isotropic_vectors", "has_isotropic",
    "worker_count", "parallel_map",
]

DEFAULT_BOUND = 20
DEFAULT_MAX_CANDIDATES = 10 ** 7


@dataclass
class SearchBudget:
    """Coefficient bound ``B`` and a cap on examined candidates.

    ``exhausted`` is set by a search that hit ``max_candidates`` before
    covering everything within ``coefficient_bound``.
    """
    coefficient_bound: int = DEFAULT_BOUND
    max_candidates: int = DEFAULT_MAX_CANDIDATES
    exhausted: bool = False

    def __post_init__(self):
        if self.coefficient_bound < 1 or self.max_candidates < 1:
            raise ValueError("budget bounds must be positive")

    def scaled(self, factor):
        return SearchBudget(self.coefficient_bound * factor, self.max_candidates)

    def to_json(self):
        return {"coefficient_bound": self.coefficient_bound,
                "max_candidates": self.max_candidates,
                "exhausted": self.exhausted}


def worker_count():
    try:
        return max(1, int(os.environ.get("K3LAT_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(fn, items):
    """``list(map(fn, items))``, spread over ``K3LAT_THREADS`` threads."""
    items = list(items)
    w = worker_count()
    if w == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=w) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------- definite

def _int_range(u, r):
    """Integers ``t`` with ``(t - u)^2 <= r`` for rationals ``u`` and ``r``."""
    if r < 0:
        return range(0)
    s = math.sqrt(float(r))
    uf = float(u)
    lo = math.ceil(uf - s)
    hi = math.floor(uf + s)

    def ok(t):
        d = t - u
        return d * d <= r

    while ok(lo - 1):
        lo -= 1
    while lo <= hi + 1 and not ok(lo) and lo < u:
        lo += 1
    while ok(hi + 1):
        hi += 1
    while hi >= lo and not ok(hi) and hi > u:
        hi -= 1
    return range(lo, hi + 1)


class ShortVectorSearch:
    """Fincke-Pohst enumeration for a fixed positive definite integer matrix.

    The LLL reduction and the triangular decomposition are computed once, so
    repeated searches around different centers are cheap.
    """

    def __init__(self, Q):
        self.n = n = len(Q)
        self.Q = [list(r) for r in Q]
        if n:
            self.T, Q2 = la.lll_gram([list(r) for r in Q])
            self.Tinv = la.inverse_unimodular(self.T)
            q = la.ldl_positive(Q2)
            self.qf = [[float(q[i][j]) for j in range(n)] for i in range(n)]

    def search(self, bound, center=None, exact=False):
        """All integer ``x`` with ``(x - center)^T Q (x - center) <= bound``, sorted.

        With ``exact`` only the points with equality are returned; the last
        coordinate is then solved for rather than scanned.  The recursion runs
        in floating point with a widened bound and every candidate is checked
        in exact arithmetic.
        """
        n = self.n
        bound = Fraction(bound)
        if n == 0:
            return [()] if bound >= 0 else []
        if bound < 0:
            return []
        # center = cn / L with integer cn
        L = 1
        if center is not None:
            center = [Fraction(x) for x in center]
            for x in center:
                L = L * x.denominator // math.gcd(L, x.denominator)
            cn = [x.numerator * (L // x.denominator) for x in center]
        else:
            cn = [0] * n
        T, Tinv, q = self.T, self.Tinv, self.qf
        c = [sum(cn[i] * Tinv[i][j] for i in range(n) if cn[i]) / L for j in range(n)]
        slack = 1e-7 * (1.0 + float(bound))
        y = [0] * n
        out = []

        def rec(i, remaining):
            u = c[i]
            qi = q[i]
            for j in range(i + 1, n):
                if qi[j]:
                    u -= qi[j] * (y[j] - c[j])
            r = max(remaining, 0.0) / qi[i]
            s = math.sqrt(r)
            tol = 1e-7 * (1.0 + s)
            if exact and i == 0:
                # keep t whose float residual against the exact target is tiny
                target = remaining - slack
                for t in sorted({math.floor(u - s), math.ceil(u - s), math.floor(u + s), math.ceil(u + s)}):
                    d = t - u
                    if abs(qi[0] * d * d - target) <= slack:
                        y[0] = t
                        out.append(tuple(y))
                y[0] = 0
                return
            for t in range(math.ceil(u - s - tol), math.floor(u + s + tol) + 1):
                y[i] = t
                d = t - u
                if i == 0:
                    out.append(tuple(y))
                else:
                    rec(i - 1, remaining - qi[i] * d * d)
            y[i] = 0

        rec(n - 1, float(bound) + slack)
        # exact filter, scaled by L
        lim = bound * L * L
        Q = self.Q
        res = set()
        for v in out:
            x = [sum(yi * T[i][j] for i, yi in enumerate(v) if yi) for j in range(n)]
            X = [L * x[j] - cn[j] for j in range(n)]
            val = sum(X[i] * Q[i][j] * X[j] for i in range(n) if X[i] for j in range(n) if X[j])
            if val == lim if exact else val <= lim:
                res.add(tuple(x))
        return sorted(res)


def fincke_pohst(Q, bound, center=None):
    """All integer ``x`` with ``(x - center)^T Q (x - center) <= bound``.

    ``Q`` is a positive definite integer matrix.  The result is sorted.
    """
    return ShortVectorSearch(Q).search(bound, center)


def _negative_definite(L):
    if not L.is_negative_definite:
        raise ValueError(f"{L} is not negative definite")


def vectors_of_norm(L, m):
    """All ``v`` with ``v.v = m`` in a negative definite lattice, up to sign.

    Each vector is returned with its first nonzero coordinate positive, and
    the list is sorted lexicographically.
    """
    L = lattice(L)
    if m >= 0:
        raise ValueError("norm must be negative")
    if L.rank == 0:
        return []
    _negative_definite(L)
    Q = [[-x for x in row] for row in L.gram]
    found = {canonical_sign(v) for v in fincke_pohst(Q, -m) if L.norm(v) == m}
    return sorted(found)


@dataclass(frozen=True)
class RootSet:
    """Roots of a definite lattice, each positive root followed by its negative."""
    lattice: GramLattice
    positive: tuple

    @property
    def roots(self):
        out = []
        for v in self.positive:
            out.append(v)
            out.append(tuple(-x for x in v))
        return out

    def __len__(self):
        return 2 * len(self.positive)

    def __iter__(self):
        return iter(self.roots)


def roots(L):
    L = lattice(L)
    return RootSet(L, tuple(vectors_of_norm(L, -2)))


# ------------------------------------------------------------- indefinite

_INT64_SAFE = 2 ** 62


def _box_points(dim, B, start, stop):
    """Rows ``start..stop`` of the box ``[-B, B]^dim`` in lexicographic order."""
    idx = np.arange(start, stop, dtype=np.int64)
    side = 2 * B + 1
    out = np.empty((len(idx), dim), dtype=np.int64)
    for p in range(dim - 1, -1, -1):
        out[:, p] = idx % side - B
        idx //= side
    return out


def _isqrt_vec(d):
    """Floor square roots of a nonnegative int64 array, exactly."""
    s = np.floor(np.sqrt(d.astype(np.float64))).astype(np.int64)
    s[s * s > d] -= 1
    s[(s + 1) * (s + 1) <= d] += 1
    return s


def _canonical_rows(X):
    """Flip each row so its first nonzero entry is positive, then dedupe."""
    if len(X) == 0:
        return X
    nz = X != 0
    first = np.argmax(nz, axis=1)
    sign = np.sign(X[np.arange(len(X)), first])
    sign[sign == 0] = 1
    return np.unique(X * sign[:, None], axis=0)


def _primitive_rows(X):
    if len(X) == 0:
        return X
    g = np.gcd.reduce(np.abs(X), axis=1)
    return X[g == 1]


def _pivot_coordinate(G):
    diag = [abs(G[i][i]) for i in range(len(G))]
    best = max(diag)
    return diag.index(best)


def _solve_chunk(X, G, k, m, B):
    """Complete rows ``X`` (all coordinates but ``k``) to solutions of ``x.x = m``."""
    n = len(G)
    others = [j for j in range(n) if j != k]
    Gk = np.array([G[k][j] for j in others], dtype=np.int64)
    Go = np.array([[G[i][j] for j in others] for i in others], dtype=np.int64)
    a = G[k][k]
    b = X @ Gk
    rest = np.einsum("ij,ij->i", X @ Go, X) - m
    sols = []
    if a != 0:
        disc = b * b - a * rest
        ok = disc >= 0
        Xo, bo, d = X[ok], b[ok], disc[ok]
        s = _isqrt_vec(d)
        sq = s * s == d
        Xo, bo, s = Xo[sq], bo[sq], s[sq]
        for sgn in (1, -1):
            num = -bo + sgn * s
            div = num % a == 0
            t = num[div] // a
            keep = np.abs(t) <= B
            sols.append((Xo[div][keep], t[keep]))
    else:
        nzb = b != 0
        num = -rest[nzb]
        den = 2 * b[nzb]
        div = num % den == 0
        t = num[div] // den[div]
        keep = np.abs(t) <= B
        sols.append((X[nzb][div][keep], t[keep]))
        free = (b == 0) & (rest == 0)
        Xf = X[free]
        if len(Xf):
            ts = np.arange(-B, B + 1, dtype=np.int64)
            sols.append((np.repeat(Xf, len(ts), axis=0), np.tile(ts, len(Xf))))
    rows = []
    for Xs, t in sols:
        if len(Xs):
            full = np.empty((len(Xs), n), dtype=np.int64)
            full[:, others] = Xs
            full[:, k] = t
            rows.append(full)
    return np.concatenate(rows) if rows else np.empty((0, n), dtype=np.int64)


def _check_int64(G, B, m):
    n = len(G)
    gmax = max((abs(x) for row in G for x in row), default=0)
    q = n * n * B * B * gmax + abs(m)
    if q * q * 4 >= _INT64_SAFE:
        raise OverflowError("box search would overflow 64-bit arithmetic; lower the bound")


def box_vectors_of_norm(S, m, budget, primitive=False, chunk=1 << 18):
    """All ``x`` with ``x.x = m`` and ``|x|_inf <= B``, up to sign, sorted.

    Sets ``budget.exhausted`` when the box has more than ``max_candidates``
    points, in which case only the first ``max_candidates`` are examined.
    """
    S = lattice(S)
    G = [list(r) for r in S.gram]
    n = S.rank
    B = budget.coefficient_bound
    if n == 1:
        pts = np.arange(-B, B + 1, dtype=np.int64)[:, None]
        sel = pts[(pts[:, 0] ** 2) * G[0][0] == m]
        return _finish(sel, primitive)
    _check_int64(G, B, m)
    k = _pivot_coordinate(G)
    total = (2 * B + 1) ** (n - 1)
    if total > budget.max_candidates:
        budget.exhausted = True
        total = budget.max_candidates
    ranges = [(s, min(s + chunk, total)) for s in range(0, total, chunk)]

    def work(r):
        X = _box_points(n - 1, B, *r)
        return _solve_chunk(X, G, k, m, B)

    parts = parallel_map(work, ranges)
    allrows = np.concatenate(parts) if parts else np.empty((0, n), dtype=np.int64)
    return _finish(allrows, primitive)


def _finish(rows, primitive):
    rows = rows[np.any(rows != 0, axis=1)] if len(rows) else rows
    if primitive:
        rows = _primitive_rows(rows)
    rows = _canonical_rows(rows)
    return [tuple(int(x) for x in r) for r in rows]


def _u_block(S):
    """``(position, scale)`` of the first U or U(n) summand, if known."""
    if S.blocks is None:
        return None
    for blk in S.blocks:
        if blk.atom.kind == "U":
            return blk.start, blk.scale
    return None


def _u_isotropic(S, budget, pos, scale, chunk=1 << 18):
    """Isotropic box search using ``v = a e + b f + w``, ``2 n a b = -w.w``."""
    n = S.rank
    B = budget.coefficient_bound
    rest = [j for j in range(n) if j not in (pos, pos + 1)]
    K = np.array([[S.gram[i][j] for j in rest] for i in rest], dtype=np.int64)
    _check_int64([list(r) for r in S.gram], B, 0)
    dim = len(rest)
    total = (2 * B + 1) ** dim
    if total > budget.max_candidates:
        budget.exhausted = True
        total = budget.max_candidates
    avals = [a for a in range(-B, B + 1) if a]
    span = np.arange(-B, B + 1, dtype=np.int64)

    def assemble(W, a, b):
        out = np.empty((len(W), n), dtype=np.int64)
        out[:, rest] = W
        out[:, pos] = a
        out[:, pos + 1] = b
        return out

    def work(r):
        W = _box_points(dim, B, *r) if dim else np.zeros((1, 0), dtype=np.int64)
        w2 = np.einsum("ij,ij->i", W @ K, W) if dim else np.zeros(1, dtype=np.int64)
        ok = w2 % (2 * scale) == 0
        W, N = W[ok], -(w2[ok] // (2 * scale))
        parts = []
        zero = N == 0
        Wz = W[zero]
        if len(Wz):
            reps = len(span)
            Wr = np.repeat(Wz, reps, axis=0)
            t = np.tile(span, len(Wz))
            parts.append(assemble(Wr, 0, t))
            parts.append(assemble(Wr, t, 0))
        Wn, Nn = W[~zero], N[~zero]
        for a in avals:
            div = Nn % a == 0
            bb = Nn[div] // a
            keep = np.abs(bb) <= B
            if np.any(keep):
                parts.append(assemble(Wn[div][keep], a, bb[keep]))
        return np.concatenate(parts) if parts else np.empty((0, n), dtype=np.int64)

    if dim == 0:
        parts = [work((0, 1))]
    else:
        parts = parallel_map(work, [(s, min(s + chunk, total)) for s in range(0, total, chunk)])
    rows = np.concatenate(parts) if parts else np.empty((0, n), dtype=np.int64)
    return _finish(rows, True)


def primitive_isotropic_vectors(S, budget=None):
    """Primitive ``v`` with ``v.v = 0`` and ``|v|_inf <= B``, up to sign.

    Lattices realized from an expression with a U or U(n) summand use the
    factor-pair parameterization; the output is the same set either way.
    """
    S = lattice(S)
    budget = budget or SearchBudget()
    if not S.is_hyperbolic:
        raise ValueError(f"{S} is not hyperbolic")
    ub = _u_block(S)
    if ub is not None:
        return _u_isotropic(S, budget, *ub)
    return box_vectors_of_norm(S, 0, budget, primitive=True)


def _binary_represents_zero(G):
    a, b, c = G[0][0], G[0][1], G[1][1]
    d = b * b - a * c
    return d >= 0 and math.isqrt(d) ** 2 == d


def has_isotropic(S, budget=None):
    """Whether ``S`` represents zero, with a witness when it does."""
    S = lattice(S)
    budget = budget or SearchBudget()
    sig = S.signature
    info = budget.to_json()
    if sig.zero:
        v = la.kernel(S.gram)[0]
        return Verdict(Answer.TRUE, tuple(v), "radical", True, info)
    if sig.positive == 0 or sig.negative == 0:
        return Verdict(Answer.FALSE, None, "definite", True, info)
    ub = _u_block(S)
    if ub is not None:
        v = [0] * S.rank
        v[ub[0]] = 1
        return Verdict(Answer.TRUE, tuple(v), "U-summand", True, info)
    if S.rank == 2 and not _binary_represents_zero(S.gram):
        return Verdict(Answer.FALSE, None, "discriminant-not-square", True, info)
    bound = 1 if S.rank >= 5 else budget.coefficient_bound
    while True:
        b = SearchBudget(bound, budget.max_candidates)
        found = box_vectors_of_norm(S, 0, b, primitive=True)
        if found:
            info["coefficient_bound"] = bound
            return Verdict(Answer.TRUE, found[0], "search", True, info)
        if b.exhausted or S.rank < 5 or (2 * bound + 1) ** (S.rank - 1) > budget.max_candidates:
            budget.exhausted = b.exhausted
            info["exhausted"] = b.exhausted
            return Verdict(Answer.UNKNOWN, None, "search", False, info)
        bound *= 2
