"""Vinberg's algorithm for the fundamental chamber of the reflection group
generated by roots, chamber membership, and normalization into the chamber."""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt

from . import _linalg as la
from .catalog import membership
from .coxeter import CoxeterData, cusps, finite_volume_check
from .enumeration import ShortVectorSearch, vectors_of_norm
from .lattice import GramLattice, Sublattice, canonical_sign, lattice, orthogonal_complement
from .verdict import Answer, Verdict

__all__ = [
    "Chamber", "ChamberLimits", "NormalizationBudget", "FINITE", "EXHAUSTED", "INFINITE",
    "vinberg_chamber", "auto_base_point", "is_in_chamber", "normalize_into_chamber",
    "two_reflectivity", "chamber_to_json",
]

FINITE = "FiniteVolumeCertified"
EXHAUSTED = "BudgetExhausted"
INFINITE = "InfiniteVolumeCertified"


class NormalizationBudget(RuntimeError):
    """Raised when normalization needs more reflections than allowed."""


@dataclass
class ChamberLimits:
    max_roots: int = 200
    max_height: int = 10 ** 6  # bound on (d . v0)^2
    max_steps: int = 10 ** 5   # reflections allowed in one normalization


@dataclass
class Chamber:
    lattice: GramLattice
    base_point: tuple
    accepted_roots: list
    status: str
    heights: list = field(default_factory=list)
    coxeter: CoxeterData = None
    cusps: list = field(default_factory=list)
    evidence: dict = field(default_factory=dict)

    def walls(self):
        return list(self.accepted_roots)


def _gram_vec(S, v):
    return S.dual_image(v)


def auto_base_point(S):
    """Canonical vector of positive square.

    ``e + f`` of the first U summand if the lattice was built from an
    expression with one; else the first basis vector of positive square;
    else the first positive vector of a growing coefficient box.
    """
    if S.blocks is not None:
        for blk in S.blocks:
            if blk.atom.kind == "U":
                v = [0] * S.rank
                v[blk.start] = v[blk.start + 1] = 1 if blk.scale > 0 else 0
                if blk.scale < 0:
                    v[blk.start], v[blk.start + 1] = 1, -1
                return tuple(v)
    for i in range(S.rank):
        if S.gram[i][i] > 0:
            return tuple(int(i == j) for j in range(S.rank))
    B = 1
    while True:
        best = None
        for v in _box(S.rank, B):
            if S.norm(v) > 0:
                best = canonical_sign(v)
                break
        if best:
            return best
        B += 1


def _box(n, B):
    if n == 0:
        yield ()
        return
    for rest in _box(n - 1, B):
        for x in sorted(range(-B, B + 1), key=lambda t: (abs(t), -t)):
            yield rest + (x,)


def _height0_simple_roots(S, v0):
    """Simple roots, for the order "first nonzero coordinate positive", of the
    finite root system orthogonal to ``v0``."""
    perp = orthogonal_complement(Sublattice(S, (tuple(v0),)))
    L0 = GramLattice(perp.gram)
    if L0.rank == 0:
        return []
    rs = vectors_of_norm(L0, -2)
    up = []
    for r in rs:
        v = tuple(sum(r[i] * perp.basis[i][j] for i in range(len(r))) for j in range(S.rank))
        up.append(canonical_sign(v))
    pos = set(up)
    simple = []
    for r in sorted(pos):
        decomposable = False
        for s in pos:
            t = tuple(a - b for a, b in zip(r, s))
            if t in pos:
                decomposable = True
                break
        if not decomposable:
            simple.append(r)
    return sorted(simple)


class _SliceSearch:
    """Roots ``d`` with ``d . v0 = k``: a closest-vector search in ``v0``-perp."""

    def __init__(self, S, v0):
        self.S = S
        self.v0 = tuple(v0)
        self.N = S.norm(v0)
        self.gv0 = list(_gram_vec(S, v0))
        self.g = la.content(self.gv0)
        perp = orthogonal_complement(Sublattice(S, (self.v0,)))
        self.basis = [list(b) for b in perp.basis]
        self.gram0 = [list(r) for r in perp.gram]
        self.inv0 = _frac_inverse(self.gram0) if self.basis else []
        self.search = ShortVectorSearch([[-x for x in r] for r in self.gram0]) if self.basis else None

    def roots_at(self, k):
        S = self.S
        x, _ = la.solve_integer([self.gv0], [k])
        if x is None:
            return []
        if not self.basis:
            return [tuple(x)] if S.norm(x) == -2 else []
        h = [S.inner(x, b) for b in self.basis]
        p = [sum(self.inv0[i][j] * h[j] for j in range(len(h))) for i in range(len(h))]
        x_par = Fraction(S.norm(x)) - sum(p[i] * h[i] for i in range(len(h)))
        bound = x_par + 2
        if bound < 0:
            return []
        out = []
        for y in self.search.search(bound, [-t for t in p], exact=True):
            d = [x[j] + sum(y[i] * self.basis[i][j] for i in range(len(y))) for j in range(S.rank)]
            if S.norm(d) == -2:
                out.append(tuple(d))
        return sorted(out)


def _frac_inverse(M):
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
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


def _rank2_all_roots(S):
    """Every root of a rank-2 lattice that represents zero (a finite set)."""
    G = S.gram
    p, q, r = G[0][0], G[0][1], G[1][1]
    s2 = q * q - p * r
    s = isqrt(s2)
    if s * s != s2:
        return None
    if p == 0:
        u = (1, 0)
    else:
        u = tuple(la.primitive([-q + s, p]))
    M = la.complete_to_basis(list(u))
    G2 = la.gram_of(M, G)
    q2, r2 = G2[0][1], G2[1][1]
    out = set()
    # x u + y w with y (2 q2 x + r2 y) = -2
    for y in (1, -1, 2, -2):
        num = -2 // y - r2 * y
        if (-2) % y == 0 and q2 and num % (2 * q2) == 0:
            x = num // (2 * q2)
            v = tuple(x * M[0][j] + y * M[1][j] for j in range(2))
            if S.norm(v) == -2:
                out.add(v)
    return sorted(out)


def vinberg_chamber(S, v0=None, limits=None):
    """Fundamental chamber containing ``v0`` (AUTO when ``None``) in its closure."""
    S = lattice(S)
    limits = limits or ChamberLimits()
    if not S.is_hyperbolic:
        raise ValueError(f"{S} is not hyperbolic")
    v0 = tuple(v0) if v0 is not None else auto_base_point(S)
    if S.norm(v0) <= 0:
        raise ValueError("base point must have positive square")
    accepted = list(_height0_simple_roots(S, v0))
    heights = [0] * len(accepted)
    n = S.rank

    def make(status, extra=None):
        C = CoxeterData.from_roots(S, accepted)
        cs = []
        if status == FINITE and n >= 3:
            cs = [c if S.inner(c, v0) > 0 else tuple(-x for x in c)
                  for c in cusps(S, accepted, C, n)]
        return Chamber(S, v0, list(accepted), status, list(heights), C, sorted(cs),
                       extra or {})

    if n == 2:
        allr = _rank2_all_roots(S)
        if allr is not None:
            cand = sorted({r if S.inner(r, v0) > 0 else tuple(-x for x in r)
                           for r in allr if S.inner(r, v0) != 0})
            cand.sort(key=lambda r: (S.inner(r, v0), r))
            for r in cand:
                if all(S.inner(r, a) >= 0 for a in accepted):
                    accepted.append(r)
                    heights.append(S.inner(r, v0) ** 2)
            return make(FINITE, {"rank2": "all roots enumerated"})

    search = _SliceSearch(S, v0)
    if n >= 3 and _certify(S, accepted):
        return make(FINITE)
    if n == 2 and len(accepted) >= 2:
        return make(FINITE)
    k = 0
    while True:
        k += search.g
        if k * k > limits.max_height:
            return make(EXHAUSTED, {"reason": "max_height", "last_height": (k - search.g) ** 2})
        new = False
        for d in search.roots_at(k):
            if all(S.inner(d, a) >= 0 for a in accepted):
                accepted.append(d)
                heights.append(k * k)
                new = True
                if len(accepted) > limits.max_roots:
                    accepted.pop()
                    heights.pop()
                    return make(EXHAUSTED, {"reason": "max_roots"})
        if new:
            if n == 2 and len(accepted) >= 2:
                return make(FINITE)
            if n >= 3 and _certify(S, accepted):
                return make(FINITE)


def _certify(S, rts):
    if not rts or la.rank(rts) < S.rank:
        return False
    return finite_volume_check(CoxeterData.from_roots(S, rts), S.rank)


def is_in_chamber(Ch, v):
    return all(Ch.lattice.inner(v, d) >= 0 for d in Ch.accepted_roots)


def _reflect(S, d, v):
    t = S.inner(v, d)
    return tuple(a + t * b for a, b in zip(v, d))


def separating_root(S, v0, v):
    """A root ``d`` with ``d . v0 > 0`` and ``d . v < 0``, or ``None``.

    The Gram determinant of ``(v0, v, d)`` is nonnegative, which bounds
    ``k = d . v0`` and ``m = -d . v`` by ``k m <= v . v0``.  The first root in
    the order (k, m, coordinates) is returned.
    """
    N, V, h = S.norm(v0), S.norm(v), S.inner(v, v0)
    if h * h == N * V:
        return None
    gv0 = list(_gram_vec(S, v0))
    gv = list(_gram_vec(S, v))
    basis = la.kernel([gv0, gv], S.rank)
    gram2 = la.gram_of(basis, S.gram)
    inv2 = _frac_inverse(gram2) if basis else []
    search = ShortVectorSearch([[-x for x in r] for r in gram2]) if basis else None
    g0 = la.content(gv0)
    total = 2 * (h * h - N * V)
    k = 0
    while True:
        k += g0
        if k > h:
            return None
        m = 0
        while True:
            m += 1
            if k * m > h or V * k * k + 2 * h * k * m + N * m * m > total:
                break
            x, _ = la.solve_integer([gv0, gv], [k, -m])
            if x is None:
                continue
            if not basis:
                if S.norm(x) == -2:
                    return tuple(x)
                continue
            hh = [S.inner(x, b) for b in basis]
            p = [sum(inv2[i][j] * hh[j] for j in range(len(hh))) for i in range(len(hh))]
            bound = Fraction(S.norm(x)) - sum(p[i] * hh[i] for i in range(len(hh))) + 2
            if bound < 0:
                continue
            for y in search.search(bound, [-t for t in p], exact=True):
                d = tuple(x[j] + sum(y[i] * basis[i][j] for i in range(len(y)))
                          for j in range(S.rank))
                if S.norm(d) == -2:
                    return d


def normalize_into_chamber(Ch, v, max_steps=None, return_word=False):
    """Image of ``±v`` in the chamber under reflections.

    Violated walls are reflected in first, in wall order.  When no wall is
    violated but the chamber is not certified complete, an exact search for
    a separating root decides, so the answer never depends on Vinberg's
    budget.  The reflection word is re-applied as a check.
    """
    S = Ch.lattice
    v0 = Ch.base_point
    v = tuple(v)
    if S.norm(v) < 0:
        raise ValueError("vector must have nonnegative square")
    sign = 1
    if S.inner(v, v0) < 0:
        v = tuple(-x for x in v)
        sign = -1
    max_steps = max_steps or ChamberLimits().max_steps
    word = []
    cur = v
    while True:
        if len(word) >= max_steps:
            raise NormalizationBudget(f"no chamber point after {max_steps} reflections")
        d = next((d for d in Ch.accepted_roots if S.inner(cur, d) < 0), None)
        if d is None and Ch.status != FINITE:
            d = separating_root(S, v0, cur)
        if d is None:
            break
        cur = _reflect(S, d, cur)
        word.append(d)
    check = v
    for d in word:
        check = _reflect(S, d, check)
    if check != cur:
        raise AssertionError("reflection word does not reproduce the result")
    if return_word:
        return cur, sign, word
    return cur


def two_reflectivity(S, limits=None, condition_verdict=None):
    """Whether the reflection group has finite index in O(S).

    True when Vinberg's algorithm certifies a finite-volume chamber.  A known
    isotropic class of positive Mordell-Weil rank certifies False, since a
    finite chamber forces every such rank to vanish.
    """
    S = lattice(S)
    limits = limits or ChamberLimits()
    Ch = vinberg_chamber(S, None, limits)
    m = membership(S.expr if S.expr is not None else S.gram)
    ev = {"chamber_status": Ch.status, "walls": len(Ch.accepted_roots),
          "catalog": m.to_json()}
    budget = {"max_roots": limits.max_roots, "max_height": limits.max_height}
    if Ch.status == FINITE:
        if m.kind == "InSeries":
            raise AssertionError(f"{S} certified finite but catalog places it in an infinite series")
        return Verdict(Answer.TRUE, None, "vinberg", True, budget, ev)
    if condition_verdict is not None and condition_verdict.is_false:
        ev["witness_mw_rank"] = condition_verdict.evidence.get("mw_rank")
        return Verdict(Answer.FALSE, condition_verdict.witness, "fibration-witness", True,
                       budget, ev)
    return Verdict(Answer.UNKNOWN, None, "vinberg", False, budget, ev)


def chamber_to_json(Ch):
    return {
        "lattice": str(Ch.lattice),
        "base_point": list(Ch.base_point),
        "roots": [list(d) for d in Ch.accepted_roots],
        "status": Ch.status,
        "heights": list(Ch.heights),
    }
