"""Coxeter diagrams of root configurations and the finite-volume test.

Roots ``d_1..d_m`` of norm -2 give the matrix ``M = -(d_i . d_j)`` with 2 on
the diagonal.  A subset is elliptic when its block of ``M`` is positive
definite, and parabolic when every connected component is positive
semidefinite of corank one (an affine diagram).  The rank of an elliptic set
is its size; the rank of a parabolic set is its size minus its number of
components.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from . import _linalg as la

__all__ = ["CoxeterData", "finite_volume_check", "elliptic_subsets", "affine_components",
           "parabolic_subsets", "cusps"]


@dataclass
class CoxeterData:
    """Pairings ``d_i . d_j`` of the accepted roots, with cached subdiagrams."""
    gram_of_roots: tuple
    cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram_of_roots)
        if any(g[i][i] != -2 for i in range(len(g))):
            raise ValueError("roots must have norm -2")
        self.gram_of_roots = g

    @classmethod
    def from_roots(cls, S, rts):
        return cls(tuple(tuple(S.inner(a, b) for b in rts) for a in rts))

    @property
    def size(self):
        return len(self.gram_of_roots)

    def cartan(self, i, j):
        return -self.gram_of_roots[i][j]

    def adjacent(self, i, j):
        return i != j and self.gram_of_roots[i][j] != 0


def _extend_ldl(C, members, piv, rows, v):
    """Pivot of ``v`` appended to an LDL factorization of ``members``.

    ``rows[t]`` holds the multipliers of member ``t``; returns
    ``(pivot, new_row)``.
    """
    new = []
    for t, u in enumerate(members):
        s = Fraction(C.cartan(v, u))
        for r in range(t):
            s -= new[r] * rows[t][r] * piv[r]
        new.append(s / piv[t])
    p = Fraction(2) - sum(new[r] * new[r] * piv[r] for r in range(len(members)))
    return p, new


def _elliptic_states(C, max_size):
    """Elliptic sets of size ``<= max_size`` with their LDL data."""
    key = ("elliptic", max_size)
    if key in C.cache:
        return C.cache[key]
    m = C.size
    out = [((), [], [])]

    def rec(members, piv, rows, start):
        if len(members) == max_size:
            return
        for v in range(start, m):
            p, new = _extend_ldl(C, members, piv, rows, v)
            if p > 0:
                state = (members + [v], piv + [p], rows + [new])
                out.append((tuple(state[0]), state[1], state[2]))
                rec(*state, v + 1)

    rec([], [], [], 0)
    C.cache[key] = out
    return out


def elliptic_subsets(C, max_size):
    """All elliptic vertex sets of size ``<= max_size`` as sorted tuples."""
    return [E for E, _, _ in _elliptic_states(C, max_size)]


def _connected(C, verts):
    verts = list(verts)
    if not verts:
        return True
    seen = {verts[0]}
    stack = [verts[0]]
    vs = set(verts)
    while stack:
        u = stack.pop()
        for w in vs:
            if w not in seen and C.adjacent(u, w):
                seen.add(w)
                stack.append(w)
    return len(seen) == len(vs)


def affine_components(C, max_size):
    """Connected parabolic vertex sets (affine diagrams) with at most ``max_size`` vertices.

    Each is a connected elliptic set plus one adjacent vertex whose LDL
    pivot vanishes.
    """
    key = ("affine", max_size)
    if key in C.cache:
        return C.cache[key]
    found = set()
    for E, piv, rows in _elliptic_states(C, max_size - 1):
        if not E or not _connected(C, E):
            continue
        members = list(E)
        for v in range(C.size):
            if v in E or not any(C.adjacent(v, u) for u in E):
                continue
            A = tuple(sorted(E + (v,)))
            if A in found:
                continue
            p, _ = _extend_ldl(C, members, piv, rows, v)
            if p == 0:
                found.add(A)
    out = sorted(found)
    C.cache[key] = out
    return out


def parabolic_subsets(C, rank):
    """Parabolic vertex sets of the given rank: unions of mutually orthogonal
    affine components whose sizes minus one add up to ``rank``."""
    comps = affine_components(C, rank + 1)
    out = []

    def rec(start, chosen, used, r):
        if r == rank:
            out.append(tuple(chosen))
            return
        for i in range(start, len(comps)):
            A = comps[i]
            if r + len(A) - 1 > rank:
                continue
            if used & set(A):
                continue
            if any(C.adjacent(a, u) for a in A for u in used):
                continue
            rec(i + 1, chosen + [A], used | set(A), r + len(A) - 1)

    rec(0, [], set(), 0)
    return out


def finite_volume_check(C, rank):
    """Vinberg's criterion for a polyhedron in hyperbolic space of dimension
    ``d = rank - 1`` (``rank`` is the lattice rank).

    True iff some elliptic set of rank ``d - 1`` exists and each one lies in
    exactly two sets that are elliptic of rank ``d`` or parabolic of rank
    ``d - 1``.  Callers must ensure the roots span the lattice.
    """
    d = rank - 1
    if d < 1:
        return False
    if d == 1:
        # a segment: two walls, or walls plus ideal ends handled by the caller
        return C.size >= 2
    ell = elliptic_subsets(C, d)
    corners = [E for E in ell if len(E) == d - 1]
    if not corners:
        return False
    count = {E: 0 for E in corners}
    for Z in ell:
        if len(Z) == d:
            for i in range(d):
                count[Z[:i] + Z[i + 1:]] += 1
    for P in parabolic_subsets(C, d - 1):
        choices = [()]
        for comp in P:
            choices = [ch + (v,) for ch in choices for v in comp]
        flat = sorted(v for comp in P for v in comp)
        for drop in choices:
            Y = tuple(v for v in flat if v not in drop)
            count[Y] = count.get(Y, 0) + 1
    return all(count[E] == 2 for E in corners)


def cusps(S, rts, C, rank):
    """Primitive isotropic vectors fixed by the maximal parabolic subdiagrams.

    Each is oriented to pair positively with the roots' ambient positive cone
    by the caller; here they are returned with canonical sign.
    """
    from .lattice import Sublattice, canonical_sign, orthogonal_complement
    out = set()
    for P in parabolic_subsets(C, rank - 2):
        verts = [v for comp in P for v in comp]
        perp = orthogonal_complement(Sublattice.span(S, [rts[v] for v in verts]))
        if perp.rank == 1:
            out.add(canonical_sign(perp.basis[0]))
    return sorted(out)
