"""Even lattices given by exact Gram matrices, and their sublattices."""

from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Optional

from . import _linalg as la
from .expr import Atom, LatticeExpr, parse_lattice_expr

__all__ = [
    "GramLattice", "Sublattice", "SignatureTriple", "Block", "IsotropicQuotient",
    "cartan_matrix", "realize", "lattice", "inner_product", "determinant",
    "signature", "smith_invariants", "saturate", "orthogonal_complement",
    "intersect_sublattices", "quotient_by_isotropic", "canonical_sign",
]


class SignatureTriple(NamedTuple):
    positive: int
    negative: int
    zero: int


class Block(NamedTuple):
    """One direct summand of a lattice built from an expression."""
    atom: Atom
    scale: int
    start: int

    @property
    def stop(self):
        return self.start + self.atom.rank

    @property
    def indices(self):
        return range(self.start, self.stop)


def cartan_matrix(kind, n):
    """Cartan matrix of A_n, D_n or E_n (Bourbaki numbering)."""
    C = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def edge(i, j):
        C[i][j] = C[j][i] = -1

    if kind == "A":
        for i in range(n - 1):
            edge(i, i + 1)
    elif kind == "D":
        for i in range(n - 2):
            edge(i, i + 1)
        edge(n - 3, n - 1)
    elif kind == "E":
        # 1-3-4-5-6(-7-8) with 2 attached to 4
        edge(0, 2)
        edge(1, 3)
        for i in range(2, n - 1):
            edge(i, i + 1)
    else:
        raise ValueError(kind)
    return C


def _atom_gram(atom):
    if atom.kind == "U":
        return [[0, 1], [1, 0]]
    if atom.kind == "Scalar":
        return [[atom.n]]
    return [[-x for x in row] for row in cartan_matrix(atom.kind, atom.n)]


def canonical_sign(v):
    """``v`` or ``-v``, whichever has its first nonzero coordinate positive."""
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


@dataclass(frozen=True)
class GramLattice:
    """An even lattice presented by a symmetric integer Gram matrix.

    ``expr`` records the expression the lattice was realized from, if any;
    several algorithms use that block structure to go faster.
    """
    gram: tuple
    labels: Optional[tuple] = None
    expr: Optional[LatticeExpr] = field(default=None, compare=False)

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if any(len(row) != n for row in g):
            raise ValueError("Gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(i)):
            raise ValueError("Gram matrix must be symmetric")
        if any(g[i][i] % 2 for i in range(n)):
            raise ValueError("lattice is not even: odd diagonal entry")
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != n:
                raise ValueError("one label per basis vector")
            object.__setattr__(self, "labels", labels)

    @property
    def rank(self):
        return len(self.gram)

    def inner(self, u, v):
        g = self.gram
        return sum(u[i] * sum(g[i][j] * v[j] for j in range(len(v)) if v[j])
                   for i in range(len(u)) if u[i])

    def norm(self, v):
        return self.inner(v, v)

    def dual_image(self, v):
        """The vector ``G v`` whose dot products compute pairings with ``v``."""
        return tuple(sum(row[j] * v[j] for j in range(len(v)) if v[j]) for row in self.gram)

    @cached_property
    def determinant(self):
        return la.det(self.gram)

    @cached_property
    def signature(self):
        return SignatureTriple(*la.signature_counts(self.gram))

    @property
    def is_hyperbolic(self):
        return self.signature == (1, self.rank - 1, 0)

    @property
    def is_negative_definite(self):
        return self.signature == (0, self.rank, 0)

    @cached_property
    def blocks(self):
        """Direct-summand blocks from the expression, or ``None``."""
        if self.expr is None:
            return None
        out, start = [], 0
        for atom, scale in self.expr.blocks():
            out.append(Block(atom, scale, start))
            start += atom.rank
        return tuple(out)

    def __str__(self):
        if self.expr is not None:
            return str(self.expr)
        return "Gram" + str([list(r) for r in self.gram])


def realize(expr):
    """Block-diagonal Gram matrix of an expression.

    U is ``[[0,1],[1,0]]``; ADE atoms are negative definite, so their roots
    have square -2; ``[k]`` is ``(k)``; a scale multiplies the block.
    """
    expr = parse_lattice_expr(expr)
    n = expr.rank
    G = [[0] * n for _ in range(n)]
    labels = []
    start = 0
    for idx, (atom, scale) in enumerate(expr.blocks()):
        block = _atom_gram(atom)
        r = atom.rank
        for i in range(r):
            for j in range(r):
                G[start + i][start + j] = scale * block[i][j]
        name = str(atom) + ("" if scale == 1 else f"({scale})")
        if atom.kind == "U":
            labels += [f"{name}#{idx}.e", f"{name}#{idx}.f"]
        else:
            labels += [f"{name}#{idx}.{i + 1}" for i in range(r)]
        start += r
    return GramLattice(G, tuple(labels), expr)


def lattice(spec):
    """Coerce an expression string, expression, Gram matrix or lattice."""
    if isinstance(spec, GramLattice):
        return spec
    if isinstance(spec, (str, LatticeExpr)):
        return realize(spec)
    return GramLattice(spec)


def inner_product(L, u, v):
    if len(u) != L.rank or len(v) != L.rank:
        raise ValueError(f"vectors must have length {L.rank}")
    return L.inner(u, v)


def determinant(L):
    return L.determinant


def signature(L):
    return L.signature


def smith_invariants(L):
    """Elementary divisors of the Gram matrix, in divisibility order."""
    return la.elementary_divisors(L.gram)


@dataclass(frozen=True)
class Sublattice:
    """Sublattice spanned by the integer rows of ``basis``."""
    ambient: GramLattice
    basis: tuple
    saturated: bool = False

    def __post_init__(self):
        b = tuple(tuple(int(x) for x in row) for row in self.basis)
        object.__setattr__(self, "basis", b)
        if any(len(row) != self.ambient.rank for row in b):
            raise ValueError("basis rows must have the ambient rank")
        if la.rank(b) != len(b):
            raise ValueError("basis rows are linearly dependent")
        if self.saturated and la.hnf(_saturation_rows(b, self.ambient.rank)) != la.hnf(b):
            raise ValueError("basis does not span a saturated sublattice")

    @classmethod
    def span(cls, ambient, rows):
        """Sublattice generated by arbitrary integer rows, in Hermite form."""
        basis = la.hnf([list(r) for r in rows]) if rows else []
        sat = la.hnf(_saturation_rows(basis, ambient.rank)) == list(basis)
        return cls(ambient, tuple(basis), sat)

    @property
    def rank(self):
        return len(self.basis)

    @cached_property
    def gram(self):
        return tuple(tuple(r) for r in la.gram_of(self.basis, self.ambient.gram))

    def as_lattice(self):
        return GramLattice(self.gram)

    def contains(self, v):
        if not self.basis:
            return not any(v)
        return la.hnf(list(self.basis) + [list(v)]) == la.hnf(self.basis) and \
            la.rank(list(self.basis) + [list(v)]) == self.rank

    def same_span(self, other):
        return la.hnf(self.basis) == la.hnf(other.basis)

    def canonical(self):
        return Sublattice(self.ambient, tuple(la.hnf(self.basis)), self.saturated)


def _saturation_rows(basis, n):
    if not basis:
        return []
    return la.kernel(la.kernel(basis, n), n)


def saturate(F):
    """Primitive closure ``S ∩ (F ⊗ Q)`` with a Hermite-form basis."""
    rows = _saturation_rows(F.basis, F.ambient.rank)
    return Sublattice(F.ambient, tuple(rows), True)


def orthogonal_complement(F):
    """``{x : x·f = 0 for all f in F}``, always saturated."""
    S = F.ambient
    if not F.basis:
        rows = la.kernel([], S.rank)
    else:
        rows = la.kernel(la.matmul([list(b) for b in F.basis], [list(r) for r in S.gram]), S.rank)
    return Sublattice(S, tuple(rows), True)


def intersect_sublattices(F1, F2):
    """``F1 ∩ F2`` as subgroups of the ambient lattice."""
    if F1.ambient.gram != F2.ambient.gram:
        raise ValueError("sublattices live in different lattices")
    S = F1.ambient
    if not F1.basis or not F2.basis:
        return Sublattice(S, (), True)
    stacked = [list(r) for r in F1.basis] + [[-x for x in r] for r in F2.basis]
    rel = la.kernel(la.transpose(stacked), len(stacked))
    k1 = F1.rank
    rows = [[sum(y[i] * F1.basis[i][j] for i in range(k1)) for j in range(S.rank)]
            for y in rel]
    return Sublattice.span(S, rows)


class IsotropicQuotient(NamedTuple):
    """``c⊥ / Zc`` with maps in both directions.

    ``projection`` (n x (n-2)) sends an ambient vector of ``c⊥`` to quotient
    coordinates via ``x @ projection``; ``lift`` rows are representatives of
    the quotient basis in the ambient lattice.
    """
    lattice: GramLattice
    projection: tuple
    lift: tuple


def quotient_by_isotropic(Cperp, c):
    """The negative definite lattice ``c⊥/Zc`` of a primitive isotropic ``c``."""
    S = Cperp.ambient
    c = tuple(c)
    if la.content(c) != 1:
        raise ValueError("c is not primitive")
    if S.norm(c) != 0:
        raise ValueError("c is not isotropic")
    if not Cperp.contains(c):
        raise ValueError("c does not lie in the given complement")
    if Cperp.rank != S.rank - 1 or any(S.inner(c, b) for b in Cperp.basis):
        raise ValueError("Cperp must be the orthogonal complement of c")
    return _quotient(S, c, Cperp.basis)


def _quotient(S, c, perp_basis):
    n = S.rank
    k = len(perp_basis)
    # coordinates of c in the complement basis (integral since it is saturated)
    x, _ = la.solve_integer(la.transpose(perp_basis), list(c))
    M = la.complete_to_basis(x)
    lift = la.matmul(M, [list(b) for b in perp_basis])[1:]
    full = [list(c)] + lift
    full += _complete_saturated(full, n)
    inv = la.inverse_unimodular(full)
    projection = tuple(tuple(row[1:k]) for row in inv)
    gram = la.gram_of(lift, S.gram) if lift else []
    return IsotropicQuotient(GramLattice(gram), projection, tuple(tuple(r) for r in lift))


def _complete_saturated(rows, n):
    """Rows completing a basis of a saturated sublattice to a basis of Z^n."""
    k = len(rows)
    if k == n:
        return []
    # T R^T = [D; 0] with D unimodular, so R = [D | 0] P for P = (T^-1)^T
    _, T, _ = la.row_echelon_transform(la.transpose(rows))
    P = la.transpose(la.inverse_unimodular(T))
    return [list(r) for r in P[k:]]
