import random

import pytest
from hypothesis import given, strategies as st

from k3lat import (GramLattice, LatticeSyntaxError, Sublattice, determinant, inner_product,
                   intersect_sublattices, lattice, orthogonal_complement, parse_lattice_expr,
                   quotient_by_isotropic, realize, saturate, signature, smith_invariants)
from k3lat import _linalg as la
from k3lat.expr import Atom

import oracles

ATOMS = ["A1", "A2", "A3", "A4", "A5", "D4", "D5", "E6", "E7", "E8"]


# ------------------------------------------------------------- parsing


def test_parse_keeps_order_and_multiplicity():
    e = parse_lattice_expr("U+2E8+A1")
    assert [(s.multiplicity, str(s.atom), s.scale) for s in e.summands] == \
        [(1, "U", 1), (2, "E8", 1), (1, "A1", 1)]
    assert e.rank == 19


def test_parse_scalar_and_scale():
    e = parse_lattice_expr("[32]+D4")
    assert [(s.multiplicity, s.atom, s.scale) for s in e.summands] == \
        [(1, Atom("Scalar", 32), 1), (1, Atom("D", 4), 1)]
    assert str(parse_lattice_expr("U(2)+7A1")) == "U(2)+7A1"
    assert str(parse_lattice_expr(" U + [-4] ")) == "U+[-4]"


@pytest.mark.parametrize("text,offset", [
    ("U+A0", 2), ("U+D3", 2), ("E5", 0), ("U+[3]", 2), ("U(0)", 2),
    ("U+", 2), ("U*A1", 1), ("U+[4", 4), ("0A1", 0), ("X", 0),
])
def test_parse_errors_report_offset(text, offset):
    with pytest.raises(LatticeSyntaxError) as exc:
        parse_lattice_expr(text)
    assert exc.value.offset == offset


_atom_text = st.sampled_from(["U", "A1", "A2", "A4", "D4", "D6", "E6", "E8", "[2]", "[-4]", "[6]"])
_term = st.tuples(st.integers(1, 3), _atom_text, st.sampled_from([1, 2, -1, 3])).map(
    lambda t: ("" if t[0] == 1 else str(t[0])) + t[1] + ("" if t[2] == 1 else f"({t[2]})"))


@given(st.lists(_term, min_size=1, max_size=5))
def test_normal_form_idempotent_and_rank_preserving(terms):
    e = parse_lattice_expr("+".join(terms))
    nf = e.normal_form()
    assert parse_lattice_expr(str(nf)).normal_form() == nf
    assert str(parse_lattice_expr(str(nf))) == str(nf)
    assert nf.rank == e.rank
    # permuting the summands does not change the normal form
    shuffled = list(terms)
    random.Random(len(terms)).shuffle(shuffled)
    assert parse_lattice_expr("+".join(shuffled)).normal_form() == nf


# ------------------------------------------------------------- realize


def test_realize_conventions():
    assert realize("U").gram == ((0, 1), (1, 0))
    assert realize("A1").gram == ((-2,),)
    assert realize("U(2)").gram == ((0, 2), (2, 0))
    assert realize("[-4]").gram == ((-4,),)


def test_inner_product():
    U = lattice("U")
    assert inner_product(U, (1, 0), (1, 0)) == 0
    assert inner_product(U, (1, 1), (1, 1)) == 2
    assert inner_product(lattice("A1"), (1,), (1,)) == -2
    with pytest.raises(ValueError):
        inner_product(U, (1,), (1, 0))


@pytest.mark.parametrize("name", ATOMS)
def test_atoms_match_independent_cartan(name):
    kind, n = name[0], int(name[1:])
    L = realize(name)
    C = oracles.cartan(kind, n)
    assert determinant(L) == (-1) ** n * oracles.frac_det(C)
    assert signature(L) == (0, n, 0)
    assert all(L.gram[i][i] == -2 for i in range(n))


@pytest.mark.parametrize("expr,det,sig", [
    ("U", -1, (1, 1, 0)),
    ("U+2E8+A1", 2, (1, 18, 0)),
    ("U+[-4]", 4, (1, 2, 0)),
    ("U(2)+E8(2)", -2 ** 10, (1, 9, 0)),
])
def test_determinant_and_signature(expr, det, sig):
    L = lattice(expr)
    assert determinant(L) == det == oracles.frac_det(L.gram)
    assert signature(L) == sig


def test_e8_unimodular_by_elimination():
    assert oracles.frac_det(realize("E8").gram) == 1


def test_smith_u2_e8_2():
    inv = [abs(d) for d in smith_invariants(lattice("U(2)+E8(2)"))]
    assert inv == [2] * 10


@pytest.mark.parametrize("expr", ["U+A1", "U(2)+A2", "[6]+2A2", "U(3)+A1+[-4]", "D4(2)"])
def test_smith_matches_minors(expr):
    L = lattice(expr)
    assert [abs(d) for d in smith_invariants(L)] == oracles.smith_by_minors(L.gram)


@pytest.mark.parametrize("name", ATOMS + ["U"])
@pytest.mark.parametrize("scale", [-3, -2, -1, 2, 3, 4])
def test_determinant_scales(name, scale):
    r = realize(name).rank
    assert determinant(lattice(f"{name}({scale})")) == scale ** r * determinant(lattice(name))


@given(st.lists(st.sampled_from(ATOMS + ["U", "[2]", "[-6]"]), min_size=1, max_size=4))
def test_signature_additive(parts):
    total = [0, 0, 0]
    for p in parts:
        for i, x in enumerate(signature(lattice(p))):
            total[i] += x
    assert tuple(signature(lattice("+".join(parts)))) == tuple(total)


def test_odd_or_asymmetric_gram_rejected():
    with pytest.raises(ValueError):
        GramLattice([[1, 0], [0, -2]])
    with pytest.raises(ValueError):
        GramLattice([[0, 1], [2, 0]])


# ------------------------------------------------------------- sublattices


def test_saturate_examples():
    U = lattice("U")
    assert saturate(Sublattice(U, ((2, 0),))).basis == ((1, 0),)
    S = lattice("U+A1")
    F = Sublattice(S, ((2, 0, 2), (0, 2, 2)))
    sat = saturate(F)
    assert sat.same_span(Sublattice.span(S, [(1, 0, 1), (0, 1, 1)]))
    # saturated: every elementary divisor of the basis matrix is 1
    assert oracles.smith_by_minors([list(r) for r in sat.basis]) == [1, 1]
    # F has index 4 in its saturation
    coords = [la.solve_integer(la.transpose([list(r) for r in sat.basis]), list(v))[0]
              for v in F.basis]
    assert oracles.smith_by_minors(coords) == [2, 2]
    assert saturate(sat).basis == sat.basis


def test_orthogonal_complement_examples():
    U = lattice("U")
    assert orthogonal_complement(Sublattice(U, ((1, 0),))).same_span(Sublattice(U, ((1, 0),)))
    S = lattice("U+A1")
    assert orthogonal_complement(Sublattice(S, ((0, 0, 1),))).same_span(
        Sublattice(S, ((1, 0, 0), (0, 1, 0))))
    S = lattice("U+[-4]")
    assert orthogonal_complement(Sublattice(S, ((1, 0, 0),))).same_span(
        Sublattice(S, ((1, 0, 0), (0, 0, 1))))


def test_intersection_examples():
    S = lattice("U+A1")
    F = Sublattice(S, ((1, 0, 0), (0, 1, 0)))
    assert intersect_sublattices(F, F).same_span(F)
    assert intersect_sublattices(F, Sublattice(S, ((0, 0, 1),))).rank == 0
    S = lattice("U+[-4]")
    got = intersect_sublattices(Sublattice(S, ((1, 0, 0), (0, 1, 0))),
                                Sublattice(S, ((0, 1, 0), (0, 0, 1))))
    assert got.same_span(Sublattice(S, ((0, 1, 0),)))


def test_quotient_examples():
    U = lattice("U")
    q = quotient_by_isotropic(orthogonal_complement(Sublattice(U, ((1, 0),))), (1, 0))
    assert q.lattice.rank == 0
    S = lattice("U+A1")
    q = quotient_by_isotropic(orthogonal_complement(Sublattice(S, ((1, 0, 0),))), (1, 0, 0))
    assert q.lattice.gram == ((-2,),)
    with pytest.raises(ValueError):
        quotient_by_isotropic(orthogonal_complement(Sublattice(S, ((2, 0, 0),))), (2, 0, 0))


# ----------------------------------------------- randomized property suite

_entries = st.integers(-20, 20)


@st.composite
def integer_rows(draw, max_rank=8):
    n = draw(st.integers(2, max_rank))
    k = draw(st.integers(1, n))
    rows = draw(st.lists(st.lists(_entries, min_size=n, max_size=n), min_size=k, max_size=k))
    return n, rows


@st.composite
def even_gram(draw, max_rank=8):
    n = draw(st.integers(1, max_rank))
    G = [[0] * n for _ in range(n)]
    for i in range(n):
        G[i][i] = 2 * draw(st.integers(-10, 10))
        for j in range(i):
            G[i][j] = G[j][i] = draw(_entries)
    return GramLattice(G)


@given(integer_rows())
def test_saturation_idempotent(data):
    n, rows = data
    if la.rank(rows) != len(rows):
        return
    S = GramLattice([[2 if i == j else 0 for j in range(n)] for i in range(n)])
    F = Sublattice(S, tuple(tuple(r) for r in rows))
    sat = saturate(F)
    again = saturate(sat)
    assert again.basis == sat.basis
    assert sat.rank == F.rank
    # F lies in its saturation and the index is finite
    assert all(sat.contains(r) for r in rows)
    # torsion-free quotient: the basis matrix has all elementary divisors 1
    if n <= 5:
        assert set(oracles.smith_by_minors([list(r) for r in sat.basis])) == {1}
    assert oracles.gram_rank(sat.basis) == oracles.gram_rank(rows)


@given(even_gram(), st.data())
def test_double_complement_is_saturation(S, data):
    if S.determinant == 0:
        return
    n = S.rank
    k = data.draw(st.integers(1, n))
    rows = data.draw(st.lists(st.lists(_entries, min_size=n, max_size=n), min_size=k, max_size=k))
    if la.rank(rows) != k:
        return
    F = Sublattice(S, tuple(tuple(r) for r in rows))
    perp = orthogonal_complement(F)
    assert perp.rank == n - k
    back = orthogonal_complement(perp)
    assert back.same_span(saturate(F))


@given(even_gram())
def test_smith_product_is_determinant(S):
    d = [abs(x) for x in smith_invariants(S)]
    prod = 1
    for x in d:
        prod *= x
    det = abs(S.determinant)
    if det == 0:
        assert 0 in d or len(d) < S.rank
    else:
        assert prod == det
        assert all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1))
    assert S.determinant == oracles.frac_det(S.gram)


@given(even_gram(6))
def test_signature_matches_eigenvalues(S):
    assert tuple(S.signature) == oracles.signature_by_eigenvalues(S.gram)


@pytest.mark.parametrize("expr,c", [
    ("U+A1", (1, 0, 0)), ("U+[-4]", (0, 1, 0)), ("U+A3", (1, 1, 1, 1, 0)),
    ("U(2)+D4", (1, 2, 2, 0, 0, 0)), ("U+E8", (1, 0) + (0,) * 8), ("U+3A1", (2, 1, 1, 1, 0)),
])
def test_quotient_norm_well_defined(expr, c):
    S = lattice(expr)
    assert S.norm(c) == 0
    perp = orthogonal_complement(Sublattice(S, (c,)))
    assert perp.rank == S.rank - 1 and perp.contains(c)
    q = quotient_by_isotropic(perp, c)
    assert q.lattice.rank == S.rank - 2
    assert q.lattice.is_negative_definite or q.lattice.rank == 0
    rng = random.Random(7)
    for _ in range(100):
        coef = [rng.randint(-20, 20) for _ in perp.basis]
        x = [sum(a * b[j] for a, b in zip(coef, perp.basis)) for j in range(S.rank)]
        k = rng.randint(-20, 20)
        shifted = [xi + k * ci for xi, ci in zip(x, c)]
        assert S.norm(shifted) == S.norm(x)
        # the projection is a well-defined map to the quotient and preserves the norm
        p1 = [sum(x[i] * q.projection[i][j] for i in range(S.rank)) for j in range(q.lattice.rank)]
        p2 = [sum(shifted[i] * q.projection[i][j] for i in range(S.rank))
              for j in range(q.lattice.rank)]
        assert p1 == p2
        assert q.lattice.norm(p1) == S.norm(x)
