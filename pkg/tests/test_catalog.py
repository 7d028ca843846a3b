import pytest

from k3lat import get_list, lattice, membership, parse_lattice_expr, realize
from k3lat.catalog import LIST_NAMES, SERIES_A, SERIES_B, series_entry

# Hand transcription of the printed rank >= 6 list, kept independent of the
# fixture file.  The printed list has 69 entries.
RANK6_PRINTED = """
U+2E8+A1; U+2E8; U+E8+E7; U+E8+D6; U+E8+D4+A1;
U+E8+D4, U+D8+D4, U+E8+4A1;
U+E8+3A1, U+D8+3A1, U+A3+E8;
U+E8+2A1, U+D8+2A1, U+D4+D4+2A1, U+A2+E8;
U+E8+A1, U+D8+A1, U+D4+D4+A1, U+D4+5A1;
U+E8, U+D8, U+E7+A1, U+D4+D4, U+D6+2A1, U(2)+D4+D4, U+D4+4A1, U+8A1, U+A2+E6;
U+E7, U+D6+A1, U+D4+3A1, U+7A1, U(2)+7A1, U+A7, U+A3+D4, U+A2+D5, U+D7, U+A1+E6;
U+D6, U+D4+2A1, U+6A1, U(2)+6A1, U+3A2, U+2A3, U+A2+A4, U+A1+A5, U+A6, U+A2+D4,
U+A1+D5, U+E6;
U+D4+A1, U+5A1, U(2)+5A1, U+A1+2A2, U+2A1+A3, U+A2+A3, U+A1+A4, U+A5, U+D5;
U+D4, U(2)+D4, U+4A1, U(2)+4A1, U+2A1+A2, U+2A2, U+A1+A3, U+A4, U(4)+D4, U(3)+2A2
"""

RANK5_PRINTED = ["U+3A1", "U(2)+3A1", "U+A1+A2", "U+A3", "U(4)+3A1",
                 "[4]+D4", "[8]+D4", "[16]+D4", "[6]+2A2"]


def _printed():
    return [t.strip() for t in RANK6_PRINTED.replace(";", ",").split(",") if t.strip()]


def test_rank6_fixture_matches_transcription():
    fixture = [str(e) for e in get_list("Rank6Plus2Reflective").entries]
    printed = _printed()
    assert len(printed) == 69
    assert fixture == printed


def test_rank5_fixture():
    assert [str(e) for e in get_list("Rank5_2Reflective").entries] == RANK5_PRINTED


def test_rank6_ranks_non_increasing_by_group():
    # entries are printed from rank 19 down to rank 6
    ranks = [parse_lattice_expr(e).rank for e in _printed()]
    assert ranks[0] == 19 and ranks[-1] == 6
    assert ranks == sorted(ranks, reverse=True)


@pytest.mark.parametrize("name", ["Rank6Plus2Reflective", "Rank5_2Reflective"])
def test_fixtures_realize_even_hyperbolic(name):
    for e in get_list(name).entries:
        L = realize(e)
        assert L.is_hyperbolic, e
        assert all(L.gram[i][i] % 2 == 0 for i in range(L.rank))
        assert L.rank >= (6 if name.startswith("Rank6") else 5)
        if name == "Rank5_2Reflective":
            assert L.rank == 5


def test_series_members():
    assert [str(e) for e in get_list(SERIES_A).members(4)] == \
        ["[32]+D4", "[64]+D4", "[128]+D4", "[256]+D4"]
    assert [str(e) for e in get_list(SERIES_B).members(2)] == ["[54]+2A2", "[486]+2A2"]
    with pytest.raises(ValueError):
        series_entry(SERIES_A, 4)
    assert set(LIST_NAMES) == {"Rank6Plus2Reflective", "Rank5_2Reflective", SERIES_A, SERIES_B}


def test_membership_examples():
    m = membership("U+2E8")
    assert (m.kind, m.list_name, m.entry) == ("InList", "Rank6Plus2Reflective", "U+2E8")
    m = membership("[54]+2A2")
    assert (m.kind, m.list_name, m.parameter) == ("InSeries", SERIES_B, 2)
    assert membership("[162]+2A2").kind == "NotFound"
    # order of summands does not matter
    m = membership("U+A4+A1")
    assert m.kind == "InList" and m.entry == "U+A1+A4"
    m = membership("D4+[64]")
    assert (m.kind, m.parameter) == ("InSeries", 6)
    assert membership("U+A1").kind == "NotFound"


def test_membership_from_gram_is_invariant_match():
    m = membership(lattice("U(3)+2A2").gram)
    assert m.kind == "InvariantMatch" and not m.found
    assert membership([[0, 1, 0], [1, 0, 0], [0, 0, -4]]).kind == "NotFound"
