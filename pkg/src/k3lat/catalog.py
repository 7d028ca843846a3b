"""Published lists of lattices where every isotropic class has finite
Mordell-Weil rank, and lookup against them."""

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Optional

from .expr import LatticeExpr, parse_lattice_expr
from .lattice import GramLattice, lattice, realize, smith_invariants

__all__ = [
    "PaperList", "Membership", "load_lists", "get_list", "membership",
    "LIST_NAMES", "SERIES_A", "SERIES_B", "series_entry",
]

RANK6 = "Rank6Plus2Reflective"
RANK5 = "Rank5_2Reflective"
SERIES_A = "Rank5InfiniteSeriesA"
SERIES_B = "Rank5InfiniteSeriesB"
LIST_NAMES = (RANK6, RANK5, SERIES_A, SERIES_B)


def series_entry(name, parameter):
    """Member of an infinite series: ``[2^m]+D4`` (m >= 5) or ``[2*3^(2n-1)]+2A2`` (n >= 2)."""
    if name == SERIES_A:
        if parameter < 5:
            raise ValueError("series A starts at m = 5")
        return parse_lattice_expr(f"[{2 ** parameter}]+D4")
    if name == SERIES_B:
        if parameter < 2:
            raise ValueError("series B starts at n = 2")
        return parse_lattice_expr(f"[{2 * 3 ** (2 * parameter - 1)}]+2A2")
    raise ValueError(f"{name} is not a series")


@dataclass(frozen=True)
class PaperList:
    name: str
    entries: tuple  # LatticeExpr, empty for a series

    @property
    def is_series(self):
        return self.name in (SERIES_A, SERIES_B)

    def members(self, count=None):
        """Finite entries, or the first ``count`` members of a series."""
        if not self.is_series:
            return list(self.entries)
        start = 5 if self.name == SERIES_A else 2
        return [series_entry(self.name, p) for p in range(start, start + (count or 4))]


@dataclass(frozen=True)
class Membership:
    kind: str  # "InList", "InSeries", "InvariantMatch" or "NotFound"
    list_name: Optional[str] = None
    entry: Optional[str] = None
    parameter: Optional[int] = None

    @property
    def found(self):
        return self.kind in ("InList", "InSeries")

    def to_json(self):
        return {"kind": self.kind, "list": self.list_name, "entry": self.entry,
                "parameter": self.parameter}

    def __str__(self):
        if self.kind == "NotFound":
            return "NotFound"
        if self.kind == "InSeries":
            return f"InSeries({self.list_name}, {self.parameter})"
        return f"{self.kind}({self.list_name}, {self.entry})"


@lru_cache(maxsize=None)
def load_lists():
    text = resources.files("k3lat").joinpath("data/paper_lists.txt").read_text()
    found = {RANK6: [], RANK5: []}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        name, expr = line.split(None, 1)
        if name not in found:
            raise ValueError(f"line {lineno}: unknown list {name!r}")
        found[name].append(parse_lattice_expr(expr))
    lists = {n: PaperList(n, tuple(e)) for n, e in found.items()}
    lists[SERIES_A] = PaperList(SERIES_A, ())
    lists[SERIES_B] = PaperList(SERIES_B, ())
    return lists


def get_list(name):
    try:
        return load_lists()[name]
    except KeyError:
        raise ValueError(f"unknown list {name!r}; choose from {', '.join(LIST_NAMES)}")


def _series_match(nf):
    s = nf.summands
    if len(s) != 2 or s[0].atom.kind != "Scalar" or s[0].multiplicity != 1:
        return None
    k = s[0].atom.n * s[0].scale
    other = s[1]
    if other.scale != 1:
        return None
    if str(other.atom) == "D4" and other.multiplicity == 1:
        m = k.bit_length() - 1
        if k > 0 and k == 1 << m and m >= 5:
            return SERIES_A, m
    if str(other.atom) == "A2" and other.multiplicity == 2 and k > 0 and k % 2 == 0:
        q, e = k // 2, 0
        while q % 3 == 0:
            q //= 3
            e += 1
        if q == 1 and e % 2 == 1 and e >= 3:
            return SERIES_B, (e + 1) // 2
    return None


def _invariants(L):
    return (L.rank, tuple(L.signature), abs(L.determinant), tuple(smith_invariants(L)))


@lru_cache(maxsize=None)
def _fixture_invariants():
    out = []
    for name in (RANK6, RANK5):
        for e in get_list(name).entries:
            out.append((_invariants(realize(e)), name, str(e)))
    return out


def _series_invariant_match(inv):
    rank, sig, det, divs = inv
    if rank != 5 or sig != (1, 4, 0):
        return None
    for name in (SERIES_A, SERIES_B):
        unit = 4 if name == SERIES_A else 9
        if det % unit:
            continue
        k = det // unit
        probe = _series_match(parse_lattice_expr(
            f"[{k}]+D4" if name == SERIES_A else f"[{k}]+2A2").normal_form()) \
            if k % 2 == 0 else None
        if probe and _invariants(realize(series_entry(*probe))) == inv:
            return probe
    return None


def membership(x):
    """Where ``x`` (expression, string, Gram matrix or lattice) appears.

    Expressions are matched exactly after normalization.  Gram input is only
    compared by invariants (rank, signature, |det|, elementary divisors), which
    is reported as ``InvariantMatch`` and makes no isomorphism claim.
    """
    if isinstance(x, GramLattice) and x.expr is not None:
        x = x.expr
    if isinstance(x, (str, LatticeExpr)):
        nf = parse_lattice_expr(x).normal_form()
        for name in (RANK6, RANK5):
            for e in get_list(name).entries:
                if e.normal_form() == nf:
                    return Membership("InList", name, str(e))
        hit = _series_match(nf)
        if hit:
            return Membership("InSeries", hit[0], str(series_entry(*hit)), hit[1])
        return Membership("NotFound")
    L = lattice(x)
    inv = _invariants(L)
    matches = [(n, e) for i, n, e in _fixture_invariants() if i == inv]
    if matches:
        name, entry = matches[0]
        return Membership("InvariantMatch", name, entry)
    hit = _series_invariant_match(inv)
    if hit:
        return Membership("InvariantMatch", hit[0], str(series_entry(*hit)), hit[1])
    return Membership("NotFound")
