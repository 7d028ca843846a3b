"""The exceptional sublattice of the automorphism group of the chamber, its
type, and the verdicts derived from it: counting fibrations, rational
curves, Enriques involutions and arithmeticity.

The exceptional sublattice is the intersection, over fibration classes
``c`` in the chamber with positive Mordell-Weil rank, of the saturated
frames of ``c``.  A finite search only sees some of the classes, so the
computed intersection contains the true one; it is certified when it is
already zero or when doubling the search leaves it unchanged.
"""

import itertools
from dataclasses import dataclass, field

from . import _linalg as la
from .catalog import membership
from .chamber import ChamberLimits, normalize_into_chamber, two_reflectivity, vinberg_chamber
from .enumeration import (SearchBudget, box_vectors_of_norm, has_isotropic, parallel_map,
                          primitive_isotropic_vectors)
from .fibration import (FibrationEngine, _u_block, check_condition_finel,
                        fibration_class, isotropic_representatives)
from .lattice import Sublattice, intersect_sublattices, lattice, smith_invariants
from .verdict import Answer, Verdict

__all__ = [
    "HYPERBOLIC", "PARABOLIC", "ELLIPTIC", "ZERO", "NotApplicable",
    "ExceptionalReport", "Finding", "CensusReport", "classify_type",
    "exceptional_sublattice", "root_existence", "fibration_census",
    "rational_curve_finiteness", "enriques_screen", "arithmeticity_report",
]

HYPERBOLIC = "Hyperbolic"
PARABOLIC = "Parabolic"
ELLIPTIC = "EllipticNonzero"
ZERO = "Zero"


class NotApplicable(Exception):
    """No fibration class of positive Mordell-Weil rank exists at the budget."""

    def __init__(self, message, verdict=None):
        super().__init__(message)
        self.verdict = verdict


@dataclass
class ExceptionalReport:
    lattice: object
    E: Sublattice
    type: str
    contributing_fibrations: list
    budget: SearchBudget
    certified: bool
    evidence: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "lattice": str(self.lattice),
            "E_basis": [list(r) for r in self.E.basis],
            "E_type": self.type,
            "fibrations": [f.to_json() for f in self.contributing_fibrations],
            "budgets": self.budget.to_json(),
            "certified": self.certified,
            "evidence": self.evidence,
        }


@dataclass
class Finding:
    """A labelled conclusion with its certification flag and evidence."""
    label: str
    certified: bool
    evidence: dict = field(default_factory=dict)

    def to_json(self):
        return {"label": self.label, "certified": self.certified, "evidence": self.evidence}


@dataclass
class CensusReport:
    has_fibration: object
    n_fibration_classes_at_budget: int
    n_infinite_mw_at_budget: int
    finiteness_verdicts: dict
    evidence: dict = field(default_factory=dict)

    @property
    def verdict(self):
        return self.finiteness_verdicts["fibrations"]

    def to_json(self):
        return {
            "has_fibration": self.has_fibration.to_json(),
            "n_fibration_classes_at_budget": self.n_fibration_classes_at_budget,
            "n_infinite_mw_at_budget": self.n_infinite_mw_at_budget,
            "finiteness_verdicts": {k: v.to_json() for k, v in self.finiteness_verdicts.items()},
            "evidence": self.evidence,
        }


def classify_type(E):
    """Type of a saturated sublattice of a hyperbolic lattice, from the exact
    signature of its Gram matrix."""
    if E.rank == 0:
        return ZERO
    pos, neg, zero = la.signature_counts([list(r) for r in E.gram])
    if pos > 0:
        return HYPERBOLIC
    if zero == 0:
        return ELLIPTIC
    if zero == 1 and len(la.kernel([list(r) for r in E.gram], E.rank)) == 1:
        return PARABOLIC
    raise ValueError("a sublattice of a hyperbolic lattice has at most a 1-dimensional kernel")


def _positive_rank_classes(S, engine, budget, extra=()):
    """Primitive isotropic vectors in the box (plus ``extra``) with ``r > 0``."""
    vs = primitive_isotropic_vectors(S, budget)
    cand = sorted({tuple(int(x) for x in v) for v in vs} | {tuple(v) for v in extra})
    return [c for c in cand if engine.mw_rank(c) > 0]


def _intersection_at(S, Ch, engine, budget, extra=()):
    """Nef classes of positive rank found at ``budget`` and the intersection
    of their saturated frames, folded in class order."""
    found = _positive_rank_classes(S, engine, budget, extra)
    nef = sorted({normalize_into_chamber(Ch, c) for c in found})
    fibs = parallel_map(lambda c: fibration_class(S, c), nef)
    E = None
    for f in fibs:
        E = f.frame_saturated if E is None else intersect_sublattices(E, f.frame_saturated)
    return E, fibs, len(found)


def exceptional_sublattice(S, budget=None, limits=None):
    """Intersection of the saturated frames of the nef classes of positive
    Mordell-Weil rank found at ``budget``.

    Raises NotApplicable when the search finds no such class.  The result is
    certified when it is zero or unchanged after doubling the bound.
    """
    S = lattice(S)
    budget = budget or SearchBudget()
    limits = limits or ChamberLimits()
    if not S.is_hyperbolic:
        raise ValueError(f"{S} is not hyperbolic")
    engine = FibrationEngine(S)
    cond = check_condition_finel(S, SearchBudget(budget.coefficient_bound, budget.max_candidates),
                                 engine)
    if not cond.is_false:
        raise NotApplicable(f"{S}: no fibration class of positive Mordell-Weil rank at the budget",
                            cond)
    Ch = vinberg_chamber(S, None, limits)
    E, fibs, n_found = _intersection_at(S, Ch, engine, budget, (cond.witness,))
    ev = {"witness": list(cond.witness), "chamber_status": Ch.status,
          "candidates": n_found, "nef_classes": len(fibs), "box_exhausted": budget.exhausted}
    certified = E.rank == 0
    if not certified and not budget.exhausted:
        wider = budget.scaled(2)
        E2, fibs2, n2 = _intersection_at(S, Ch, engine, wider, (cond.witness,))
        ev["recheck"] = {"coefficient_bound": wider.coefficient_bound, "candidates": n2,
                         "nef_classes": len(fibs2), "exhausted": wider.exhausted,
                         "unchanged": E2.same_span(E)}
        certified = ev["recheck"]["unchanged"] and not wider.exhausted and n2 > n_found
    return ExceptionalReport(S, E, classify_type(E), fibs, budget, certified, ev)


# ---------------------------------------------------------------- roots


def root_existence(S, budget=None):
    """Whether ``S`` has a vector of norm -2.

    For ``U(n) + K`` the answer is exact: a root exists iff
    some ``k`` in ``K/nK`` has ``k.k = -2 mod 2n``, and then
    ``((-2 - k.k)/2n) e + f + k`` is one.  Otherwise a box search decides
    only when it finds a root.
    """
    S = lattice(S)
    budget = budget or SearchBudget()
    info = budget.to_json()
    blk = _u_block(S)
    if blk is not None:
        n = abs(blk.scale)
        rest = [j for j in range(S.rank) if j not in (blk.start, blk.start + 1)]
        if n ** len(rest) <= budget.max_candidates:
            for k in itertools.product(range(n), repeat=len(rest)):
                v = [0] * S.rank
                for j, x in zip(rest, k):
                    v[j] = x
                k2 = S.norm(v)
                if (-2 - k2) % (2 * n) == 0:
                    v[blk.start] = (-2 - k2) // (2 * blk.scale)
                    v[blk.start + 1] = 1
                    assert S.norm(v) == -2
                    return Verdict(Answer.TRUE, tuple(v), "residues", True, info,
                                   {"residue_classes": n ** len(rest)})
            return Verdict(Answer.FALSE, None, "residues", True, info,
                           {"residue_classes": n ** len(rest)})
    found = box_vectors_of_norm(S, -2, budget)
    if found:
        return Verdict(Answer.TRUE, tuple(found[0]), "search", True, info)
    return Verdict(Answer.UNKNOWN, None, "search", False, info,
                   {"exhausted": budget.exhausted})


# ------------------------------------------------------------- verdicts


def fibration_census(S, budget=None, limits=None):
    """How many elliptic fibrations, and how many with infinite Mordell-Weil
    group, a K3 surface with this Picard lattice has."""
    S = lattice(S)
    budget = budget or SearchBudget()
    limits = limits or ChamberLimits()
    has = has_isotropic(S, SearchBudget(budget.coefficient_bound, budget.max_candidates))
    ev = {"catalog": None}
    if S.rank <= 2:
        out = Finding("AtMostTwoFibrations", True, {"rank": S.rank})
        return CensusReport(has, 0, 0, {"fibrations": out}, ev)
    if not has.is_true:
        out = Finding("NoFibration" if has.is_false else "Unknown", has.certified, {})
        return CensusReport(has, 0, 0, {"fibrations": out}, ev)
    m = membership(S.expr if S.expr is not None else S.gram)
    ev["catalog"] = m.to_json()
    engine = FibrationEngine(S)
    reps, info = isotropic_representatives(
        S, SearchBudget(budget.coefficient_bound, budget.max_candidates))
    ev["representatives"] = info
    if m.kind == "InList":
        # every class has rank 0 by the catalog theorem; skip the per-class ranks
        out = Finding("FinitelyManyFibrationsAutFinite", True, {"source": "catalog"})
        return CensusReport(has, len(reps), 0, {"fibrations": out}, ev)
    n_inf = sum(1 for c in reps if engine.mw_rank(c) > 0)
    if n_inf == 0 and m.kind == "InSeries":
        # A(M) infinite while every fibration has finite Mordell-Weil group
        out = Finding("InfinitelyManyFibrationsAllFiniteMW", True, {"source": "catalog"})
    elif n_inf == 0:
        out = Finding("Unknown", False, {"reason": "no positive-rank class at the budget"})
    else:
        try:
            rep = exceptional_sublattice(S, budget, limits)
        except NotApplicable:
            rep = None
        ev["exceptional"] = rep.to_json() if rep else None
        if rep is not None and rep.certified and rep.type == PARABOLIC:
            out = Finding("ExactlyOneFibrationWithInfiniteMW", True, {"E_type": rep.type})
        elif rep is not None and rep.certified and rep.type == ZERO:
            out = Finding("InfinitelyManyFibrationsWithInfiniteMW", True, {"E_type": rep.type})
        else:
            out = Finding("Unknown", False, {"E_type": rep.type if rep else None})
    return CensusReport(has, len(reps), n_inf, {"fibrations": out}, ev)


def rational_curve_finiteness(S, limits=None, budget=None, condition_verdict=None):
    """Whether a K3 surface with Picard lattice ``S`` has no, finitely many
    or infinitely many smooth rational curves."""
    S = lattice(S)
    limits = limits or ChamberLimits()
    budget = budget or SearchBudget()
    rt = root_existence(S, SearchBudget(budget.coefficient_bound, budget.max_candidates))
    ev = {"roots": rt.to_json()}
    if not rt.is_true:
        return Finding("None", rt.certified, ev)
    if S.rank == 2:
        return Finding("Finite", True, ev)
    if condition_verdict is None and _u_block(S) is not None:
        condition_verdict = check_condition_finel(
            S, SearchBudget(budget.coefficient_bound, budget.max_candidates))
    tr = two_reflectivity(S, limits, condition_verdict)
    ev["two_reflectivity"] = tr.to_json()
    if tr.is_true:
        return Finding("Finite", True, ev)
    if tr.is_false:
        return Finding("Infinite", tr.certified, ev)
    return Finding("Unknown", False, ev)


_ENRIQUES_RANK = 10
_ENRIQUES_DET = 2 ** 10


def enriques_screen(S):
    """Necessary invariants for the Picard lattice of a K3 surface with
    finitely many Enriques involutions.  A screen, not an isomorphism test."""
    S = lattice(S)
    divisors = [abs(d) for d in smith_invariants(S)]
    sig = S.signature
    m = membership(S.expr if S.expr is not None else S.gram)
    ev = {"rank": S.rank, "signature": [sig.positive, sig.negative],
          "determinant": S.determinant, "elementary_divisors": divisors,
          "catalog": m.to_json()}
    if S.rank < _ENRIQUES_RANK:
        return Finding("RankBelow10NoEnriquesInvolution", True, ev)
    checks = {
        "rank": S.rank == _ENRIQUES_RANK,
        "signature": (sig.positive, sig.negative, sig.zero) == (1, 9, 0),
        "even": all(S.gram[i][i] % 2 == 0 for i in range(S.rank)),
        "determinant": abs(S.determinant) == _ENRIQUES_DET,
        "elementary_divisors": divisors == [2] * _ENRIQUES_RANK,
    }
    ev["checks"] = checks
    if all(checks.values()):
        return Finding("MatchesU2E8_2Invariants", True, ev)
    return Finding("DoesNotMatchU2E8_2", True, ev)


def arithmeticity_report(S, limits=None, budget=None):
    """Which of the three arithmetic cases applies, as far as can be decided."""
    S = lattice(S)
    limits = limits or ChamberLimits()
    budget = budget or SearchBudget()
    rt = root_existence(S, SearchBudget(budget.coefficient_bound, budget.max_candidates))
    ev = {"roots": rt.to_json()}
    if not rt.is_true:
        return Finding("Case1", rt.certified, ev)
    if S.rank == 2:
        return Finding("Case2", True, ev)
    m = membership(S.expr if S.expr is not None else S.gram)
    ev["catalog"] = m.to_json()
    if m.kind == "InList":
        # finite A(M): the exceptional sublattice is all of S
        return Finding("Case3Candidate", True, ev)
    try:
        rep = exceptional_sublattice(S, budget, limits)
    except NotApplicable as exc:
        ev["exceptional"] = {"not_applicable": str(exc)}
        return Finding("Unknown", False, ev)
    ev["exceptional"] = rep.to_json()
    if rep.type == ZERO:
        return Finding("NotArithmetic", rep.certified, ev)
    return Finding("Case3Candidate", rep.certified, ev)
