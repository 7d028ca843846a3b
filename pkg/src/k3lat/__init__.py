"""Even hyperbolic lattices, elliptic fibrations of K3 surfaces and the
finiteness questions they decide.

Everything is exact integer arithmetic; floating point only prunes searches
whose results are then rechecked over the integers.
"""

from .catalog import LIST_NAMES, Membership, PaperList, get_list, membership, series_entry
from .chamber import (EXHAUSTED, FINITE, INFINITE, Chamber, ChamberLimits,
                      chamber_to_json, is_in_chamber, normalize_into_chamber,
                      two_reflectivity, vinberg_chamber)
from .enumeration import (SearchBudget, box_vectors_of_norm, has_isotropic,
                          primitive_isotropic_vectors, roots, vectors_of_norm)
from .exceptional import (CensusReport, ExceptionalReport, Finding, NotApplicable,
                          arithmeticity_report, classify_type, enriques_screen,
                          exceptional_sublattice, fibration_census, rational_curve_finiteness,
                          root_existence)
from .expr import LatticeExpr, LatticeSyntaxError, parse_lattice_expr
from .fibration import (FibrationClass, FibrationEngine, check_condition_finel,
                        fibration_class, fibration_rank, frame_lattice,
                        isotropic_representatives, reflect)
from .lattice import (GramLattice, Sublattice, determinant, inner_product,
                      intersect_sublattices, lattice, orthogonal_complement,
                      quotient_by_isotropic, realize, saturate, signature, smith_invariants)
from .verdict import Answer, Verdict

__version__ = "0.1.0"
