"""
Exceptional sublattice and fibration census
===========================================

Intersect the frames of all positive-rank fibrations in the chamber and
read off what that says about fibrations and automorphisms.
"""

from k3lat import (SearchBudget, arithmeticity_report, enriques_screen, exceptional_sublattice,
                   fibration_census, rational_curve_finiteness)
from k3lat.chamber import ChamberLimits

limits = ChamberLimits(max_roots=30)

rep = exceptional_sublattice("U+[-4]", SearchBudget(20), limits)
print("E basis", rep.E.basis, "type", rep.type, "certified", rep.certified)

for name in ["U", "U+E8", "U+[-4]"]:
    print(f"{name:7s}", fibration_census(name, SearchBudget(20), limits).verdict.label)

print("rational curves on U+[-4]:", rational_curve_finiteness("U+[-4]", limits).label)
print("arithmeticity of U(2)+[-4]:", arithmeticity_report("U(2)+[-4]").label)
print("Enriques screen:", enriques_screen("U(2)+E8(2)").label, enriques_screen("U+E8").label)
