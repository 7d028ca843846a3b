"""
Vinberg chambers
================

Run Vinberg's algorithm on small hyperbolic lattices and move vectors into
the fundamental chamber.
"""

from k3lat import (SearchBudget, normalize_into_chamber, primitive_isotropic_vectors,
                   two_reflectivity, vinberg_chamber)

for name in ["U", "U+3A1", "U+A3", "U(2)+3A1"]:
    Ch = vinberg_chamber(name)
    print(f"{name:9s} {Ch.status}  walls {len(Ch.accepted_roots)}")

Ch = vinberg_chamber("U+A3")
print("roots:", Ch.accepted_roots)

# isotropic classes and their chamber representatives
for c in primitive_isotropic_vectors(Ch.lattice, SearchBudget(2))[:4]:
    print(c, "->", normalize_into_chamber(Ch, c))

print("U+3A1 2-reflective:", two_reflectivity("U+3A1").answer)
