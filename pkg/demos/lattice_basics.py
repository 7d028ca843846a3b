"""
Building lattices from expressions
==================================

Parse a few lattice expressions, look at their invariants and count roots.
"""

from k3lat import lattice, parse_lattice_expr, roots, smith_invariants, realize

# expressions are normalised: summand order does not matter
expr = parse_lattice_expr("A4+U+A1")
print(expr.normal_form(), "rank", expr.rank)

# the hyperbolic plane and a few definite atoms
for name in ["U", "U(2)+D4", "U+2E8+A1", "[32]+D4"]:
    S = lattice(name)
    print(f"{name:10s} rank {S.rank:2d}  signature {tuple(S.signature)[:2]}  det {S.determinant}"
          f"  divisors {[d for d in smith_invariants(S) if d != 1]}")

# roots of the exceptional atoms
for name in ["E6", "E7", "E8"]:
    print(name, len(roots(realize(name))), "roots")
