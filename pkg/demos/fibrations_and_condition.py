"""
Elliptic fibrations and the finite Mordell-Weil condition
=========================================================

An isotropic class c gives an elliptic fibration; its Mordell-Weil rank is
computed from the roots in c-perp.  A lattice passes the condition when no
such class has positive rank.
"""

from k3lat import SearchBudget, check_condition_finel, fibration_class, fibration_rank, lattice

# U+[-4] fails: the class (1,0,0) has rank one
S = lattice("U+[-4]")
print("rank at (1,0,0):", fibration_rank(S, (1, 0, 0)))
v = check_condition_finel(S, SearchBudget(2))
print("condition:", v.answer, "witness", v.witness)

# U+3A1 is on the rank-5 list; no witness inside the budget
v = check_condition_finel("U+3A1", SearchBudget(20))
print("U+3A1:", v.answer, "certified" if v.certified else "at budget")

# the frame of a fibration on U+E8 is the whole E8
F = fibration_class("U+E8", (1, 0) + (0,) * 8)
print("U+E8 frame rank", F.frame_saturated.rank, "MW rank", F.mw_rank)
