"""Counting solutions of x^c+y^c+z^c = u^c+v^c+w^c paired with the d-th powers.

Run: python3 demos/counting_walkthrough.py
"""
from threepowers import brute_force_oracle, count_report, list_nontrivial, trivial_count_closed_form

# (1, 2): sums and sums of squares.  small heights first
for B in (6, 10, 12):
    rep = count_report((1, 2), B)
    print(B, rep.total_ordered, rep.trivial_ordered, rep.nontrivial_ordered, rep.primitive_nontrivial)

# the O(B^6) loop agrees on the overlap
print(brute_force_oracle((1, 2), 8) == count_report((1, 2), 8))

# trivial solutions are permutations, so the count does not depend on (c, d)
print(trivial_count_closed_form(50), count_report((2, 5), 50).trivial_ordered)

# the first few genuine coincidences for (1, 3)
for sol in list_nontrivial((1, 3), 12, cap=5):
    print(sol.height, tuple(sol.left), tuple(sol.right), "gcd", sol.gcd)
