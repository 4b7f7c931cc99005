"""One enumeration gives N(b) for every b <= B, and Moebius inversion of that
profile gives the primitive count."""
from threepowers import count_report, primitive_nontrivial
from threepowers.arith import mobius_table
from threepowers.counting import nontrivial_profile

B = 60
prof = nontrivial_profile((1, 2), B)
print(prof[10], prof[30], prof[60])

# same numbers from separate runs
print([count_report((1, 2), b).nontrivial_ordered for b in (10, 30, 60)])

mu = mobius_table(B)
manual = sum(int(mu[m]) * prof[B // m] for m in range(1, B + 1))
print(manual, primitive_nontrivial((1, 2), B))
