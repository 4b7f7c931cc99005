"""Planes on X_{c,d}, the intersection of the two diagonal hypersurfaces."""
from threepowers import linear_space_count, nonstandard_plane_probe, planes_on_X, singular_candidates, standard_planes

# signed Fermat form of degree k: standard planes from matchings and roots of +-1
for k in (1, 2, 3, 4):
    print(k, len(standard_planes(k)))

# general counting formula for linear spaces on x_0^k + ... + x_{2m+1}^k
print(linear_space_count(2, 3).count, linear_space_count(2, 3).expected)

# only the trivial planes carry positive rational points
census = planes_on_X((1, 4))
print(census.total_rational_positive)

# brute search over a finite field finds nothing outside the standard family
rep = nonstandard_plane_probe(4, 17, seed=1)
print(rep.all_standard, rep)

# numerical singular locus (heuristic)
print(singular_candidates((1, 3)).count)
