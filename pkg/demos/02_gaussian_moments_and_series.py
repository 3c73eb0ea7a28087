"""
Wick closures, exact moments, and perturbative series
=====================================================

Close bubbles with color-0 edges, count faces, and read off exact
N-dependences.  Every moment is cross-checked by a brute-force sum over
tensor index assignments at small N.
"""

from tmt import (
    build_necklace,
    degree_exponent,
    dipole,
    enumerate_closures,
    expectation_series,
    free_energy_series,
    full_quartic,
    gaussian_moment,
    melon,
    restricted_quartic,
)

############################################################
# Gaussian moments as exact Laurent polynomials in N.  The melon closed two
# ways gives N + 1/N; the enhanced necklace moment is N-independent.

print("<dipole>      =", gaussian_moment([dipole()]))
print("<melon>       =", gaussian_moment([melon(1)]))
print("<necklace 12> =", gaussian_moment([build_necklace((1, 2), 2)]))

############################################################
# The independent oracle: sum over all index assignments at N = 2 and 3.

for n in (2, 3):
    wick = gaussian_moment([melon(1)]).evaluate(n)
    direct = gaussian_moment([melon(1)], "direct", n)
    print(f"melon moment at N={n}: wick={wick}, direct={direct}, equal={wick == direct}")

############################################################
# Degree exponents of closures.  In the maximally enhanced model every
# connected vacuum graph satisfies e(g) <= 4; the tree-like closures
# saturate the bound, and the necklace enhancement saturates it exactly.

model = full_quartic()
for name, bubble in [("melon", melon(1)), ("necklace", build_necklace((1, 2), 2))]:
    exps = [degree_exponent(g, model) for g in enumerate_closures([bubble])]
    print(f"{name} closure exponents: {sorted(exps)}")

############################################################
# Perturbative series: the normalized two-point expectation of the
# restricted model.  The N^0 part of each coefficient counts leading-order
# graphs; melonic couplings contribute -2 per insertion at first order,
# the enhanced necklace -4.

series = expectation_series(restricted_quartic(), dipole(), 1)
for monomial, coeff in sorted(series.to_json().items()):
    print(f"  C_1 coefficient of {monomial}: {coeff}")

############################################################
# The free energy (log Z / N^4) stays bounded: every coefficient has
# N-exponent at most zero.

fe = free_energy_series(restricted_quartic(), 2)
worst = max(poly.max_power() for poly in fe.terms.values())
print("max N-power across free-energy coefficients:", worst)
