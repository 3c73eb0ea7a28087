"""
The disk recursion: Catalan numbers, planar maps, factorization
===============================================================

The large N expectations C_p of necklaces obey a Tutte-style recursion
C_p = sum C_k C_(p-k-1) + sum_j j dV/dx_j C_(j+p-1).  With no potential the
Catalan numbers come out; a quartic necklace turns the coefficients into
rooted 4-valent planar map counts; melonic couplings graft trees of disks.
"""

from fractions import Fraction

from tmt import (
    Monomial,
    NecklaceTreeSpec,
    Potential,
    expectation_series,
    necklace_potential,
    necklace_tree_model,
    potential_from_model,
    realize_tree_of_necklaces,
    solve_formal,
    solve_numeric,
)

############################################################
# V = 0: the Gaussian disk function is the Catalan sequence, and the
# numeric fixed point lands on it immediately.

disks = solve_formal(Potential.zero(), 0, p_max=10)
print("Catalan:", [int(disks.coefficient(p, ())) for p in range(11)])
numeric = solve_numeric(Potential.zero(), 20)
print("numeric residual:", numeric.residual, "iterations:", numeric.iterations)

############################################################
# Pure quartic necklace with per-composition-slot weights: the disk series
# counts rooted 4-valent planar maps (1, 2, 9, 54, 378, ...), growth 12.

maps = solve_formal(necklace_potential(per_slot=True), 6, p_max=1)
print("rooted quartic planar maps:", maps.univariate(1))

############################################################
# Melonic sector: type {1,1} interactions branch the disk into trees,
# giving the 2^n-weighted Catalan counts of the branched-polymer phase.

V = Potential((Monomial(Fraction(1), ((1, 2),), "t"),))
print("melonic disk series:", solve_formal(V, 5, p_max=1).univariate(1))

############################################################
# Factorization at large N: the expectation of a tree of necklaces is the
# product of its necklace disk functions, order by order in the couplings.

model = necklace_tree_model([(NecklaceTreeSpec.from_sizes([2]), "t")])
c2 = solve_formal(potential_from_model(model), 3, p_max=2).univariate(2)
tree = realize_tree_of_necklaces(NecklaceTreeSpec.from_sizes([2, 2]))
lo = expectation_series(model, tree, 3).leading_parts()
for order in range(4):
    product = sum(c2[a] * c2[order - a] for a in range(order + 1))
    print(
        f"order {order}: <tree {{2,2}}> leading = {lo.coefficient((order,)).coeff(0)}, "
        f"C_2 * C_2 = {product}"
    )
