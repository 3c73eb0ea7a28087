"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines and timings.  All tolerances are pinned here.
"""

import time
from fractions import Fraction

import numpy as np
import pytest

from oracles import (
    rooted_quartic_map_count,
    rooted_quartic_map_count_closed_form,
    transition_point,
)

from tmt.bubbles import NecklaceTreeSpec, build_necklace, dipole, melon, realize_tree_of_necklaces
from tmt.criticality import (
    critical_point,
    find_transition,
    gamma_of_potential,
    radius_from_coefficients,
)
from tmt.feynman import expectation_series, gaussian_moment, necklace_tree_model
from tmt.laurent import LaurentPolynomial
from tmt.sd import (
    Potential,
    catalan,
    melonic_quartic_potential,
    necklace_potential,
    potential_from_model,
    solve_formal,
    solve_numeric,
    transition_potential,
)
from tmt.verify import (
    bounds_campaign,
    classifier_campaign,
    deletion_campaign,
    oracle_campaign,
    qmap_campaign,
    representation_campaign,
)


def report(num: int, passed: bool, detail: str, t0: float):
    status = "PASS" if passed else "FAIL"
    print(f"[{status}] criterion {num}: {detail} ({time.time() - t0:.1f}s)")
    assert passed, f"criterion {num} failed: {detail}"


def test_criterion_1_oracle_equivalence():
    t0 = time.time()
    result = oracle_campaign(max_vertices=6, n_values=(2, 3))
    named = (
        gaussian_moment([dipole()]) == LaurentPolynomial({1: 1})
        and gaussian_moment([melon(1)]) == LaurentPolynomial({1: 1, -1: 1})
        and gaussian_moment([build_necklace((1, 2), 2)]) == LaurentPolynomial({0: 2})
    )
    elapsed = time.time() - t0
    report(
        1,
        result.passed and named and elapsed < 60,
        f"wick == direct on {result.cases} catalog cases at N=2,3",
        t0,
    )


def test_criterion_2_one_over_n_bounds():
    t0 = time.time()
    vac = bounds_campaign("full", 4, cilia=0)
    cil = bounds_campaign("full", 4, cilia=1)
    elapsed = time.time() - t0
    report(
        2,
        vac.passed and cil.passed and elapsed < 300,
        f"Omega >= -4 on {vac.cases} vacuum and >= 0 on {cil.cases} one-cilium "
        "labeled map classes (<= 4 edges), trees saturate",
        t0,
    )


def test_criterion_3_edge_deletion_lemma():
    t0 = time.time()
    result = deletion_campaign("full", 4)
    report(3, result.passed, f"deletion inequalities on {result.cases} (map, edge) pairs", t0)


def test_criterion_4_lo_classifier():
    t0 = time.time()
    res = classifier_campaign("restricted", 4)
    ful = classifier_campaign("full", 4)
    report(
        4,
        res.passed and ful.passed,
        f"classify_lo verdict <=> Omega == -4 on {res.cases} restricted and "
        f"{ful.cases} full census maps; certificates non-empty exactly on failures",
        t0,
    )


def test_criterion_5_representation_equivalence():
    t0 = time.time()
    result = representation_campaign(3)
    report(5, result.passed, f"e(g) == -Omega(from_feynman(g)) on {result.cases} closures", t0)


def test_criterion_6_qmap_preservation():
    t0 = time.time()
    result = qmap_campaign(n_graphs=100, seed=20240, max_vertices=12)
    report(6, result.passed, f"e(g) == e(q_map(g)) on {result.cases} random closed graphs", t0)


def test_criterion_7_factorization():
    t0 = time.time()
    model = necklace_tree_model([(NecklaceTreeSpec.from_sizes([2]), "t")])
    disk = solve_formal(potential_from_model(model), 3, p_max=3)
    c1 = disk.univariate(1)
    c2 = disk.univariate(2)
    ok = True
    for sizes in ([2, 2], [1, 2]):
        obs = realize_tree_of_necklaces(NecklaceTreeSpec.from_sizes(sizes))
        series = expectation_series(model, obs, 3)
        factors = {1: c1, 2: c2}
        for order in range(4):
            product = sum(
                factors[sizes[0]][a] * factors[sizes[1]][order - a]
                for a in range(order + 1)
            )
            coeff = series.coefficient((order,))
            ok = ok and coeff.max_power() == 0 and coeff.coeff(0) == product
    report(7, ok, "LO expectation of trees {2,2} and {1,2} factorizes as prod C_p to order 3", t0)


def test_criterion_8_catalan_base_case():
    t0 = time.time()
    formal = solve_formal(Potential.zero(), 0, p_max=20)
    ok = all(formal.coefficient(p, ()) == catalan(p) for p in range(21))
    numeric = solve_numeric(Potential.zero(), 20)
    ok = ok and all(
        abs(numeric.values[p] - catalan(p)) <= 1e-10 * max(1, catalan(p))
        for p in range(21)
    )
    report(8, ok, "C_p = Catalan(p) for p <= 20, numeric within 1e-10", t0)


def test_criterion_9_entropy_exponents():
    t0 = time.time()
    gravity = gamma_of_potential(necklace_potential(per_slot=True), order=250)
    polymer = gamma_of_potential(melonic_quartic_potential(), order=250)
    r_star, tuned = find_transition(transition_potential, 1.0, 6.0, order=220, steps=16)
    r_exact, _ = transition_point()
    elapsed = time.time() - t0
    ok = (
        abs(gravity.gamma + 0.5) <= 0.1
        and abs(polymer.gamma - 0.5) <= 0.1
        and abs(tuned.gamma - 1.0 / 3.0) <= 0.15
        and abs(r_star - r_exact) < 0.3
        and elapsed < 600
    )
    report(
        9,
        ok,
        f"gamma = {gravity.gamma:+.3f} (necklace), {polymer.gamma:+.3f} (melonic), "
        f"{tuned.gamma:+.3f} at the tuned ratio {r_star:.3f} "
        f"(simultaneous-criticality oracle: {r_exact:.3f})",
        t0,
    )


def test_criterion_10_growth_constants():
    t0 = time.time()
    cat = radius_from_coefficients([float(catalan(n)) for n in range(200)])
    quartic = critical_point(necklace_potential(per_slot=True), order=200)
    disk = solve_formal(necklace_potential(per_slot=True), 8, p_max=1)
    c1 = disk.univariate(1)
    tutte_ok = all(
        c1[n] == rooted_quartic_map_count(n) == rooted_quartic_map_count_closed_form(n)
        for n in range(9)
    )
    ok = (
        abs(cat.radius - 0.25) <= 0.01 * 0.25
        and abs(quartic.growth - 12.0) <= 0.02 * 12.0
        and tutte_ok
    )
    report(
        10,
        ok,
        f"Catalan radius {cat.radius:.5f}, quartic growth {quartic.growth:.4f}; "
        "series == Tutte-recursion counts for n <= 8",
        t0,
    )
