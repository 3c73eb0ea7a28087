import math

import numpy as np
import pytest

from oracles import transition_point

from tmt.criticality import (
    critical_point,
    find_transition,
    gamma_estimate,
    gamma_of_potential,
    radius_from_coefficients,
    richardson_table,
    transition_scan,
)
from tmt.sd import (
    Potential,
    catalan,
    melonic_quartic_potential,
    necklace_potential,
    solve_series_float,
    transition_potential,
)


def test_richardson_kills_inverse_powers():
    n = np.arange(5, 60)
    seq = 3.0 + 2.0 / n + 5.0 / n**2
    est = richardson_table(list(seq), list(n), levels=2)
    assert abs(est[-1] - 3.0) < 1e-6


def test_catalan_radius():
    seq = [float(catalan(n)) for n in range(120)]
    est = radius_from_coefficients(seq)
    assert abs(est.radius - 0.25) < 0.0025
    assert not est.oscillating


def test_catalan_radius_via_zero_potential():
    est = critical_point(Potential.zero(), order=150)
    assert abs(est.radius - 0.25) < 0.0025


def test_quartic_growth_constant():
    est = critical_point(necklace_potential(per_slot=True), order=200)
    assert abs(est.growth - 12.0) <= 0.02 * 12.0
    assert abs(est.radius - 1.0 / 12.0) <= 0.02 / 12.0


def test_alternating_signs_flagged():
    # the stable-side quartic series alternates; magnitudes still give 1/24
    fs = solve_series_float(
        Potential.from_json(
            {"monomials": [{"coeff": "1", "powers": {"2": 1}, "symbol": "g"}]}
        ),
        150,
    )
    assert fs.signs_alternate()
    est = radius_from_coefficients(fs.coeffs, fs.scale)
    assert est.oscillating
    assert abs(est.growth - 24.0) < 0.5


def test_melonic_radius_matches_lo_counts():
    est = critical_point(melonic_quartic_potential(), order=150)
    assert abs(est.growth - 8.0) < 0.05


def test_gamma_needs_enough_coefficients():
    with pytest.raises(ValueError):
        gamma_estimate([1.0] * 30)


def test_gamma_pure_gravity():
    fit = gamma_of_potential(necklace_potential(per_slot=True), order=250)
    assert abs(fit.gamma - (-0.5)) <= 0.1
    assert abs(fit.mu - 12.0) < 0.1


def test_gamma_branched_polymer():
    fit = gamma_of_potential(melonic_quartic_potential(), order=250)
    assert abs(fit.gamma - 0.5) <= 0.1
    assert abs(fit.mu - 8.0) < 0.1


def test_gamma_exact_power_law():
    # synthetic coefficients with a known exponent
    n = np.arange(1, 260)
    coeffs = np.concatenate([[1.0], 3.0**n * n ** (-5.0 / 3.0)])
    fit = gamma_estimate(coeffs)
    assert abs(fit.theta + 5.0 / 3.0) < 1e-6
    assert abs(fit.mu - 3.0) < 1e-6


def test_scan_monotone_theta():
    pts = transition_scan(transition_potential, [0.5, 3.0, 8.0], order=140)
    thetas = [p.fit.theta for p in pts]
    assert thetas[0] < -2.0 < thetas[-1]
    assert thetas == sorted(thetas)


def test_transition_location_and_gamma():
    r_star, fit = find_transition(transition_potential, 1.0, 6.0, order=220, steps=16)
    assert abs(fit.gamma - 1.0 / 3.0) <= 0.15
    r_exact, g_exact = transition_point()
    assert abs(r_exact - 3.0) < 1e-3  # the analytic point is exactly 3
    assert abs(r_star - r_exact) < 0.3
    # the growth constant at the true transition matches 1/g* = 128/3
    fit3 = gamma_of_potential(transition_potential(3), order=220)
    assert abs(fit3.mu - 1.0 / g_exact) < 0.05
    assert abs(fit3.gamma - 1.0 / 3.0) <= 0.15


def test_find_transition_needs_bracketing():
    with pytest.raises(ValueError):
        find_transition(transition_potential, 0.01, 0.05, order=100, steps=4)
