from fractions import Fraction

import numpy as np
import pytest

from oracles import rooted_quartic_map_count, rooted_quartic_map_count_closed_form

from tmt.bubbles import NecklaceTreeSpec
from tmt.feynman import expectation_series, necklace_tree_model, restricted_quartic
from tmt.sd import (
    DiskSeries,
    Monomial,
    NonConvergenceError,
    Potential,
    catalan,
    melonic_quartic_potential,
    necklace_potential,
    potential_from_model,
    solve_formal,
    solve_numeric,
    solve_series_float,
    transition_potential,
)


def test_catalan_formal():
    ds = solve_formal(Potential.zero(), 0, p_max=20)
    for p in range(21):
        assert ds.coefficient(p, ()) == catalan(p)


def test_catalan_numeric():
    ds = solve_numeric(Potential.zero(), 20)
    for p in range(21):
        assert abs(ds.values[p] - catalan(p)) <= 1e-10 * max(1, catalan(p))


def test_quartic_necklace_first_order():
    V = Potential((Monomial(Fraction(1), ((2, 1),), "t"),))
    ds = solve_formal(V, 2, p_max=2)
    c1 = ds.univariate(1)
    assert c1[0] == 1 and c1[1] == -4  # 2 * dV/dx2 * C_2 = -2t * 2


def test_melonic_first_orders():
    V = Potential((Monomial(Fraction(1), ((1, 2),), "t"),))
    ds = solve_formal(V, 3, p_max=1)
    assert ds.univariate(1) == [1, -2, 8, -40]  # alternating 2^n Catalan


def test_melonic_matches_feynman_expansion():
    # dual-pipeline check: SD formal solution vs graph-side LO coefficients
    res = restricted_quartic()
    graph_series = expectation_series(res, __import__("tmt.bubbles", fromlist=["dipole"]).dipole(), 2)
    V = Potential(
        tuple(Monomial(Fraction(1), ((1, 2),), f"l{i}") for i in (1, 2, 3, 4))
        + (Monomial(Fraction(1), ((2, 1),), "l12"),)
    )
    sd_series = solve_formal(V, 2, p_max=1)
    sym = sd_series.symbols
    for exp, poly in graph_series.terms.items():
        lead = poly.coeff(0)  # N^0 part is the LO count
        mapped = tuple(exp[res.symbols.index(s)] for s in sym)
        assert sd_series.coefficient(1, mapped) == lead, (exp, poly)


def test_per_slot_counts_rooted_quartic_maps():
    ds = solve_formal(necklace_potential(per_slot=True), 8, p_max=1)
    c1 = ds.univariate(1)
    for n in range(9):
        assert c1[n] == rooted_quartic_map_count(n)
        assert c1[n] == rooted_quartic_map_count_closed_form(n)


def test_full_weight_is_two_to_n_times_counts():
    ds = solve_formal(necklace_potential(), 6, p_max=1)
    c1 = ds.univariate(1)
    for n in range(7):
        assert c1[n] == 2**n * rooted_quartic_map_count(n)


def test_factorization_theorem_small():
    # expectation of a tree of necklaces factorizes onto its necklace sizes
    model = necklace_tree_model([(NecklaceTreeSpec.from_sizes([2]), "t")])
    V = potential_from_model(model)
    ds = solve_formal(V, 3, p_max=3)
    c2 = ds.univariate(2)
    from tmt.bubbles import realize_tree_of_necklaces

    obs = realize_tree_of_necklaces(NecklaceTreeSpec.from_sizes([2, 2]))
    series = expectation_series(model, obs, 3).leading_parts()
    for m in range(4):
        convol = sum(c2[a] * c2[m - a] for a in range(m + 1))
        assert series.coefficient((m,)).coeff(0) == convol


def test_numeric_matches_formal_small_coupling():
    # solve on a window comfortably above the compared indices
    V_num = Potential((Monomial(Fraction(-1, 100), ((2, 1),)),))
    ds_num = solve_numeric(V_num, 24)
    V_sym = Potential((Monomial(Fraction(1), ((2, 1),), "t"),))
    ds_for = solve_formal(V_sym, 18, p_max=8)
    for p in (1, 2, 5, 8):
        series = ds_for.univariate(p)
        value = sum(float(c) * (-0.01) ** k for k, c in enumerate(series))
        assert abs(ds_num.values[p] - value) < 1e-8 * max(1.0, abs(value))


def test_numeric_truncation_halving():
    # truncated-window error collapses when the coupling is halved
    def window_error(denom):
        V = Potential((Monomial(Fraction(-1, denom), ((2, 1),)),))
        return abs(solve_numeric(V, 6).values[1] - solve_numeric(V, 20).values[1])

    err = window_error(25)
    err_half = window_error(50)
    assert err_half < err / 50


def test_numeric_supercritical_flagged():
    with pytest.raises(NonConvergenceError):
        solve_numeric(Potential((Monomial(Fraction(-1), ((2, 1),)),)), 10)


def test_numeric_rejects_symbolic():
    V = Potential((Monomial(Fraction(1), ((2, 1),), "t"),))
    with pytest.raises(ValueError):
        solve_numeric(V, 5)
    ds = solve_numeric(V, 5, values={"t": -0.01})
    assert ds.values[1] > 1


def test_float_series_matches_formal():
    V = transition_potential(Fraction(1, 2))
    fs = solve_series_float(V, 12, scale=1.0)
    ds = solve_formal(V, 12, p_max=1)
    exact = [float(c) for c in ds.univariate(1)]
    assert np.allclose(fs.coeffs, exact, rtol=1e-9)


def test_float_series_scaling():
    V = necklace_potential()
    fs = solve_series_float(V, 60)
    # true ratios approach the growth constant 24 regardless of scale
    r = fs.true_ratios()
    assert abs(r[-1] - 24) < 1.0


def test_linear_terms_are_face_degree_weights():
    # a linear monomial of V weights the boundary like a plain Tutte edge
    # weight: with t_1 = -g the recursion reads C_p = sum CC + g C_p, so
    # C_1 = 1/(1 - g)
    V = Potential((Monomial(Fraction(-1), ((1, 1),), "g"),))
    ds = solve_formal(V, 6, p_max=1)
    assert ds.univariate(1) == [1, 1, 1, 1, 1, 1, 1]


def test_potential_json_roundtrip():
    V = transition_potential(3)
    again = Potential.from_json(V.to_json())
    assert again == V
    data = {"monomials": [{"coeff": "-1/2", "powers": {"2": 1}, "symbol": "g"}]}
    V2 = Potential.from_json(data)
    assert V2.monomials[0].coeff == Fraction(-1, 2)


def test_disk_series_output():
    ds = solve_formal(Potential.zero(), 0, p_max=3)
    rows = ds.to_csv_rows()
    assert (3, "1", "5") in rows
    dn = solve_numeric(Potential.zero(), 3)
    assert dn.to_json()["mode"] == "numeric"
