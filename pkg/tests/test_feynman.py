import itertools
from fractions import Fraction

import pytest

from oracles import closure_moment

from tmt.bubbles import (
    Insertion,
    NecklaceTreeSpec,
    build_necklace,
    canonical_form,
    dipole,
    melon,
    realize_tree_of_necklaces,
)
from tmt.feynman import (
    BudgetError,
    FeynmanGraph,
    boundary_graph,
    connected_moment,
    degree_exponent,
    enumerate_closures,
    expectation_series,
    free_energy_series,
    full_quartic,
    gaussian_moment,
    model_from_json,
    necklace_tree_model,
    open_graph_as_feynman,
    open_graph_for_tree,
    q_map,
    restricted_quartic,
    standard_quartic,
)
from tmt.laurent import LaurentPolynomial


def test_model_presets():
    full = full_quartic()
    assert {e.omega for e in full.entries} == {3, 4}
    assert len(full.entries) == 7
    res = restricted_quartic()
    assert len(res.entries) == 5
    std = standard_quartic()
    assert {e.omega for e in std.entries} == {3}
    assert full.entry_for(melon(3)).coupling == "l3"
    with pytest.raises(ValueError):
        res.entry_for(build_necklace((1, 3), 2))


def test_model_json_roundtrip():
    m = model_from_json({"preset": "restricted"})
    assert len(m.entries) == 5
    again = model_from_json(m.to_json())
    assert [e.coupling for e in again.entries] == [e.coupling for e in m.entries]


def test_enumerate_closures_counts():
    assert len(enumerate_closures([dipole()])) == 1
    assert len(enumerate_closures([melon(1)])) == 2
    both = enumerate_closures([dipole(), dipole()])
    assert len(both) == 2
    connected = enumerate_closures([dipole(), dipole()], connected_only=True)
    assert len(connected) == 1


def test_degree_exponent_examples():
    full = full_quartic()
    exps = sorted(degree_exponent(g, full) for g in enumerate_closures([melon(1)]))
    assert exps == [2, 4]  # crossed and parallel closures
    exps = sorted(
        degree_exponent(g, full) for g in enumerate_closures([build_necklace((1, 2), 2)])
    )
    assert exps == [4, 4]  # the enhancement exactly saturates


def test_degree_exponent_face_profile():
    # parallel closure of the melon: F_01 = 1, the rest 2 each
    g = FeynmanGraph((melon(1),), (0, 1))
    assert [g.closed_faces(c) for c in (1, 2, 3, 4)] == [1, 2, 2, 2]
    assert degree_exponent(g, full_quartic()) == 7 - 6 + 3


def test_gaussian_moment_examples():
    assert gaussian_moment([dipole()]) == LaurentPolynomial({1: 1})
    assert gaussian_moment([melon(2)]) == LaurentPolynomial({1: 1, -1: 1})
    assert gaussian_moment([build_necklace((1, 2), 2)]) == LaurentPolynomial({0: 2})
    assert gaussian_moment([melon(1)], "direct", 2) == Fraction(5, 2)


def test_wick_matches_closure_enumeration():
    cases = [
        [melon(1)],
        [build_necklace((1, 3), 2)],
        [dipole(), melon(4)],
        [dipole(), dipole(), dipole()],
        [build_necklace((1, 2), 3)],
    ]
    for bubbles in cases:
        brute = closure_moment(bubbles)
        wick = gaussian_moment(bubbles)
        assert dict(wick.items()) == brute


def test_direct_mode_caps():
    with pytest.raises(BudgetError):
        gaussian_moment([melon(1), melon(2), melon(3)], "direct", 2)
    with pytest.raises(ValueError):
        gaussian_moment([dipole()], "direct", 5)


def test_connected_moment_subtracts_disconnected():
    d = dipole()
    full = gaussian_moment([d, d])
    conn = connected_moment([d, d])
    # disconnected part is <d><d> = N^2
    assert full - conn == LaurentPolynomial({2: 1})


def test_boundary_graph_self():
    b = realize_tree_of_necklaces(NecklaceTreeSpec.from_sizes([2, 1]))
    g = FeynmanGraph((b,), (None,) * b.p)
    parts = boundary_graph(g)
    assert len(parts) == 1
    assert canonical_form(parts[0]) == canonical_form(b)


@pytest.mark.parametrize("p", [1, 2, 3, 4])
def test_boundary_graph_necklace_loop(p):
    g = open_graph_as_feynman(open_graph_for_tree((Insertion(p),)))
    parts = boundary_graph(g)
    assert len(parts) == 1
    assert canonical_form(parts[0]) == canonical_form(build_necklace((1, 2), p))


def test_boundary_graph_melon_contraction():
    # one 0-edge on a pair sharing three colors leaves the dipole boundary
    g = FeynmanGraph((melon(1),), (0, None))
    parts = boundary_graph(g)
    assert len(parts) == 1
    assert canonical_form(parts[0]) == canonical_form(dipole())


def test_boundary_graph_rejects_closed():
    with pytest.raises(ValueError):
        boundary_graph(FeynmanGraph((dipole(),), (0,)))


TREE_SPECS = [
    NecklaceTreeSpec.from_sizes([1, 1]),
    NecklaceTreeSpec.from_sizes([2, 2]),
    NecklaceTreeSpec.from_sizes([1, 2]),
    NecklaceTreeSpec((Insertion(2), Insertion(2, (1, 3)))),
    NecklaceTreeSpec((Insertion(3), Insertion(1, (2, 2)), Insertion(2, (3, 4)))),
]


@pytest.mark.parametrize("spec", TREE_SPECS)
def test_open_graph_boundary_is_the_tree(spec):
    og = open_graph_for_tree(spec.insertions)
    g = open_graph_as_feynman(og)
    parts = boundary_graph(g)
    assert len(parts) == 1
    assert canonical_form(parts[0]) == canonical_form(realize_tree_of_necklaces(spec))


def test_qmap_structure_counts():
    # a tree {2,2} becomes 4 quartic necklaces plus one melonic bubble
    spec = NecklaceTreeSpec.from_sizes([2, 2])
    b = realize_tree_of_necklaces(spec)
    model = necklace_tree_model([(spec, "t")])
    g = enumerate_closures([b], tags=["t"])[0]
    qg = q_map(g)
    assert sum(1 for t in qg.tags if t == "l12") == 4
    assert sum(1 for t in qg.tags if len(t) == 2) == 1  # one melonic insertion
    assert len(qg.bubbles) == 5
    assert degree_exponent(g, model) == degree_exponent(qg, restricted_quartic())


def test_qmap_melon_bubble():
    spec = NecklaceTreeSpec.from_sizes([1, 1])
    b = realize_tree_of_necklaces(spec)
    model = necklace_tree_model([(spec, "t")])
    for g in enumerate_closures([b], tags=["t"]):
        qg = q_map(g)
        assert sum(1 for t in qg.tags if t == "l12") == 2
        assert degree_exponent(g, model) == degree_exponent(qg, restricted_quartic())


def test_qmap_requires_trace():
    g = FeynmanGraph((melon(1),), (0, 1), ("l1",))
    with pytest.raises(ValueError, match="trace"):
        q_map(g)


def test_expectation_series_examples():
    res = restricted_quartic()
    s = expectation_series(res, dipole(), 1)
    zero = (0,) * 5
    assert s.coefficient(zero) == LaurentPolynomial({0: 1})
    # quartic necklace coupling: leading -4 exactly at order 1
    idx = res.symbols.index("l12")
    e12 = tuple(1 if i == idx else 0 for i in range(5))
    assert s.coefficient(e12) == LaurentPolynomial({0: -4})
    # melonic coupling: -2 - 2/N^2
    idx1 = res.symbols.index("l1")
    e1 = tuple(1 if i == idx1 else 0 for i in range(5))
    assert s.coefficient(e1) == LaurentPolynomial({0: -2, -2: -2})


def test_expectation_series_necklace_gaussian():
    res = restricted_quartic()
    s = expectation_series(res, build_necklace((1, 2), 2), 0)
    assert s.coefficient((0,) * 5) == LaurentPolynomial({0: 2})


def test_expectation_series_budget():
    res = restricted_quartic()
    with pytest.raises(BudgetError):
        expectation_series(res, dipole(), 12, max_vertices=10)


def test_free_energy_series_examples():
    res = restricted_quartic()
    s = free_energy_series(res, 1)
    # order 0 absent (log of normalized Gaussian)
    assert s.coefficient((0,) * 5) == LaurentPolynomial()
    idx1 = res.symbols.index("l1")
    e1 = tuple(1 if i == idx1 else 0 for i in range(5))
    # one melon: -(N^4 + N^2)/N^4
    assert s.coefficient(e1) == LaurentPolynomial({0: -1, -2: -1})
    idx12 = res.symbols.index("l12")
    e12 = tuple(1 if i == idx12 else 0 for i in range(5))
    assert s.coefficient(e12) == LaurentPolynomial({0: -2})


def test_free_energy_bounded_after_normalization():
    res = restricted_quartic()
    s = free_energy_series(res, 2)
    for exp, poly in s.terms.items():
        assert poly.max_power() <= 0, (exp, poly)


def test_two_point_exponent_bound():
    # graphs with one free pair: normalized exponent <= 0
    full = full_quartic()
    for bubbles in ([melon(1)], [build_necklace((1, 2), 2)], [melon(2)]):
        for g in enumerate_closures(bubbles, free=1):
            if not g.is_connected():
                continue
            e = sum(g.closed_faces(c) for c in (1, 2, 3, 4)) - 3 * g.e0
            e += sum(full.entry_for(b).omega for b in g.bubbles)
            assert e - 4 <= 0


def test_amplitude_sign_and_monomial():
    from tmt.feynman import amplitude

    res = restricted_quartic()
    g = enumerate_closures([melon(1)])[0]
    amp = amplitude(g, res)
    (exp, poly), = amp.terms.items()
    assert sum(exp) == 1
    assert poly.coeff(poly.max_power()) == -1  # one bubble, one minus sign
