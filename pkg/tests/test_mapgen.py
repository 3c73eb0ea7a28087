import numpy as np
import pytest

from tmt.bubbles import build_necklace, melon
from tmt.feynman import enumerate_closures, full_quartic
from tmt.ifmaps import canonical_key, classify_lo, from_feynman, omega
from tmt.mapgen import (
    enumerate_maps,
    label_tables,
    model_labels,
    omega_vector,
    sigma_classes,
)
from tmt.verify import quartic_bubble_list


def test_sigma_class_counts_small():
    assert len(sigma_classes(0)) == 1
    assert len(sigma_classes(1)) == 2  # loop and bridge
    assert len(sigma_classes(2)) == 5
    trees = [c for c in sigma_classes(2) if c.is_tree]
    assert len(trees) == 1  # the path on three vertices


def test_e0_maps():
    maps = list(enumerate_maps("full", 0))
    assert len(maps) == 1
    assert omega(maps[0]) == -4
    maps = list(enumerate_maps("full", 0, cilia=1))
    assert omega(maps[-1]) == 0


def test_e1_census_matches_spec():
    maps = list(enumerate_maps("restricted", 1))
    oms = {omega(m) for m in maps}
    assert oms <= {-4, -2, 0}
    # 5 loop labelings + 5 bridge labelings + the edgeless vertex
    assert len(maps) == 11


def test_omega_vector_matches_per_map():
    labels = model_labels("full")
    for E in (1, 2):
        tables = label_tables(labels, E)
        for cls in sigma_classes(E):
            om = omega_vector(cls, tables)
            for r in range(tables.assignments.shape[0]):
                lab = tuple(labels[i] for i in tables.assignments[r])
                assert om[r] == omega(cls.to_map(lab))


def test_enumerate_maps_dedup_no_duplicates():
    seen = set()
    for m in enumerate_maps("full", 2):
        key = canonical_key(m)
        assert key not in seen
        seen.add(key)


def test_enumerate_maps_budget():
    with pytest.raises(ValueError):
        list(enumerate_maps("full", 6))


def test_census_covers_quartic_closures():
    # every IF map of a 1- or 2-bubble quartic closure appears in the census
    census = {canonical_key(m) for m in enumerate_maps("full", 2)}
    bubbles = quartic_bubble_list()
    import itertools

    for count in (1, 2):
        for combo in itertools.combinations_with_replacement(range(len(bubbles)), count):
            for g in enumerate_closures([bubbles[i] for i in combo], connected_only=True):
                m = from_feynman(g, check=False)
                assert canonical_key(m) in census


def test_ciliated_census_bound():
    for m in enumerate_maps("full", 2, cilia=1):
        assert m.num_cilia == 1
        assert omega(m) >= 0


def test_submap_monotonicity_on_lo_maps():
    # every connected submap of an LO map is LO (Lemma on submaps)
    import itertools

    from tmt.ifmaps import _delete_darts, StrandedMap

    checked = 0
    for m in enumerate_maps("full", 3):
        if m.num_edges < 2 or omega(m) != -4:
            continue
        for drop in range(m.num_edges):
            darts = {2 * drop, 2 * drop + 1}
            rotations, cilia, _ = _delete_darts(m, darts)
            labels = tuple(l for k, l in enumerate(m.edge_labels) if k != drop)
            sub = StrandedMap(rotations, labels, cilia)
            if sub.is_connected():
                assert omega(sub) == -4
                checked += 1
    assert checked > 50
