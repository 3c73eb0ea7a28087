"""Verification campaigns: exhaustive small-scale checks of the 1/N theory.

Each campaign returns a CampaignResult with pass/fail, the number of cases
checked, and the first counterexample serialized for diagnosis.  The map
campaigns sweep every labeling of every connected rotation system up to the
edge budget (one representative per isomorphism class), using the tabulated
subset-face counts so the degree of all labelings of a class is a single
vectorized evaluation.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from ._parallel import pool_map as _pool_map, worker_count

from .bubbles import (
    Bubble,
    Insertion,
    NecklaceTreeSpec,
    build_necklace,
    canonical_form,
    dipole,
    melon,
    realize_tree_of_necklaces,
)
from .feynman import (
    FeynmanGraph,
    ModelSpec,
    degree_exponent,
    enumerate_closures,
    full_quartic,
    gaussian_moment,
    necklace_tree_model,
    q_map,
    restricted_quartic,
)
from .ifmaps import classify_lo, omega
from .mapgen import (
    LabelTables,
    SigmaClass,
    label_orbit_reps,
    label_tables,
    model_labels,
    omega_vector,
    sigma_classes,
)


@dataclass
class CampaignResult:
    name: str
    passed: bool
    cases: int
    details: str = ""
    counterexample: dict | None = None
    rows: list = field(default_factory=list)

    def __bool__(self):
        return self.passed


# ---------------------------------------------------------------------------
# Gaussian oracle equivalence


def oracle_catalog() -> list[tuple[str, Bubble]]:
    """Bubbles used in oracle campaigns, with names."""
    out = [("dipole", dipole())]
    for i in (1, 2, 3, 4):
        out.append((f"melon{i}", melon(i)))
    for pair in ((1, 2), (1, 3), (1, 4)):
        out.append((f"necklace{pair[0]}{pair[1]}", build_necklace(pair, 2)))
        out.append((f"necklace{pair[0]}{pair[1]}:3", build_necklace(pair, 3)))
    out.append(("tree:2,1", realize_tree_of_necklaces(NecklaceTreeSpec.from_sizes([2, 1]))))
    out.append(
        (
            "tree:1,1,1",
            realize_tree_of_necklaces(
                NecklaceTreeSpec((Insertion(1), Insertion(1, (0, 1)), Insertion(1, (1, 3))))
            ),
        )
    )
    return out


def oracle_campaign(max_vertices: int = 6, n_values: tuple[int, ...] = (2, 3)) -> CampaignResult:
    """Wick-mode moments evaluated at small N must equal direct index sums."""
    catalog = oracle_catalog()
    cases = 0
    for count in range(1, max_vertices // 2 + 1):
        for combo in itertools.combinations_with_replacement(catalog, count):
            bubbles = [b for _, b in combo]
            if sum(b.num_vertices for b in bubbles) > max_vertices:
                continue
            wick = gaussian_moment(bubbles, "wick")
            for n in n_values:
                direct = gaussian_moment(bubbles, "direct", n)
                if wick.evaluate(n) != direct:
                    return CampaignResult(
                        "oracle",
                        False,
                        cases,
                        counterexample={
                            "bubbles": [name for name, _ in combo],
                            "N": n,
                            "wick": str(wick.evaluate(n)),
                            "direct": str(direct),
                        },
                    )
                cases += 1
    return CampaignResult("oracle", True, cases, f"wick == direct at N in {n_values}")


# ---------------------------------------------------------------------------
# Degree bounds on the map census


def _class_items(model: str, max_edges: int, cilium: bool):
    labels = model_labels(model)
    for n_edges in range(max_edges + 1):
        tables = label_tables(labels, n_edges)
        for cls in sigma_classes(n_edges, cilium):
            yield cls, tables


def bounds_campaign(model: str = "full", max_edges: int = 4, cilia: int = 0) -> CampaignResult:
    """Omega >= -4 on connected vacuum maps (>= 0 with one cilium); trees saturate."""
    bound = 0 if cilia else -4
    cases = 0
    rows = []
    for cls, tables in _class_items(model, max_edges, bool(cilia)):
        om = omega_vector(cls, tables)
        cases += len(om)
        if om.min() < bound:
            bad = int(np.argmin(om))
            lab = tuple(tables.labels[i] for i in tables.assignments[bad])
            return CampaignResult(
                "bounds",
                False,
                cases,
                counterexample={"map": cls.to_map(lab).to_json(), "omega": int(om[bad])},
            )
        if cls.is_tree and not cilia and np.any(om != -4):
            bad = int(np.argmax(om != -4))
            lab = tuple(tables.labels[i] for i in tables.assignments[bad])
            return CampaignResult(
                "bounds",
                False,
                cases,
                counterexample={
                    "map": cls.to_map(lab).to_json(),
                    "omega": int(om[bad]),
                    "expected": -4,
                    "reason": "tree must saturate the bound",
                },
            )
        rows.append((cls.n_edges, len(om), int(om.min()), int(om.max())))
    return CampaignResult(
        "bounds",
        True,
        cases,
        f"omega >= {bound} on all labeled classes, trees saturate",
        rows=rows,
    )


def deletion_campaign(model: str = "full", max_edges: int = 4) -> CampaignResult:
    """Edge-deletion inequalities on every (map, edge) pair of the census."""
    cases = 0
    for cls, tables in _class_items(model, max_edges, False):
        if cls.n_edges == 0:
            continue
        om = omega_vector(cls, tables)
        mono = np.array(
            [len(tables.labels[i]) == 1 for i in range(len(tables.labels))]
        )
        for e in range(cls.n_edges):
            keep = ~(1 << e)
            om_del = tables.cost - tables.edge_cost[tables.assignments[:, e]]
            for i in range(4):
                om_del = om_del - cls.faces_by_mask[tables.masks[:, i] & keep]
            e_mono = mono[tables.assignments[:, e]]
            cases += len(om)
            if cls.cut_edge[e]:
                bad = e_mono & (om != om_del + 4)
            else:
                bad = (e_mono & (om < om_del + 2)) | (~e_mono & (om < om_del))
            if np.any(bad):
                idx = int(np.argmax(bad))
                lab = tuple(tables.labels[i] for i in tables.assignments[idx])
                return CampaignResult(
                    "deletion",
                    False,
                    cases,
                    counterexample={
                        "map": cls.to_map(lab).to_json(),
                        "edge": e,
                        "cut": cls.cut_edge[e],
                        "omega": int(om[idx]),
                        "omega_after": int(om_del[idx]),
                    },
                )
    return CampaignResult("deletion", True, cases, "edge-deletion lemma holds")


def _classify_class(args) -> tuple[int, dict | None]:
    cls, tables, model = args
    om = omega_vector(cls, tables)
    rows = label_orbit_reps(cls, tables)
    count = 0
    for r in rows:
        lab = tuple(tables.labels[i] for i in tables.assignments[r])
        if model == "restricted" and any(l in ("13", "14") for l in lab):
            continue
        m = cls.to_map(lab)
        cert = classify_lo(m, model)
        target = -4 + (4 if cls.cilium else 0)
        expected = om[r] == target
        ok = (cert.verdict == expected) and (cert.witnesses_empty == cert.verdict)
        count += 1
        if not ok:
            return count, {
                "map": m.to_json(),
                "omega": int(om[r]),
                "verdict": cert.verdict,
                "witnesses_empty": cert.witnesses_empty,
            }
    return count, None


def classifier_campaign(
    model: str = "restricted", max_edges: int = 4, threads: int | None = None
) -> CampaignResult:
    """classify_lo verdict must match the brute-force degree test exactly.

    Also checks the certificate invariant: witnesses are empty iff LO.
    """
    items = [(cls, tables, model) for cls, tables in _class_items(model, max_edges, False)]
    results = _pool_map(_classify_class, items, threads)
    cases = sum(c for c, _ in results)
    for c, bad in results:
        if bad is not None:
            return CampaignResult("classifier", False, cases, counterexample=bad)
    return CampaignResult(
        "classifier", True, cases, f"verdict matches omega == -4 on the {model} census"
    )


# ---------------------------------------------------------------------------
# Representation equivalence and the Q-map


def quartic_bubble_list() -> list[Bubble]:
    out = [melon(i) for i in (1, 2, 3, 4)]
    out += [build_necklace(pair, 2) for pair in ((1, 2), (1, 3), (1, 4))]
    return out


def representation_campaign(max_bubbles: int = 3, model: ModelSpec | None = None) -> CampaignResult:
    """e(g) = -Omega(from_feynman(g)) for connected quartic closures."""
    from .ifmaps import from_feynman

    mdl = model or full_quartic()
    bubbles = quartic_bubble_list()
    cases = 0
    for count in range(1, max_bubbles + 1):
        for combo in itertools.combinations_with_replacement(range(len(bubbles)), count):
            multiset = [bubbles[i] for i in combo]
            for g in enumerate_closures(multiset, connected_only=True):
                e = degree_exponent(g, mdl)
                m = from_feynman(g, mdl, check=False)
                if e != -omega(m):
                    return CampaignResult(
                        "representation",
                        False,
                        cases,
                        counterexample={
                            "bubbles": list(combo),
                            "pairing": list(g.pairing),
                            "e": e,
                            "omega": omega(m),
                        },
                    )
                cases += 1
    return CampaignResult("representation", True, cases, "e(g) == -Omega on all closures")


def random_tree_spec(rng: random.Random, max_insertions: int = 3, max_size: int = 3) -> NecklaceTreeSpec:
    ins = [Insertion(rng.randint(1, max_size))]
    p = ins[0].size
    for _ in range(rng.randint(0, max_insertions - 1)):
        q = rng.randint(1, max_size)
        ins.append(Insertion(q, (rng.randrange(p), rng.randint(1, 4))))
        p += q
    return NecklaceTreeSpec(tuple(ins))


def qmap_campaign(n_graphs: int = 100, seed: int = 20240, max_vertices: int = 12) -> CampaignResult:
    """Degree preservation of the quartic reduction on random closed graphs."""
    rng = random.Random(seed)
    res = restricted_quartic()
    cases = 0
    while cases < n_graphs:
        specs = [random_tree_spec(rng) for _ in range(rng.randint(1, 2))]
        bubbles = [realize_tree_of_necklaces(s) for s in specs]
        if sum(b.num_vertices for b in bubbles) > max_vertices:
            continue
        model = necklace_tree_model([(s, f"t{i}") for i, s in enumerate(specs)])
        total_p = sum(b.p for b in bubbles)
        perm = list(range(total_p))
        rng.shuffle(perm)
        g = FeynmanGraph(tuple(bubbles), tuple(perm), tuple(model.symbols))
        e1 = degree_exponent(g, model)
        e2 = degree_exponent(q_map(g), res)
        if e1 != e2:
            return CampaignResult(
                "qmap",
                False,
                cases,
                counterexample={
                    "types": [list(s.type_multiset) for s in specs],
                    "pairing": perm,
                    "e": e1,
                    "e_qmap": e2,
                },
            )
        cases += 1
    return CampaignResult("qmap", True, cases, "q_map preserves the degree exponent")
