"""
Intermediate-field maps and the 1/N bound
=========================================

Quartic graphs become combinatorial maps: 0-cycles are vertices, melonic
bubbles monocolored edges, necklaces bicolored edges.  The degree Omega
drives the amplitude N^(-Omega); this script certifies the bound Omega >= -4
exhaustively and classifies the leading-order maps.
"""

from tmt import (
    StrandedMap,
    build_necklace,
    classify_lo,
    delete_edge,
    enumerate_closures,
    enumerate_maps,
    from_feynman,
    genus,
    melon,
    omega,
)
from tmt.verify import bounds_campaign, classifier_campaign

############################################################
# From Feynman graphs to maps.  The two closures of a melon give a bridge
# (Omega = -4, leading order) and a loop (Omega = -2, suppressed).

for g in enumerate_closures([melon(1)]):
    m = from_feynman(g)
    print(f"melon closure -> {m.num_vertices} vertices, labels {m.edge_labels}, Omega={omega(m)}")

############################################################
# Genus is what suppresses bicolored maps: a planar 12-loop keeps
# Omega = -4, two interleaved loops cost genus one and four powers of 1/N.

planar = StrandedMap(((0, 1),), ("12",))
twisted = StrandedMap(((0, 2, 1, 3),), ("12", "12"))
print("planar loop:   genus", genus(planar), " Omega", omega(planar))
print("interleaved:   genus", genus(twisted), " Omega", omega(twisted))

############################################################
# Edge deletion: removing a monocolored edge costs at least two powers,
# bicolored edges come for free, and bridges split Omega additively (+4).

m = StrandedMap(((0, 2), (1, 3)), ("1", "1"))
_, rep = delete_edge(m, 0)
print(f"delete one of two parallel mono edges: Omega {rep.omega_before} -> {rep.omega_after}")

############################################################
# Exhaustive certification on every connected map with up to three edges,
# every labeling of the full enhanced model.

result = bounds_campaign("full", 3, cilia=0)
print(f"vacuum bound: {result.details} ({result.cases} labeled classes)")
result = bounds_campaign("full", 3, cilia=1)
print(f"one-cilium bound: checked {result.cases} classes, all Omega >= 0")

############################################################
# Leading-order structure: monocolored edges are all bridges, bicolored
# components are planar, and the components glue like a cactus.  The
# classifier's verdict agrees with the brute-force Omega test on the census.

result = classifier_campaign("restricted", 3)
print(f"restricted classifier: {result.cases} maps, agree={result.passed}")

necklace_map = from_feynman(enumerate_closures([build_necklace((1, 2), 2)])[0])
cert = classify_lo(necklace_map, "restricted")
print("a necklace closure is leading order:", cert.verdict)
