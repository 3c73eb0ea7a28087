"""
Bubbles, necklaces, and trees of necklaces
==========================================

Build the rank-4 invariants, inspect their structure, and compute the
enhancement exponent that lets each one survive the large N limit.
"""

from tmt import (
    NecklaceTreeSpec,
    bicolored_faces,
    build_necklace,
    canonical_form,
    compose,
    contract,
    dipole,
    melon,
    realize_tree_of_necklaces,
    validate_bubble,
)

############################################################
# The quartic catalog: four melons and three necklaces.  A melon crosses a
# single color; a necklace is a cycle of doubled edges and is secretly a
# matrix trace on a pair of indices.

for i in (1, 2, 3, 4):
    report = validate_bubble(melon(i))
    print(f"melon {i}: valid={report.ok}")

n12 = build_necklace((1, 2), 2)
print("quartic necklace edges:", n12.edges())

############################################################
# Two-color faces distinguish the shapes: the necklace has a single (1,3)
# face winding around its cycle, while faces of its parallel pairs count
# its size.

for p in (2, 3, 4):
    n = build_necklace((1, 2), p)
    print(
        f"necklace size {p}: faces(1,3)={bicolored_faces(n, 1, 3)[0]}, "
        f"faces(1,2)={bicolored_faces(n, 1, 2)[0]}"
    )

############################################################
# Trees of necklaces: start from a necklace and repeatedly cut an edge to
# splice in another necklace.  The type multiset {p_1, ..., p_n} fixes the
# enhancement omega = 3 - n + sum p_k.  Inserting size-1 necklaces builds
# the melonic family (omega = 3); a single necklace of size p has
# omega = 2 + p.

for sizes in ([2], [1, 1], [2, 2], [1, 2], [1, 1, 1]):
    spec = NecklaceTreeSpec.from_sizes(sizes)
    bubble = realize_tree_of_necklaces(spec)
    print(
        f"type {sizes}: omega={spec.omega}, vertices={bubble.num_vertices}, "
        f"valid={validate_bubble(bubble).ok}"
    )

# the type {1,1} tree is exactly a quartic melon
t11 = realize_tree_of_necklaces(NecklaceTreeSpec.from_sizes([1, 1]))
print("tree {1,1} isomorphic to a melon:", canonical_form(t11) == canonical_form(melon(1)))

############################################################
# The contraction/composition algebra behind the Schwinger-Dyson equations:
# contracting a white/black pair removes it and closes loops (factors of N);
# composing two bubbles merges them through a pair.

parts, loops = contract(dipole(), 0, 0)
print(f"contract the dipole: {len(parts)} parts, {loops} loops (a factor N^4)")

merged = compose(n12, 0, n12, 0)
print(
    "necklace * necklace -> size",
    merged.p,
    "necklace:",
    canonical_form(merged) == canonical_form(build_necklace((1, 2), 3)),
)
