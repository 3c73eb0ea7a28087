"""Bubbles: connected bipartite D-regular properly edge-colored multigraphs.

A bubble with p white and p black vertices is stored as one white-to-black
bijection per color, ``perms[c-1][w] = b``.  That representation makes
D-regularity and proper coloring structural: the only invariants left to
check are connectivity and well-formedness of raw edge lists.

Includes the quartic catalog (melons and necklaces), trees of necklaces built
by repeated insertion of open necklaces, two-color face counting, the
contraction/composition algebra and a canonical form for isomorphism tests.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

COLORS4 = (1, 2, 3, 4)
NECKLACE_PAIRS = ((1, 2), (1, 3), (1, 4))


@dataclass(frozen=True)
class Bubble:
    perms: tuple[tuple[int, ...], ...]
    D: int = 4
    trace: tuple | None = field(default=None, compare=False)

    @property
    def p(self) -> int:
        """Number of white (= black) vertices."""
        return len(self.perms[0]) if self.perms else 0

    @property
    def num_vertices(self) -> int:
        return 2 * self.p

    def black(self, w: int, color: int) -> int:
        return self.perms[color - 1][w]

    def white(self, b: int, color: int) -> int:
        return self.perms[color - 1].index(b)

    def inverse_perm(self, color: int) -> tuple[int, ...]:
        inv = [0] * self.p
        for w, b in enumerate(self.perms[color - 1]):
            inv[b] = w
        return tuple(inv)

    def edges(self) -> list[tuple[int, int, int]]:
        """Edge list as (white, black, color), sorted."""
        out = []
        for c in range(1, self.D + 1):
            for w, b in enumerate(self.perms[c - 1]):
                out.append((w, b, c))
        out.sort()
        return out

    def is_connected(self) -> bool:
        p = self.p
        if p == 0:
            return False
        seen_w = [False] * p
        seen_b = [False] * p
        stack = [("w", 0)]
        seen_w[0] = True
        count = 1
        invs = [self.inverse_perm(c) for c in range(1, self.D + 1)]
        while stack:
            kind, v = stack.pop()
            for c in range(self.D):
                if kind == "w":
                    b = self.perms[c][v]
                    if not seen_b[b]:
                        seen_b[b] = True
                        count += 1
                        stack.append(("b", b))
                else:
                    w = invs[c][v]
                    if not seen_w[w]:
                        seen_w[w] = True
                        count += 1
                        stack.append(("w", w))
        return count == 2 * p

    def relabeled(self, wmap: Sequence[int], bmap: Sequence[int]) -> "Bubble":
        """New bubble with white w renamed wmap[w] and black b renamed bmap[b]."""
        p = self.p
        perms = []
        for c in range(self.D):
            new = [0] * p
            for w, b in enumerate(self.perms[c]):
                new[wmap[w]] = bmap[b]
            perms.append(tuple(new))
        return Bubble(tuple(perms), self.D)

    def to_json(self) -> dict:
        return {
            "D": self.D,
            "num_white": self.p,
            "num_black": self.p,
            "edges": [[w, b, c] for (w, b, c) in self.edges()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Bubble":
        report = validate_bubble(data)
        if not report.ok:
            raise ValueError(f"invalid bubble: {report.failures()}")
        return _bubble_from_edges(data["D"], data["num_white"], data["edges"])

    def to_dot(self, name: str = "bubble") -> str:
        lines = [f"graph {name} {{"]
        for w in range(self.p):
            lines.append(f'  w{w} [shape=circle, style=filled, fillcolor=white, label="w{w}"];')
        for b in range(self.p):
            lines.append(
                f'  b{b} [shape=circle, style=filled, fillcolor=black, fontcolor=white, label="b{b}"];'
            )
        palette = {1: "red", 2: "blue", 3: "forestgreen", 4: "darkorange"}
        for w, b, c in self.edges():
            color = palette.get(c, "gray")
            lines.append(f'  w{w} -- b{b} [color={color}, label="{c}"];')
        lines.append("}")
        return "\n".join(lines)

    def __repr__(self):
        return f"Bubble(p={self.p}, D={self.D}, perms={self.perms})"


def _bubble_from_edges(D: int, p: int, edges: Iterable[Sequence[int]]) -> Bubble:
    perms = [[None] * p for _ in range(D)]
    for w, b, c in edges:
        perms[c - 1][w] = b
    return Bubble(tuple(tuple(row) for row in perms), D)


@dataclass
class ValidationReport:
    checks: list[tuple[str, bool, str]]

    @property
    def ok(self) -> bool:
        return all(passed for _, passed, _ in self.checks)

    def failures(self) -> list[str]:
        return [f"{name}: {msg}" for name, passed, msg in self.checks if not passed]


def validate_bubble(obj) -> ValidationReport:
    """Check the bubble invariants on a Bubble or a JSON-style dict.

    Reports one line per invariant: vertex counts, per-vertex proper coloring
    (each vertex sees each color exactly once), bipartite edge structure and
    connectivity.  Diagnostic only, never raises.
    """
    checks: list[tuple[str, bool, str]] = []
    if isinstance(obj, Bubble):
        data = obj.to_json()
    else:
        data = obj
    D = data.get("D", 4)
    nw, nb = data.get("num_white", 0), data.get("num_black", 0)
    edges = data.get("edges", [])

    checks.append(("equal_counts", nw == nb, f"num_white={nw}, num_black={nb}"))

    bipartite_ok = all(
        len(e) == 3 and 0 <= e[0] < nw and 0 <= e[1] < nb and 1 <= e[2] <= D
        for e in edges
    )
    checks.append(("bipartite_edges", bipartite_ok, "edges must be (white, black, color)"))

    regular_ok = True
    msg = ""
    if bipartite_ok:
        for side, n, idx in (("white", nw, 0), ("black", nb, 1)):
            for v in range(n):
                colors = sorted(e[2] for e in edges if e[idx] == v)
                if colors != list(range(1, D + 1)):
                    regular_ok = False
                    missing = set(range(1, D + 1)) - set(colors)
                    if missing:
                        msg = f"{side} vertex {v} missing color {sorted(missing)[0]}"
                    else:
                        msg = f"{side} vertex {v} has repeated colors"
                    break
            if not regular_ok:
                break
    checks.append(("regular_coloring", regular_ok, msg or "each vertex has one edge per color"))

    if regular_ok and bipartite_ok and nw == nb and nw > 0:
        b = _bubble_from_edges(D, nw, edges)
        checks.append(("connected", b.is_connected(), "bubble must be connected"))
    else:
        checks.append(("connected", False, "not checkable on malformed input"))
    return ValidationReport(checks)


# ---------------------------------------------------------------------------
# Catalog constructors


def dipole(D: int = 4) -> Bubble:
    """The unique quadratic invariant: one white, one black, all colors."""
    return Bubble(tuple((0,) for _ in range(D)), D)


def melon(i: int, D: int = 4) -> Bubble:
    """Quartic melonic bubble: color i crossing, the other colors parallel."""
    if not 1 <= i <= D:
        raise ValueError(f"color {i} out of range")
    perms = []
    for c in range(1, D + 1):
        perms.append((1, 0) if c == i else (0, 1))
    return Bubble(tuple(perms), D)


def build_necklace(pair: tuple[int, int] | int, p: int) -> Bubble:
    """Necklace of size p: a 2p-cycle of doubled edges, pair colors parallel.

    For color type 12 the cycle alternates {1,2}-doubled and {3,4}-doubled
    edges; types 13 and 14 permute the colors.  p = 1 gives the dipole,
    p = 2 the quartic necklace.
    """
    if isinstance(pair, int):
        pair = (pair // 10, pair % 10)
    pair = tuple(sorted(pair))
    if pair not in NECKLACE_PAIRS:
        raise ValueError(f"necklace color type must be one of 12, 13, 14, got {pair}")
    if p < 1:
        raise ValueError("necklace size must be at least 1")
    ident = tuple(range(p))
    shift = tuple((w - 1) % p for w in range(p))
    perms = []
    for c in COLORS4:
        perms.append(ident if c in pair else shift)
    return Bubble(tuple(perms), 4)


@dataclass(frozen=True)
class Insertion:
    """One step in a tree-of-necklaces construction.

    ``target`` is None for the initial necklace, otherwise (white, color)
    identifying the edge of the intermediate bubble to cut open.
    """

    size: int
    target: tuple[int, int] | None = None


@dataclass(frozen=True)
class NecklaceTreeSpec:
    insertions: tuple[Insertion, ...]

    def __post_init__(self):
        if not self.insertions:
            raise ValueError("need at least the initial necklace")
        for k, ins in enumerate(self.insertions):
            if ins.size < 1:
                raise ValueError("necklace sizes must be >= 1")
            if (k == 0) != (ins.target is None):
                raise ValueError("exactly the first insertion has no target edge")

    @classmethod
    def from_sizes(cls, sizes: Sequence[int], targets: Sequence[tuple[int, int]] | None = None):
        """Spec with explicit targets, or a default chain on color-1 edges."""
        sizes = list(sizes)
        ins = [Insertion(sizes[0])]
        for k, s in enumerate(sizes[1:]):
            if targets is not None:
                ins.append(Insertion(s, tuple(targets[k])))
            else:
                ins.append(Insertion(s, (0, 1)))
        return cls(tuple(ins))

    @property
    def type_multiset(self) -> tuple[int, ...]:
        return tuple(sorted(i.size for i in self.insertions))

    @property
    def omega(self) -> int:
        """Enhancement exponent: 3 - n + sum of sizes."""
        n = len(self.insertions)
        return 3 - n + sum(i.size for i in self.insertions)


def realize_tree_of_necklaces(spec: NecklaceTreeSpec) -> Bubble:
    """Build the bubble of a tree of necklaces by successive insertions.

    Each insertion cuts the target edge of color i and splices in a type-12
    necklace opened on color i.  The open necklace is cut at the color-i edge
    incident to its black vertex 0 (all choices are isomorphic), and the
    splice keeps white-to-black orientation so bipartiteness is automatic.
    New vertices get consecutive labels, so later targets can reference them.
    """
    first = spec.insertions[0]
    bub = build_necklace((1, 2), first.size)
    perms = [list(row) for row in bub.perms]
    p = first.size
    for ins in spec.insertions[1:]:
        w_t, color = ins.target
        if not 0 <= w_t < p:
            raise ValueError(f"dangling target edge ({w_t}, {color}): only {p} whites present")
        if color not in COLORS4:
            raise ValueError(f"target color {color} out of range")
        q = ins.size
        neck = build_necklace((1, 2), q)
        b_host = perms[color - 1][w_t]
        off = p
        for c in COLORS4:
            row = perms[c - 1]
            for w in range(q):
                row.append(neck.perms[c - 1][w] + off)
        # cut black 0 of the new necklace on the insertion color
        w_cut = off + (0 if color in (1, 2) else 1 % q)
        perms[color - 1][w_t] = off  # host white -> new black 0
        perms[color - 1][w_cut] = b_host
        p += q
    out = Bubble(tuple(tuple(row) for row in perms), 4, trace=spec.insertions)
    assert out.is_connected()
    return out


def quartic_catalog() -> dict[str, Bubble]:
    """The seven connected quartic bubbles at rank 4, plus the dipole."""
    cat = {"dipole": dipole()}
    for i in COLORS4:
        cat[f"melon{i}"] = melon(i)
    for pair in NECKLACE_PAIRS:
        cat[f"necklace{pair[0]}{pair[1]}"] = build_necklace(pair, 2)
    return cat


# ---------------------------------------------------------------------------
# Operations


def bicolored_faces(b: Bubble, c: int, cp: int) -> tuple[int, list[list[int]]]:
    """Faces of colors (c, c'): cycles alternating the two colors.

    Returns the face count and the faces as lists of white vertices; each
    edge of color c or c' lies on exactly one face.
    """
    if c == cp:
        raise ValueError("need two distinct colors")
    perm = b.perms[c - 1]
    inv = b.inverse_perm(cp)
    seen = [False] * b.p
    faces = []
    for start in range(b.p):
        if seen[start]:
            continue
        cycle = []
        w = start
        while not seen[w]:
            seen[w] = True
            cycle.append(w)
            w = inv[perm[w]]
        faces.append(cycle)
    return len(faces), faces


def contract(b: Bubble, vbar: int, v: int) -> tuple[tuple[Bubble, ...], int]:
    """Remove black vbar and white v, reconnecting same-colored half-edges.

    Every color edge joining v directly to vbar closes into a loop counting
    +1 in the returned loop power.  The surviving graph is returned as a
    multiset of connected bubbles on 2(p-1) vertices total (empty for the
    dipole), never re-glued.
    """
    p = b.p
    loops = 0
    new_perms = []
    for c in range(1, b.D + 1):
        perm = list(b.perms[c - 1])
        if perm[v] == vbar:
            loops += 1
        else:
            w_in = perm.index(vbar)
            perm[w_in] = perm[v]
        row = [perm[w] - (perm[w] > vbar) for w in range(p) if w != v]
        new_perms.append(tuple(row))
    if p == 1:
        return (), loops
    rest = Bubble(tuple(new_perms), b.D)
    return _split_components(rest), loops


def compose(b: Bubble, v: int, b2: Bubble, vbar2: int) -> Bubble:
    """Composition: remove white v of b and black vbar2 of b2, reconnect.

    The result has 2(p + p' - 1) vertices and is connected when both inputs
    are.
    """
    p, p2 = b.p, b2.p
    perms = []
    for c in range(b.D):
        perm1 = b.perms[c]
        perm2 = b2.perms[c]
        row = [perm1[w] for w in range(p) if w != v]
        for w2 in range(p2):
            t = perm2[w2]
            if t == vbar2:
                row.append(perm1[v])
            else:
                row.append(p + t - (t > vbar2))
        perms.append(tuple(row))
    return Bubble(tuple(perms), b.D)


def _split_components(b: Bubble) -> tuple[Bubble, ...]:
    p = b.p
    invs = [b.inverse_perm(c) for c in range(1, b.D + 1)]
    comp_w = [-1] * p
    comp_b = [-1] * p
    ncomp = 0
    for start in range(p):
        if comp_w[start] >= 0:
            continue
        stack = [("w", start)]
        comp_w[start] = ncomp
        while stack:
            kind, x = stack.pop()
            for c in range(b.D):
                if kind == "w":
                    y = b.perms[c][x]
                    if comp_b[y] < 0:
                        comp_b[y] = ncomp
                        stack.append(("b", y))
                else:
                    y = invs[c][x]
                    if comp_w[y] < 0:
                        comp_w[y] = ncomp
                        stack.append(("w", y))
        ncomp += 1
    if ncomp == 1:
        return (b,)
    parts = []
    for k in range(ncomp):
        wmap = {}
        bmap = {}
        for w in range(p):
            if comp_w[w] == k:
                wmap[w] = len(wmap)
        for x in range(p):
            if comp_b[x] == k:
                bmap[x] = len(bmap)
        perms = []
        for c in range(b.D):
            row = [None] * len(wmap)
            for w, nw in wmap.items():
                row[nw] = bmap[b.perms[c][w]]
            perms.append(tuple(row))
        parts.append(Bubble(tuple(perms), b.D))
    parts.sort(key=canonical_form)
    return tuple(parts)


def canonical_form(b: Bubble):
    """Canonical label, equal for two bubbles iff they are isomorphic.

    Isomorphisms here preserve colors and the bipartition.  Because a bubble
    is properly colored and connected, an isomorphism is determined by the
    image of a single white vertex, so a deterministic BFS relabeling from
    each possible white root and a lexicographic minimum give an exact
    canonical form in O(p^2 D).
    """
    p = b.p
    if p == 0:
        return (b.D, 0)
    invs = [b.inverse_perm(c) for c in range(1, b.D + 1)]
    best = None
    for root in range(p):
        wnum = [-1] * p
        bnum = [-1] * p
        wnum[root] = 0
        order = [("w", root)]
        cw, cb = 1, 0
        head = 0
        while head < len(order):
            kind, x = order[head]
            head += 1
            for c in range(b.D):
                if kind == "w":
                    y = b.perms[c][x]
                    if bnum[y] < 0:
                        bnum[y] = cb
                        cb += 1
                        order.append(("b", y))
                else:
                    y = invs[c][x]
                    if wnum[y] < 0:
                        wnum[y] = cw
                        cw += 1
                        order.append(("w", y))
        wold = [0] * p
        for w in range(p):
            wold[wnum[w]] = w
        enc = tuple(
            tuple(bnum[b.perms[c][wold[nw]]] for nw in range(p)) for c in range(b.D)
        )
        if best is None or enc < best:
            best = enc
    return (b.D, p) + best


def are_isomorphic(b1: Bubble, b2: Bubble) -> bool:
    return canonical_form(b1) == canonical_form(b2)


def bubble_from_spec_string(text: str) -> Bubble:
    """Parse catalog shorthand: 'dipole', 'melon3', 'necklace12:3', 'tree:2,2'."""
    text = text.strip()
    if text == "dipole":
        return dipole()
    if text.startswith("melon"):
        return melon(int(text[5:]))
    if text.startswith("necklace"):
        body = text[len("necklace"):]
        pair, _, size = body.partition(":")
        return build_necklace(int(pair), int(size) if size else 2)
    if text.startswith("tree:"):
        sizes = [int(s) for s in text[5:].split(",")]
        return realize_tree_of_necklaces(NecklaceTreeSpec.from_sizes(sizes))
    raise ValueError(f"unknown bubble spec {text!r}")


def bubble_to_json_str(b: Bubble) -> str:
    return json.dumps(b.to_json())
