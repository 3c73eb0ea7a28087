"""Feynman graphs: Wick closures of bubbles, exact N-exponents, and series.

A Feynman graph is a multiset of bubbles plus a partial white-to-black
matching of color-0 edges.  The amplitude of a closed connected graph is
(prod of -couplings) * N^e with

    e(g) = sum_c F_{0c}(g) - alpha * E_0(g) + sum_bubbles omega_i,

alpha = D - 1 = 3.  Gaussian moments are computed two independent ways: a
memoized contraction recursion over bubble multisets (wick mode, exact in N)
and a brute-force sum over index assignments at fixed small N (direct mode).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .bubbles import (
    Bubble,
    COLORS4,
    NECKLACE_PAIRS,
    NecklaceTreeSpec,
    Insertion,
    build_necklace,
    canonical_form,
    compose,
    contract,
    dipole,
    melon,
    realize_tree_of_necklaces,
)
from .laurent import CouplingSeries, LaurentPolynomial, ONE

ALPHA = 3  # D - 1 at rank 4


class BudgetError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Model specifications


@dataclass(frozen=True)
class ModelEntry:
    bubble: Bubble
    coupling: str
    omega: int


@dataclass(frozen=True)
class ModelSpec:
    """Measure definition: interaction bubbles with couplings and enhancements."""

    entries: tuple[ModelEntry, ...]
    D: int = 4

    def __post_init__(self):
        names = [e.coupling for e in self.entries]
        if len(set(names)) != len(names):
            raise ValueError("coupling symbols must be distinct")
        object.__setattr__(
            self, "_by_key", {canonical_form(e.bubble): e for e in self.entries}
        )

    @property
    def alpha(self) -> int:
        return self.D - 1

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(e.coupling for e in self.entries)

    def entry_for(self, bubble: Bubble) -> ModelEntry:
        key = canonical_form(bubble)
        try:
            return self._by_key[key]
        except KeyError:
            raise ValueError("bubble has no entry in this model") from None

    def to_json(self) -> dict:
        return {
            "entries": [
                {"bubble": e.bubble.to_json(), "coupling": e.coupling, "omega": e.omega}
                for e in self.entries
            ]
        }


def standard_quartic() -> ModelSpec:
    """All seven quartic interactions at the uniform N^3 scaling."""
    entries = [ModelEntry(melon(i), f"l{i}", 3) for i in COLORS4]
    entries += [
        ModelEntry(build_necklace(pair, 2), f"l{pair[0]}{pair[1]}", 3)
        for pair in NECKLACE_PAIRS
    ]
    return ModelSpec(tuple(entries))


def full_quartic() -> ModelSpec:
    """Melons at N^3 and all three necklaces maximally enhanced to N^4."""
    entries = [ModelEntry(melon(i), f"l{i}", 3) for i in COLORS4]
    entries += [
        ModelEntry(build_necklace(pair, 2), f"l{pair[0]}{pair[1]}", 4)
        for pair in NECKLACE_PAIRS
    ]
    return ModelSpec(tuple(entries))


def restricted_quartic() -> ModelSpec:
    """Melons plus the single enhanced necklace of color type 12."""
    entries = [ModelEntry(melon(i), f"l{i}", 3) for i in COLORS4]
    entries.append(ModelEntry(build_necklace((1, 2), 2), "l12", 4))
    return ModelSpec(tuple(entries))


def necklace_tree_model(specs: Sequence[tuple[NecklaceTreeSpec, str]]) -> ModelSpec:
    """Measure over trees of necklaces, each weighted by its own enhancement."""
    entries = [
        ModelEntry(realize_tree_of_necklaces(s), name, s.omega) for s, name in specs
    ]
    return ModelSpec(tuple(entries))


_PRESETS = {
    "standard": standard_quartic,
    "full": full_quartic,
    "restricted": restricted_quartic,
}


def model_from_json(data: dict) -> ModelSpec:
    if "preset" in data:
        try:
            return _PRESETS[data["preset"]]()
        except KeyError:
            raise ValueError(f"unknown preset {data['preset']!r}") from None
    entries = tuple(
        ModelEntry(Bubble.from_json(e["bubble"]), e["coupling"], int(e["omega"]))
        for e in data["entries"]
    )
    return ModelSpec(entries)


# ---------------------------------------------------------------------------
# Feynman graphs


@dataclass(frozen=True)
class FeynmanGraph:
    """Bubbles joined by color-0 edges (a partial white-to-black matching).

    ``pairing[w]`` is the global black index matched to global white ``w``,
    or None if that white is free.  Global indices run bubble by bubble.
    ``tags`` holds the coupling symbol per bubble, None marking an observable.
    """

    bubbles: tuple[Bubble, ...]
    pairing: tuple[int | None, ...]
    tags: tuple[str | None, ...] | None = None

    def __post_init__(self):
        if len(self.pairing) != self.total_p:
            raise ValueError("pairing length must equal the total white count")
        matched = [b for b in self.pairing if b is not None]
        if len(set(matched)) != len(matched):
            raise ValueError("pairing must be injective")

    @property
    def offsets(self) -> tuple[int, ...]:
        out = [0]
        for b in self.bubbles:
            out.append(out[-1] + b.p)
        return tuple(out)

    @property
    def total_p(self) -> int:
        return sum(b.p for b in self.bubbles)

    @property
    def e0(self) -> int:
        return sum(1 for b in self.pairing if b is not None)

    @property
    def is_closed(self) -> bool:
        return self.e0 == self.total_p

    def free_whites(self) -> list[int]:
        return [w for w, b in enumerate(self.pairing) if b is None]

    def free_blacks(self) -> list[int]:
        matched = {b for b in self.pairing if b is not None}
        return [b for b in range(self.total_p) if b not in matched]

    def bubble_of(self, gid: int) -> int:
        offs = self.offsets
        for i in range(len(self.bubbles)):
            if offs[i] <= gid < offs[i + 1]:
                return i
        raise IndexError(gid)

    def _global_sigma(self, color: int) -> list[int]:
        offs = self.offsets
        out = []
        for i, b in enumerate(self.bubbles):
            out.extend(offs[i] + x for x in b.perms[color - 1])
        return out

    def _pair_inv(self) -> dict[int, int]:
        return {b: w for w, b in enumerate(self.pairing) if b is not None}

    def closed_faces(self, color: int) -> int:
        """Number of closed faces of colors (0, color)."""
        sigma = self._global_sigma(color)
        inv = self._pair_inv()
        seen = [False] * self.total_p
        count = 0
        for start in range(self.total_p):
            if seen[start] or self.pairing[start] is None:
                continue
            w = start
            closed = True
            while not seen[w]:
                seen[w] = True
                nxt = inv.get(sigma[w])
                if nxt is None:
                    closed = False
                    break
                w = nxt
            if closed and w == start:
                count += 1
        return count

    def broken_faces(self, color: int) -> list[tuple[int, int]]:
        """Broken (0, color) faces as (free white, free black) global pairs."""
        sigma = self._global_sigma(color)
        inv = self._pair_inv()
        out = []
        for w0 in self.free_whites():
            w = w0
            steps = 0
            while True:
                b = sigma[w]
                nxt = inv.get(b)
                if nxt is None:
                    out.append((w0, b))
                    break
                w = nxt
                steps += 1
                assert steps <= self.total_p, "broken face failed to terminate"
        return out

    def total_faces(self) -> int:
        return sum(self.closed_faces(c) for c in range(1, self.bubbles[0].D + 1))

    def is_connected(self) -> bool:
        """Connectivity on the incidence of bubbles and 0-edges."""
        n = len(self.bubbles)
        if n == 0:
            return False
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for w, b in enumerate(self.pairing):
            if b is not None:
                rw, rb = find(self.bubble_of(w)), find(self.bubble_of(b))
                parent[rw] = rb
        return len({find(i) for i in range(n)}) == 1

    def to_dot(self, name: str = "graph0") -> str:
        palette = {1: "red", 2: "blue", 3: "forestgreen", 4: "darkorange"}
        offs = self.offsets
        lines = [f"graph {name} {{"]
        for i, b in enumerate(self.bubbles):
            for w in range(b.p):
                lines.append(f"  w{offs[i] + w} [shape=circle, fillcolor=white, style=filled];")
            for x in range(b.p):
                lines.append(
                    f"  b{offs[i] + x} [shape=circle, fillcolor=black, style=filled, fontcolor=white];"
                )
            for w, x, c in b.edges():
                lines.append(
                    f"  w{offs[i] + w} -- b{offs[i] + x} [color={palette[c]}, label=\"{c}\"];"
                )
        for w, b in enumerate(self.pairing):
            if b is not None:
                lines.append(f"  w{w} -- b{b} [style=dashed, label=\"0\"];")
        lines.append("}")
        return "\n".join(lines)


def enumerate_closures(
    bubbles: Sequence[Bubble],
    free: int = 0,
    connected_only: bool = False,
    tags: Sequence[str | None] | None = None,
) -> list[FeynmanGraph]:
    """All labeled 0-edge matchings leaving ``free`` white/black pairs open."""
    bubbles = tuple(bubbles)
    P = sum(b.p for b in bubbles)
    if free < 0 or free > P:
        raise ValueError("free pair count out of range")
    tags = tuple(tags) if tags is not None else None
    out = []
    whites = range(P)
    for free_w in itertools.combinations(whites, free):
        used_w = [w for w in whites if w not in free_w]
        for free_b in itertools.combinations(range(P), free):
            used_b = [b for b in range(P) if b not in free_b]
            for perm in itertools.permutations(used_b):
                pairing: list[int | None] = [None] * P
                for w, b in zip(used_w, perm):
                    pairing[w] = b
                g = FeynmanGraph(bubbles, tuple(pairing), tags)
                if connected_only and not g.is_connected():
                    continue
                out.append(g)
    return out


def degree_exponent(g: FeynmanGraph, model: ModelSpec) -> int:
    """Exponent e(g) with amplitude (prod -couplings) * N^e, exact."""
    if not g.is_closed:
        raise ValueError("degree_exponent needs a closed graph")
    omega_sum = sum(model.entry_for(b).omega for b in g.bubbles)
    return g.total_faces() - model.alpha * g.e0 + omega_sum


def amplitude(g: FeynmanGraph, model: ModelSpec) -> CouplingSeries:
    """Full amplitude as a one-term coupling series (sign included)."""
    counts = [0] * len(model.entries)
    index = {e.coupling: i for i, e in enumerate(model.entries)}
    for b in g.bubbles:
        counts[index[model.entry_for(b).coupling]] += 1
    e = degree_exponent(g, model)
    series = CouplingSeries(model.symbols)
    series.add_term(
        tuple(counts), LaurentPolynomial.monomial(e, (-1) ** len(g.bubbles))
    )
    return series


def boundary_graph(g: FeynmanGraph) -> tuple[Bubble, ...]:
    """Boundary bubble(s) of an open graph, one vertex per free vertex."""
    if g.is_closed:
        raise ValueError("closed graph has no boundary")
    free_w = g.free_whites()
    free_b = g.free_blacks()
    w_index = {w: i for i, w in enumerate(free_w)}
    b_index = {b: i for i, b in enumerate(free_b)}
    p = len(free_w)
    perms = []
    for c in range(1, g.bubbles[0].D + 1):
        row = [None] * p
        for w0, b_end in g.broken_faces(c):
            row[w_index[w0]] = b_index[b_end]
        if any(x is None for x in row):
            raise AssertionError("free white missing a broken face")
        perms.append(tuple(row))
    bub = Bubble(tuple(perms), g.bubbles[0].D)
    from .bubbles import _split_components

    return _split_components(bub)


# ---------------------------------------------------------------------------
# Gaussian moments: exact contraction recursion + direct index summation

_WICK_CACHE: dict[tuple, LaurentPolynomial] = {}


def _bubble_from_canonical(enc) -> Bubble:
    D, p = enc[0], enc[1]
    return Bubble(tuple(enc[2:]), D)


def _multiset_key(bubbles: Iterable[Bubble]) -> tuple:
    return tuple(sorted(canonical_form(b) for b in bubbles))


def _wick_moment_key(key: tuple) -> LaurentPolynomial:
    if not key:
        return ONE
    cached = _WICK_CACHE.get(key)
    if cached is not None:
        return cached
    bubbles = [_bubble_from_canonical(enc) for enc in key]
    b0 = bubbles[0]
    total = LaurentPolynomial()
    # pair white 0 of the first bubble with every black, Wick style
    for vbar in range(b0.p):
        parts, nu = contract(b0, vbar, 0)
        newkey = _multiset_key(list(parts) + bubbles[1:])
        total = total + _wick_moment_key(newkey).shift(nu - ALPHA)
    for j in range(1, len(bubbles)):
        bj = bubbles[j]
        rest = bubbles[1:j] + bubbles[j + 1 :]
        for vbar in range(bj.p):
            merged = compose(b0, 0, bj, vbar)
            newkey = _multiset_key([merged] + rest)
            total = total + _wick_moment_key(newkey).shift(-ALPHA)
    _WICK_CACHE[key] = total
    return total


def gaussian_moment(
    bubbles: Sequence[Bubble], mode: str = "wick", n_value: int | None = None
):
    """Gaussian expectation of a product of bubbles, covariance delta/N^3.

    wick mode returns the exact LaurentPolynomial in N (the sum over all
    labeled closures of N^(F - 3 E_0), evaluated by recursive contraction).
    direct mode sums explicitly over index assignments at fixed n_value and
    returns a Fraction; capped at N <= 3 and 8 vertices.
    """
    bubbles = tuple(bubbles)
    if mode == "wick":
        return _wick_moment_key(_multiset_key(bubbles))
    if mode != "direct":
        raise ValueError("mode must be 'wick' or 'direct'")
    if n_value is None or n_value > 3 or n_value < 1:
        raise ValueError("direct mode needs n_value in {1, 2, 3}")
    P = sum(b.p for b in bubbles)
    if 2 * P > 8:
        raise BudgetError("direct mode capped at 8 vertices")
    return _direct_moment(bubbles, n_value)


def _direct_moment(bubbles: tuple[Bubble, ...], n: int) -> Fraction:
    P = sum(b.p for b in bubbles)
    D = bubbles[0].D if bubbles else 4
    offs = [0]
    for b in bubbles:
        offs.append(offs[-1] + b.p)
    # global inverse permutations: for each color, black gid -> white gid
    inv = []
    for c in range(1, D + 1):
        m = [0] * P
        for i, b in enumerate(bubbles):
            for w, x in enumerate(b.perms[c - 1]):
                m[offs[i] + x] = offs[i] + w
        inv.append(m)
    total = 0
    for pi in itertools.permutations(range(P)):
        cnt = 1
        for c in range(D):
            invc = inv[c]
            count = 0
            # one index per color-c edge, labeled by its white endpoint
            for assign in itertools.product(range(n), repeat=P):
                if all(assign[w] == assign[invc[pi[w]]] for w in range(P)):
                    count += 1
            cnt *= count
        total += cnt
    return Fraction(total, n ** (ALPHA * P))


def connected_moment(bubbles: Sequence[Bubble]) -> LaurentPolynomial:
    """Sum of N^(F - 3 E_0) over closures whose every component meets bubble 0.

    Standard rooted inclusion-exclusion on the full Gaussian moments.  When
    bubble 0 is connected this is exactly the connected-closure sum.
    """
    bubbles = tuple(bubbles)
    rest = list(range(1, len(bubbles)))
    memo: dict[frozenset, LaurentPolynomial] = {}

    def w_of(subset: frozenset) -> LaurentPolynomial:
        if subset in memo:
            return memo[subset]
        items = [bubbles[0]] + [bubbles[i] for i in sorted(subset)]
        total = _wick_moment_key(_multiset_key(items))
        for r in range(len(subset)):
            for t in itertools.combinations(sorted(subset), r):
                tset = frozenset(t)
                others = [bubbles[i] for i in sorted(subset - tset)]
                total = total - w_of(tset) * _wick_moment_key(_multiset_key(others))
        memo[subset] = total
        return total

    return w_of(frozenset(rest))


# ---------------------------------------------------------------------------
# Perturbative series


def observable_enhancement(observable: Bubble) -> int:
    """Natural enhancement of an observable bubble.

    Trees of necklaces carry their construction trace; bare necklaces of any
    color type get 2 + p.  Anything else must be given explicitly.
    """
    if observable.trace is not None:
        spec = NecklaceTreeSpec(tuple(observable.trace))
        return spec.omega
    key = canonical_form(observable)
    for pair in NECKLACE_PAIRS:
        p = observable.p
        if key == canonical_form(build_necklace(pair, p)):
            return 2 + p
    raise ValueError("cannot infer the enhancement of this observable; pass it explicitly")


def _iter_multisets(n_entries: int, max_total: int):
    """All count tuples with sum in 0..max_total."""
    def rec(i, budget):
        if i == n_entries - 1:
            for k in range(budget + 1):
                yield (k,)
            return
        for k in range(budget + 1):
            for tail in rec(i + 1, budget - k):
                yield (k,) + tail

    if n_entries == 0:
        yield ()
        return
    yield from rec(0, max_total)


def expectation_series(
    model: ModelSpec,
    observable: Bubble,
    order: int,
    observable_omega: int | None = None,
    max_vertices: int = 20,
) -> CouplingSeries:
    """Normalized expectation of an observable as a series in the couplings.

    The coefficient of each coupling monomial is the connected-closure sum of
    N^(e - 4) with the observable weighted by its own enhancement, times
    (-1)^n / prod n_i! in the labeled-expansion convention.  The N^0 part of
    each coefficient is the leading-order graph count.
    """
    if observable_omega is None:
        observable_omega = observable_enhancement(observable)
    series = CouplingSeries(model.symbols)
    for counts in _iter_multisets(len(model.entries), order):
        n_total = sum(counts)
        bubs = [observable]
        omega_sum = observable_omega
        for entry, k in zip(model.entries, counts):
            bubs.extend([entry.bubble] * k)
            omega_sum += k * entry.omega
        if sum(b.num_vertices for b in bubs) > max_vertices:
            raise BudgetError(
                f"multiset {counts} exceeds the {max_vertices}-vertex budget"
            )
        w = connected_moment(bubs)
        if not w:
            continue
        weight = Fraction((-1) ** n_total, math.prod(math.factorial(k) for k in counts))
        series.add_term(counts, w.shift(omega_sum - 4) * weight)
    return series


def free_energy_series(model: ModelSpec, order: int, max_vertices: int = 20) -> CouplingSeries:
    """Series of log Z / N^4 over connected vacuum graphs.

    Every coefficient has N-exponent <= 0; the sign convention follows the
    amplitude factor (-coupling) per bubble.  (The free energy itself is
    -log Z.)
    """
    series = CouplingSeries(model.symbols)
    for counts in _iter_multisets(len(model.entries), order):
        n_total = sum(counts)
        if n_total == 0:
            continue
        bubs: list[Bubble] = []
        omega_sum = 0
        for entry, k in zip(model.entries, counts):
            bubs.extend([entry.bubble] * k)
            omega_sum += k * entry.omega
        if sum(b.num_vertices for b in bubs) > max_vertices:
            raise BudgetError(
                f"multiset {counts} exceeds the {max_vertices}-vertex budget"
            )
        w = connected_moment(bubs)
        if not w:
            continue
        weight = Fraction((-1) ** n_total, math.prod(math.factorial(k) for k in counts))
        series.add_term(counts, w.shift(omega_sum - 4) * weight)
    return series


# ---------------------------------------------------------------------------
# Q-map: trees of necklaces -> restricted quartic model


@dataclass
class _OpenGraph:
    """Open quartic graph for one tree of necklaces, with its boundary map."""

    bubbles: list[Bubble]
    tags: list[str]
    zeros: list[tuple[tuple[int, int], tuple[int, int]]]  # ((bi, w), (bj, b))
    phi_w: dict[int, tuple[int, int]]  # realized white -> (bubble, white)
    phi_b: dict[int, tuple[int, int]]


def _loop_of_necklaces(size: int, start_index: int) -> tuple[list[Bubble], list, dict, dict]:
    """Loop of ``size`` quartic 12-necklaces whose boundary is the size-p necklace."""
    neck = build_necklace((1, 2), 2)
    bubbles = [neck] * size
    zeros = []
    for k in range(size):
        zeros.append(((start_index + k, 0), (start_index + (k + 1) % size, 0)))
    phi_w = {k: (start_index + k, 1) for k in range(size)}
    phi_b = {k: (start_index + k, 1) for k in range(size)}
    return bubbles, zeros, phi_w, phi_b


def open_graph_for_tree(insertions: Sequence[Insertion]) -> _OpenGraph:
    """Open restricted-quartic graph whose boundary is the realized tree.

    Follows the recursive construction: the base necklace is a 0-edge loop of
    quartic necklaces; each insertion attaches a loop for the new necklace
    through one melonic bubble of the insertion color and two 0-edges.  The
    first 0-edge consumes the free white representing the target edge's white
    endpoint; the second runs from the melon white across the crossing pair
    into the new loop.  The returned vertex maps identify the realized tree's
    vertices with the free vertices of the open graph.
    """
    first = insertions[0]
    bubbles, zeros, phi_w, phi_b = _loop_of_necklaces(first.size, 0)
    bubbles = list(bubbles)
    tags = ["l12"] * first.size
    p = first.size
    for ins in insertions[1:]:
        w_t, color = ins.target
        q = ins.size
        loop_start = len(bubbles)
        lb, lz, lphi_w, lphi_b = _loop_of_necklaces(q, loop_start)
        bubbles.extend(lb)
        tags.extend(["l12"] * q)
        zeros.extend(lz)
        m_index = len(bubbles)
        bubbles.append(melon(color))
        tags.append(f"l{color}")
        w_e = phi_w[w_t]
        zeros.append((w_e, (m_index, 0)))  # e1: host free white -> melon black 0
        zeros.append(((m_index, 1), lphi_b[0]))  # e2: melon white 1 -> loop black 0
        # boundary identifications after the splice
        phi_w[w_t] = (m_index, 0)
        for k in range(q):
            phi_w[p + k] = lphi_w[k]
            phi_b[p + k] = lphi_b[k]
        phi_b[p + 0] = (m_index, 1)
        p += q
    return _OpenGraph(bubbles, tags, zeros, phi_w, phi_b)


def open_graph_as_feynman(og: _OpenGraph) -> FeynmanGraph:
    offs = [0]
    for b in og.bubbles:
        offs.append(offs[-1] + b.p)
    pairing: list[int | None] = [None] * offs[-1]
    for (bi, w), (bj, x) in og.zeros:
        pairing[offs[bi] + w] = offs[bj] + x
    return FeynmanGraph(tuple(og.bubbles), tuple(pairing), tuple(og.tags))


def q_map(g: FeynmanGraph) -> FeynmanGraph:
    """Replace every tree-of-necklaces bubble by its open quartic graph.

    The degree exponent is preserved exactly: e(g) in the trees-of-necklaces
    model equals e(q_map(g)) in the restricted quartic model.
    """
    new_bubbles: list[Bubble] = []
    new_tags: list[str] = []
    zeros: list[tuple[tuple[int, int], tuple[int, int]]] = []
    phi_ws: list[dict] = []
    phi_bs: list[dict] = []
    for b in g.bubbles:
        if b.trace is None:
            raise ValueError("q_map needs bubbles carrying a tree-of-necklaces trace")
        og = open_graph_for_tree(b.trace)
        shift = len(new_bubbles)
        phi_ws.append({w: (bi + shift, x) for w, (bi, x) in og.phi_w.items()})
        phi_bs.append({w: (bi + shift, x) for w, (bi, x) in og.phi_b.items()})
        for ((bi, w), (bj, x)) in og.zeros:
            zeros.append(((bi + shift, w), (bj + shift, x)))
        new_bubbles.extend(og.bubbles)
        new_tags.extend(og.tags)
    # re-attach the original 0-edges through the boundary identifications
    offs_old = g.offsets
    for w_gid, b_gid in enumerate(g.pairing):
        if b_gid is None:
            continue
        iw = g.bubble_of(w_gid)
        ib = g.bubble_of(b_gid)
        src = phi_ws[iw][w_gid - offs_old[iw]]
        dst = phi_bs[ib][b_gid - offs_old[ib]]
        zeros.append((src, dst))
    offs = [0]
    for b in new_bubbles:
        offs.append(offs[-1] + b.p)
    pairing: list[int | None] = [None] * offs[-1]
    for (bi, w), (bj, x) in zeros:
        gid = offs[bi] + w
        if pairing[gid] is not None:
            raise AssertionError("0-edge collision in q_map assembly")
        pairing[gid] = offs[bj] + x
    return FeynmanGraph(tuple(new_bubbles), tuple(pairing), tuple(new_tags))
