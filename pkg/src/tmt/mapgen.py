"""Exhaustive generation of connected labeled maps for the quartic models.

A map with E edges is a permutation sigma of the 2E darts (vertex rotations)
together with the fixed pairing alpha(2k) = 2k+1.  Map isomorphism is
conjugation by the centralizer of alpha (edge relabelings and flips, size
2^E E!), so isomorphism classes are computed by minimizing an integer
encoding of sigma over all conjugations, vectorized over the whole of S_2E.
An optional cilium is one extra dart fixed by alpha and by conjugations.

Per class the face count of every edge subset is tabulated once; the degree
of any labeling is then a few table lookups, which lets the verification
campaigns sweep all labelings as numpy vectors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .ifmaps import StrandedMap, label_colors

LABELS_FULL = ("1", "2", "3", "4", "12", "13", "14")
LABELS_RESTRICTED = ("1", "2", "3", "4", "12")


def model_labels(model: str) -> tuple[str, ...]:
    if model == "restricted":
        return LABELS_RESTRICTED
    if model == "full":
        return LABELS_FULL
    raise ValueError("model must be 'restricted' or 'full'")


def _centralizer(n_edges: int, extra_fixed: int = 0) -> np.ndarray:
    """All dart permutations commuting with alpha (cilium dart kept fixed)."""
    n = 2 * n_edges + extra_fixed
    out = []
    for edge_perm in itertools.permutations(range(n_edges)):
        for flips in itertools.product((0, 1), repeat=n_edges):
            c = [0] * n
            for k in range(n_edges):
                c[2 * k] = 2 * edge_perm[k] + flips[k]
                c[2 * k + 1] = 2 * edge_perm[k] + 1 - flips[k]
            for j in range(extra_fixed):
                c[2 * n_edges + j] = 2 * n_edges + j
            out.append(c)
    return np.array(out, dtype=np.int64)


def _sigma_cycles(sigma: Sequence[int]) -> list[list[int]]:
    n = len(sigma)
    seen = [False] * n
    cycles = []
    for d0 in range(n):
        if seen[d0]:
            continue
        cyc = []
        d = d0
        while not seen[d]:
            seen[d] = True
            cyc.append(d)
            d = sigma[d]
        cycles.append(cyc)
    return cycles


def _is_connected_sigma(sigma: Sequence[int], n_edges: int) -> bool:
    n = len(sigma)
    if n == 0:
        return True
    seen = [False] * n
    stack = [0]
    seen[0] = True
    count = 1
    while stack:
        d = stack.pop()
        nbrs = [sigma[d]]
        if d < 2 * n_edges:
            nbrs.append(d ^ 1)
        for x in nbrs:
            if not seen[x]:
                seen[x] = True
                count += 1
                stack.append(x)
    return count == n


@dataclass
class SigmaClass:
    """One isomorphism class of connected maps with unlabeled edges."""

    n_edges: int
    cilium: bool
    sigma: tuple[int, ...]
    aut_edge_actions: list[tuple[tuple[int, ...], tuple[int, ...]]]
    n_vertices: int
    is_tree: bool
    faces_by_mask: np.ndarray  # faces of the submap of each edge subset
    cut_edge: tuple[bool, ...]

    def to_map(self, labels: Sequence[str]) -> StrandedMap:
        return map_from_sigma(self.sigma, self.n_edges, labels, self.cilium)


def map_from_sigma(
    sigma: Sequence[int], n_edges: int, labels: Sequence[str], cilium: bool
) -> StrandedMap:
    cil_dart = 2 * n_edges
    rotations = []
    cilia = []
    for cyc in _sigma_cycles(sigma):
        if cilium and cil_dart in cyc:
            i = cyc.index(cil_dart)
            cyc = cyc[i + 1 :] + cyc[:i]
            rotations.append(tuple(cyc))
            cilia.append(0)
        else:
            rotations.append(tuple(cyc))
            cilia.append(None)
    if not rotations:  # edgeless vacuum map: one bare vertex
        rotations = [()]
        cilia = [None]
    return StrandedMap(tuple(rotations), tuple(labels), tuple(cilia))


def _subset_faces(sigma: Sequence[int], n_edges: int, cilium: bool, mask: int) -> int:
    """Closed faces of the submap keeping the edges in ``mask``.

    Absent darts are skipped in the rotations; a vertex with no remaining
    dart contributes one face unless it carries the cilium; strands through
    the cilium dart do not close.
    """
    cil_dart = 2 * n_edges if cilium else -1
    present = set()
    for k in range(n_edges):
        if mask >> k & 1:
            present.add(2 * k)
            present.add(2 * k + 1)
    succ: dict[int, int] = {}
    faces = 0
    for cyc in _sigma_cycles(sigma):
        reduced = [d for d in cyc if d in present or d == cil_dart]
        if not reduced or reduced == [cil_dart]:
            if cil_dart not in cyc:
                faces += 1
            continue
        n = len(reduced)
        for i, d in enumerate(reduced):
            if d != cil_dart:
                succ[d] = reduced[(i + 1) % n]
    visited: set[int] = set()
    for d0 in sorted(present):
        if d0 in visited:
            continue
        d = d0
        closed = True
        while True:
            visited.add(d)
            nxt = succ[d ^ 1]
            if nxt == cil_dart:
                closed = False
                break
            d = nxt
            if d == d0:
                break
            if d in visited:
                closed = False
                break
        if closed:
            faces += 1
    return faces


def _cut_edges(sigma: Sequence[int], n_edges: int) -> tuple[bool, ...]:
    cycles = _sigma_cycles(sigma)
    vert_of = {}
    for v, cyc in enumerate(cycles):
        for d in cyc:
            vert_of[d] = v
    nv = len(cycles)
    flags = []
    for e in range(n_edges):
        a, b = vert_of[2 * e], vert_of[2 * e + 1]
        if a == b:
            flags.append(False)
            continue
        adj = [[] for _ in range(nv)]
        for k in range(n_edges):
            if k == e:
                continue
            x, y = vert_of[2 * k], vert_of[2 * k + 1]
            adj[x].append(y)
            adj[y].append(x)
        seen = {a}
        stack = [a]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        flags.append(b not in seen)
    return tuple(flags)


_SIGMA_CACHE: dict[tuple[int, bool], list] = {}


def sigma_classes(n_edges: int, cilium: bool = False) -> list[SigmaClass]:
    """All isomorphism classes of connected maps with the given edge count."""
    cached = _SIGMA_CACHE.get((n_edges, cilium))
    if cached is not None:
        return cached
    if n_edges == 0:
        sigma = (0,) if cilium else ()
        return [
            SigmaClass(
                0,
                cilium,
                sigma,
                [((), ())],
                1,
                True,
                np.array([0 if cilium else 1], dtype=np.int64),
                (),
            )
        ]
    n = 2 * n_edges + (1 if cilium else 0)
    cents = _centralizer(n_edges, 1 if cilium else 0)
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    powers = n ** np.arange(n, dtype=np.int64)
    best = None
    for c in cents:
        inv = np.empty(n, dtype=np.int64)
        inv[c] = np.arange(n)
        conj = c[perms[:, inv]]
        codes = conj @ powers
        best = codes if best is None else np.minimum(best, codes)
    own_codes = perms @ powers
    reps_mask = best == own_codes  # a permutation is kept iff already minimal
    reps = perms[reps_mask]

    out = []
    for row in reps:
        sigma = tuple(int(x) for x in row)
        if not _is_connected_sigma(sigma, n_edges):
            continue
        cycles = _sigma_cycles(sigma)
        nv = len(cycles)
        vert_of = {}
        for v, cyc in enumerate(cycles):
            for d in cyc:
                vert_of[d] = v
        simple = set()
        has_cycle = False
        parent = list(range(nv))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in range(n_edges):
            a, b = find(vert_of[2 * e]), find(vert_of[2 * e + 1])
            if a == b:
                has_cycle = True
            else:
                parent[a] = b
        is_tree = not has_cycle
        faces = np.array(
            [_subset_faces(sigma, n_edges, cilium, m) for m in range(1 << n_edges)],
            dtype=np.int64,
        )
        auts = []
        arr = np.array(sigma)
        for c in cents:
            inv = np.empty(n, dtype=np.int64)
            inv[c] = np.arange(n)
            if np.array_equal(c[arr[inv]], arr):
                edge_map = tuple(int(c[2 * k]) // 2 for k in range(n_edges))
                flip = tuple(int(c[2 * k]) % 2 for k in range(n_edges))
                auts.append((edge_map, flip))
        out.append(
            SigmaClass(
                n_edges,
                cilium,
                sigma,
                auts,
                nv,
                is_tree,
                faces,
                _cut_edges(sigma, n_edges),
            )
        )
    _SIGMA_CACHE[(n_edges, cilium)] = out
    return out


@dataclass
class LabelTables:
    """Per-model vectorized labeling data for E-edge maps."""

    labels: tuple[str, ...]
    assignments: np.ndarray  # (M, E) label indices
    cost: np.ndarray  # (M,) 3*mono + 2*bi
    masks: np.ndarray  # (M, 4) submap edge-subset mask per color
    edge_cost: np.ndarray  # (L,) cost per label
    label_colors_bits: np.ndarray  # (L,) 4-bit color membership


def label_tables(labels: Sequence[str], n_edges: int) -> LabelTables:
    labels = tuple(labels)
    L = len(labels)
    edge_cost = np.array([3 if len(lab) == 1 else 2 for lab in labels], dtype=np.int64)
    bits = np.array(
        [sum(1 << (c - 1) for c in label_colors(lab)) for lab in labels],
        dtype=np.int64,
    )
    if n_edges == 0:
        assignments = np.zeros((1, 0), dtype=np.int64)
        return LabelTables(
            labels,
            assignments,
            np.zeros(1, dtype=np.int64),
            np.zeros((1, 4), dtype=np.int64),
            edge_cost,
            bits,
        )
    grids = np.meshgrid(*([np.arange(L)] * n_edges), indexing="ij")
    assignments = np.stack([g.ravel() for g in grids], axis=1)
    cost = edge_cost[assignments].sum(axis=1)
    masks = np.zeros((assignments.shape[0], 4), dtype=np.int64)
    for i in range(4):
        member = (bits[assignments] >> i) & 1  # (M, E)
        masks[:, i] = (member << np.arange(n_edges)).sum(axis=1)
    return LabelTables(labels, assignments, cost, masks, edge_cost, bits)


def omega_vector(cls: SigmaClass, tables: LabelTables) -> np.ndarray:
    """Omega of every labeling of one sigma class, as a numpy vector."""
    F = cls.faces_by_mask
    total = tables.cost.copy()
    for i in range(4):
        total -= F[tables.masks[:, i]]
    return total


def label_orbit_reps(cls: SigmaClass, tables: LabelTables) -> np.ndarray:
    """Indices of labelings minimal in their automorphism orbit."""
    M, E = tables.assignments.shape
    if E == 0 or len(cls.aut_edge_actions) <= 1:
        return np.arange(M)
    L = len(tables.labels)
    codes = tables.assignments @ (L ** np.arange(E, dtype=np.int64))
    best = codes.copy()
    for edge_map, _flip in cls.aut_edge_actions:
        # labeling pulled back along the automorphism: new[edge_map[k]] = old[k]
        permuted = np.empty_like(tables.assignments)
        permuted[:, list(edge_map)] = tables.assignments
        best = np.minimum(best, permuted @ (L ** np.arange(E, dtype=np.int64)))
    return np.nonzero(best == codes)[0]


def enumerate_maps(
    model: str,
    max_edges: int,
    cilia: int = 0,
    dedup: bool = True,
    budget: int = 5,
) -> Iterator[StrandedMap]:
    """Stream all connected maps with 0..max_edges labeled edges.

    With ``dedup`` one representative per isomorphism class of labeled maps
    is produced; otherwise every labeling of every sigma class.
    """
    if max_edges > budget:
        raise ValueError(f"edge budget exceeded ({max_edges} > {budget})")
    if cilia not in (0, 1):
        raise ValueError("cilia must be 0 or 1")
    labels = model_labels(model)
    for E in range(max_edges + 1):
        tables = label_tables(labels, E)
        for cls in sigma_classes(E, cilium=bool(cilia)):
            if dedup:
                rows = label_orbit_reps(cls, tables)
            else:
                rows = np.arange(tables.assignments.shape[0])
            for r in rows:
                lab = tuple(labels[i] for i in tables.assignments[r])
                yield cls.to_map(lab)
