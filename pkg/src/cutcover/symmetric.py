"""Covers of symmetric digraphs versus colourings with M(k) colours.

In a symmetric digraph the two sets on every edge must be incomparable, so a
cover is a proper colouring by sets.  :func:`normalize_symmetric_cover` pushes
all sets onto the middle level floor(k/2) of the subset lattice, one extreme
level at a time, via an injective shadow map found as a bipartite matching.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Sequence

import networkx as nx

from .cover import CutCover, InvalidCertificateError, charset, popcount, verify_cover
from .digraph import Digraph, Graph

MAX_NORMALIZE_K = 20


@dataclass(frozen=True)
class SetFamilyLevel:
    """All s-subsets of {1..k}, with shadow candidates one level down or up."""

    k: int
    s: int

    @property
    def family(self) -> list[int]:
        return [charset(c) for c in combinations(range(1, self.k + 1), self.s)]

    def candidates(self, C: int, down: bool) -> list[int]:
        if down:
            return [C & ~(1 << a) for a in range(self.k) if C >> a & 1]
        return [C | (1 << a) for a in range(self.k) if not C >> a & 1]


def _potential(sets: Sequence[int], h: int) -> int:
    return sum(abs(popcount(s) - h) for s in sets)


def _shadow_map(level: SetFamilyLevel, used: set[int], down: bool) -> dict[int, int]:
    G = nx.Graph()
    left = [("C", C) for C in sorted(used)]
    G.add_nodes_from(left)
    for C in sorted(used):
        for B in level.candidates(C, down):
            G.add_edge(("C", C), ("B", B))
    match = nx.bipartite.hopcroft_karp_matching(G, top_nodes=left)
    out = {}
    for C in used:
        if ("C", C) not in match:
            raise AssertionError(f"no distinct representative for level {level.s}")
        out[C] = match[("C", C)][1]
    return out


def normalize_symmetric_cover(D: Digraph, C: CutCover) -> CutCover:
    """Turn a cover of a symmetric digraph into one using only floor(k/2)-sets."""
    if not D.is_symmetric:
        raise ValueError("digraph is not symmetric")
    verdict = verify_cover(D, C)
    if not verdict:
        raise InvalidCertificateError(f"invalid cover: violated at {verdict.witness}")
    k = C.k
    if k > MAX_NORMALIZE_K:
        raise ValueError(f"normalisation is limited to k <= {MAX_NORMALIZE_K}")
    h = k // 2
    rest = (1 << h) - 1
    sets = [s if D.out_neighbors(v) or D.in_neighbors(v) else rest for v, s in enumerate(C.sets)]
    pot = _potential(sets, h)
    while pot:
        sizes = [popcount(s) for s in sets]
        top, low = max(sizes), min(sizes)
        if top > h:
            s, down = top, True
        else:
            s, down = low, False
        used = {x for x in sets if popcount(x) == s}
        shadow = _shadow_map(SetFamilyLevel(k, s), used, down)
        sets = [shadow.get(x, x) for x in sets]
        new = _potential(sets, h)
        assert new < pot
        assert verify_cover(D, CutCover(k, tuple(sets)))
        pot = new
    return CutCover(k, tuple(sets))


def coloring_from_cover(C: CutCover) -> tuple[int, ...]:
    """Colour of a vertex = rank of its set among the floor(k/2)-subsets."""
    h = C.k // 2
    rank = {charset(c): i for i, c in enumerate(combinations(range(1, C.k + 1), h))}
    try:
        return tuple(rank[s] for s in C.sets)
    except KeyError:
        raise ValueError(f"cover is not normalised: some set has size != {h}") from None


def cover_from_coloring(D: Digraph, f: Sequence, k: int) -> CutCover:
    """Assign the i-th floor(k/2)-set to the i-th smallest colour of ``f``."""
    if len(f) != D.n:
        raise ValueError(f"{len(f)} colours for {D.n} vertices")
    for u, v in D.arcs:
        if f[u] == f[v]:
            raise ValueError(f"colouring is not proper on arc {u}->{v}")
    colors = sorted(set(f))
    m = comb(k, k // 2)
    if len(colors) > m:
        raise ValueError(f"{len(colors)} colours exceed M({k}) = {m}")
    sets = [charset(c) for c in combinations(range(1, k + 1), k // 2)]
    index = {c: i for i, c in enumerate(colors)}
    return CutCover(k, tuple(sets[index[c]] for c in f))


def symmetrize(G: Graph) -> Digraph:
    return Digraph(G.n, [a for u, v in G.edges for a in ((u, v), (v, u))])
