"""Independent brute-force oracles shared by the test modules."""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import combinations, permutations, product

import pytest

from cutcover.digraph import Digraph, Graph


def all_pairs(n: int) -> list[tuple[int, int]]:
    return list(permutations(range(n), 2))


def digraph_from_mask(n: int, mask: int) -> Digraph:
    return Digraph(n, [a for i, a in enumerate(all_pairs(n)) if mask >> i & 1])


def all_digraphs(n: int):
    """Every digraph on n vertices without self-loops, with its arc mask."""
    for mask in range(1 << (n * (n - 1))):
        yield mask, digraph_from_mask(n, mask)


@lru_cache(maxsize=None)
def cover_witnesses(n: int, k: int) -> tuple:
    """Entry m is a k-cut cover (tuple of set masks) of the digraph with arc
    mask m, or None.

    Every assignment of subsets is enumerated once; the arcs it satisfies
    form a mask, and a digraph is covered iff its mask lies below one of them.
    """
    pairs = all_pairs(n)
    size = 1 << len(pairs)
    wit = [None] * size
    for sets in product(range(1 << k), repeat=n):
        m = 0
        for i, (u, v) in enumerate(pairs):
            if sets[u] & ~sets[v]:
                m |= 1 << i
        if wit[m] is None:
            wit[m] = sets
    for bit in range(len(pairs)):
        b = 1 << bit
        for m in range(size):
            if not m & b and wit[m] is None and wit[m | b] is not None:
                wit[m] = wit[m | b]
    return tuple(wit)


def coverable_masks(n: int, k: int) -> tuple[bool, ...]:
    return tuple(w is not None for w in cover_witnesses(n, k))


def brute_cover(D: Digraph, k: int) -> bool:
    return any(all(s[u] & ~s[v] for u, v in D.arcs) for s in product(range(1 << k), repeat=D.n))


def brute_hom(D: Digraph, n: int, d: int) -> bool:
    return any(all(1 <= l[v] - l[u] <= d for u, v in D.arcs) for l in product(range(n), repeat=D.n))


def brute_colorable(G: Graph, c: int) -> bool:
    return any(all(f[u] != f[v] for u, v in G.edges) for f in product(range(c), repeat=G.n))


def is_connected(G: Graph) -> bool:
    if G.n == 0:
        return True
    adj = {v: set() for v in range(G.n)}
    for u, v in G.edges:
        adj[u].add(v)
        adj[v].add(u)
    seen, stack = {0}, [0]
    while stack:
        for w in adj[stack.pop()] - seen:
            seen.add(w)
            stack.append(w)
    return len(seen) == G.n


def all_graphs(n: int):
    edges = list(combinations(range(n), 2))
    for mask in range(1 << len(edges)):
        yield Graph.make(n, [e for i, e in enumerate(edges) if mask >> i & 1])


def random_antisymmetric(rng: random.Random, n: int, p: float) -> Digraph:
    arcs = []
    for u, v in combinations(range(n), 2):
        r = rng.random()
        if r < p / 2:
            arcs.append((u, v))
        elif r < p:
            arcs.append((v, u))
    return Digraph(n, arcs)


@pytest.fixture
def rng():
    return random.Random(20240611)
