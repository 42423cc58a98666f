"""Explicit digraph constructions, each returned with its structural metadata."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Any, Optional

from .cover import CutCover
from .digraph import Digraph, is_acyclic

DEFAULT_SIZE_LIMIT = 10**6


class SizeLimitError(ValueError):
    def __init__(self, predicted: int, limit: int):
        self.predicted = predicted
        super().__init__(f"construction would have {predicted} vertices, limit is {limit}")


@dataclass(frozen=True)
class GeneratedInstance:
    digraph: Digraph
    tag: str
    params: dict
    labels: Optional[tuple[Any, ...]] = None
    extra: dict = field(default_factory=dict)

    def sidecar(self) -> dict:
        return {"tag": self.tag, "params": self.params,
                "labels": list(self.labels) if self.labels is not None else None}

    def sidecar_json(self) -> str:
        return json.dumps(self.sidecar())


def path_power_arc_count(n: int, d: int) -> int:
    return sum(n - i for i in range(1, min(d, n - 1) + 1))


def gen_path_power(n: int, d: int) -> GeneratedInstance:
    """P_n^d: arc ij iff 1 <= j - i <= d, on vertices 0..n-1."""
    if n < 1 or d < 0:
        raise ValueError("need n >= 1 and d >= 0")
    arcs = [(i, j) for i in range(n) for j in range(i + 1, min(n, i + d + 1))]
    D = Digraph(n, arcs)
    assert D.num_arcs == path_power_arc_count(n, d)
    return GeneratedInstance(D, "path-power", {"n": n, "d": d}, tuple(range(n)))


def gen_transitive_tournament(n: int) -> GeneratedInstance:
    inst = gen_path_power(n, max(n - 1, 0))
    return GeneratedInstance(inst.digraph, "tournament", {"n": n}, inst.labels)


def _block_size(k: int) -> int:
    if k < 2:
        raise ValueError("block path needs k >= 2")
    return 1 << (k - 2)


def gen_block_path(k: int, l: int) -> GeneratedInstance:
    """l blocks of 2^k/4 vertices; arcs inside a block go forward, and every
    vertex of block r points to every vertex of block r+1.

    Vertex (r, i) with 1 <= r <= l, 1 <= i <= b has index (r-1)*b + (i-1).
    """
    b = _block_size(k)
    if l < 1:
        raise ValueError("need l >= 1")
    arcs = []
    for r in range(l):
        base = r * b
        arcs.extend((base + i, base + j) for i in range(b) for j in range(i + 1, b))
        if r + 1 < l:
            arcs.extend((base + i, base + b + j) for i in range(b) for j in range(b))
    D = Digraph(l * b, arcs)
    labels = tuple((r + 1, i + 1) for r in range(l) for i in range(b))
    assert D.num_arcs == l * b * (b - 1) // 2 + (l - 1) * b * b
    return GeneratedInstance(D, "block-path", {"k": k, "l": l}, labels)


def gen_block_path_prime(k: int, l: int) -> GeneratedInstance:
    """The block path plus one vertex v wired from every vertex of block
    floor(l/2) and into every vertex of block floor(l/2)+1."""
    if l < 2:
        raise ValueError("primed block path needs l >= 2")
    base = gen_block_path(k, l)
    b = _block_size(k)
    v = l * b
    mid = l // 2  # 1-based block index
    extra = [((mid - 1) * b + i, v) for i in range(b)] + [(v, mid * b + i) for i in range(b)]
    D = base.digraph.with_arcs(add=extra, n=v + 1)
    return GeneratedInstance(D, "block-path-prime", {"k": k, "l": l}, base.labels + ("v",))


def block_path_cover(k: int, l: int) -> CutCover:
    """The alternating cover of the block path.

    Block r gets marker element 1 (odd r) or 2 (even r); inside a block the
    subsets of {3..k} are listed largest first, so no earlier set is contained
    in a later one.  For k = 3 this is {1,3},{1},{2,3},{2},...
    """
    b = _block_size(k)
    rest = [s << 2 for s in range(b)]
    rest.sort(key=lambda s: (-bin(s).count("1"), s))
    sets = []
    for r in range(l):
        marker = 1 if r % 2 == 0 else 2
        sets.extend(marker | s for s in rest)
    return CutCover(k, tuple(sets))


def layered_size(d: int, k: int) -> int:
    top = 1 << k
    return min(d, top) + 1 + sum(d ** (i - d) for i in range(d + 1, top + 1))


def gen_layered_indegree(d: int, k: int, size_limit: int = DEFAULT_SIZE_LIMIT) -> GeneratedInstance:
    """Layers V_0..V_{2^k}: a transitive tournament v_0..v_d, then for each
    v in V_{i-1} and u in N^-(v) a vertex w_vu with in-neighbourhood
    {v} ∪ N^-(v) minus u.  Labels are layer indices."""
    if d < 1 or k < 1:
        raise ValueError("need d >= 1 and k >= 1")
    predicted = layered_size(d, k)
    if predicted > size_limit:
        raise SizeLimitError(predicted, size_limit)
    top = 1 << k
    innbr: list[tuple[int, ...]] = []
    layer: list[int] = []
    for i in range(min(d, top) + 1):
        innbr.append(tuple(range(i)))
        layer.append(i)
    prev = [min(d, top)]
    for i in range(d + 1, top + 1):
        cur = []
        for v in prev:
            for u in innbr[v]:
                w = len(innbr)
                innbr.append(tuple(sorted((set(innbr[v]) - {u}) | {v})))
                layer.append(i)
                cur.append(w)
        prev = cur
    arcs = [(u, w) for w in range(len(innbr)) for u in innbr[w]]
    D = Digraph(len(innbr), arcs)
    assert D.n == predicted
    return GeneratedInstance(D, "layered", {"d": d, "k": k}, tuple(layer))


def join(Dminus: Digraph, Dplus: Digraph) -> GeneratedInstance:
    """Disjoint union of the two digraphs plus every arc from the first into the second."""
    for D in (Dminus, Dplus):
        if not is_acyclic(D):
            raise ValueError("join operands must be acyclic")
    off = Dminus.n
    arcs = list(Dminus.arcs) + [(u + off, v + off) for u, v in Dplus.arcs]
    arcs += [(u, v + off) for u in range(Dminus.n) for v in range(Dplus.n)]
    labels = tuple(["-"] * Dminus.n + ["+"] * Dplus.n)
    return GeneratedInstance(Digraph(off + Dplus.n, arcs), "join", {"n_minus": Dminus.n, "n_plus": Dplus.n}, labels)


# -- random instances ----------------------------------------------------------------


def random_dag(n: int, p: float, rng: random.Random, max_indegree: Optional[int] = None) -> Digraph:
    """Random DAG on a random vertex order, each forward pair kept with probability p."""
    perm = list(range(n))
    rng.shuffle(perm)
    arcs = []
    indeg = [0] * n
    for j in range(n):
        for i in range(j):
            if max_indegree is not None and indeg[j] >= max_indegree:
                break
            if rng.random() < p:
                arcs.append((perm[i], perm[j]))
                indeg[j] += 1
    return Digraph(n, arcs)


def random_class_member(n: int, dminus: int, dplus: int, rng: random.Random, tries: int = 4) -> Digraph:
    """Random acyclic digraph in which every vertex has indegree <= dminus or
    outdegree <= dplus.

    Each vertex is tagged as in-bounded or out-bounded; random forward pairs are
    added while both tags stay satisfied.
    """
    if dminus < 0 and dplus < 0:
        if n:
            raise ValueError("no digraph with a vertex has both degree bounds at -1")
        return Digraph(0)
    perm = list(range(n))
    rng.shuffle(perm)
    side = [rng.random() < 0.5 for _ in range(n)]  # True: in-bounded
    if dminus < 0:
        side = [False] * n
    if dplus < 0:
        side = [True] * n
    indeg = [0] * n
    outdeg = [0] * n
    arcs = set()
    for _ in range(tries * n * max(1, max(dminus, dplus, 1))):
        i, j = sorted(rng.sample(range(n), 2)) if n > 1 else (0, 0)
        if i == j or (i, j) in arcs:
            continue
        if side[j] and indeg[j] >= dminus:
            continue
        if not side[i] and outdeg[i] >= dplus:
            continue
        arcs.add((i, j))
        indeg[j] += 1
        outdeg[i] += 1
    return Digraph(n, [(perm[i], perm[j]) for i, j in arcs])
