"""Polynomial cover constructions for acyclic digraphs of bounded degree.

All of them colour the vertices properly with pairwise incomparable sets, so
``C(u) != C(v)`` on an arc already gives ``C(u) ⊄ C(v)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

from .cover import CutCover, charset
from .digraph import Digraph, is_acyclic


class ClassMembershipError(ValueError):
    pass


@dataclass(frozen=True)
class DegreeClassSpec:
    """The class of acyclic digraphs where every vertex has indegree <= dminus
    or outdegree <= dplus."""

    dminus: int
    dplus: int

    def __post_init__(self):
        if self.dminus < -1 or self.dplus < -1:
            raise ValueError("degree bounds must be >= -1")

    def split(self, D: Digraph) -> tuple[list[bool], list[int]]:
        return split_vertices(D, self.dminus, self.dplus)

    def contains(self, D: Digraph) -> bool:
        if not is_acyclic(D):
            return False
        try:
            self.split(D)
        except ClassMembershipError:
            return False
        return True


def antichain(k: int) -> list[int]:
    """The floor(k/2)-subsets of {1..k} as masks, lexicographic."""
    return [charset(c) for c in combinations(range(1, k + 1), k // 2)]


def _topo(D: Digraph) -> tuple[int, ...]:
    res = is_acyclic(D)
    if not res:
        raise ValueError(f"input has a directed cycle {res.cycle}")
    return res.order


def split_vertices(D: Digraph, dminus: int, dplus: int) -> tuple[list[bool], list[int]]:
    """``in_minus[v]`` is True iff indegree(v) <= dminus.

    Raises :class:`ClassMembershipError` when some other vertex has outdegree
    above ``dplus``.  The second value lists the vertices of the minus side.
    """
    in_minus = [D.indegree(v) <= dminus for v in range(D.n)]
    for v in range(D.n):
        if not in_minus[v] and D.outdegree(v) > dplus:
            raise ClassMembershipError(
                f"vertex {v} has indegree {D.indegree(v)} > {dminus} and outdegree {D.outdegree(v)} > {dplus}")
    return in_minus, [v for v in range(D.n) if in_minus[v]]


def greedy_antichain_cover(D: Digraph, k: int) -> CutCover:
    """Greedy colouring in topological order with the middle layer of 2^{1..k}."""
    order = _topo(D)
    sets = antichain(k)
    for v in range(D.n):
        if D.indegree(v) > len(sets) - 1:
            raise ValueError(f"vertex {v} has indegree {D.indegree(v)} > M({k}) - 1 = {len(sets) - 1}")
    cover = [0] * D.n
    for v in order:
        used = {cover[u] for u in D.in_neighbors(v)}
        cover[v] = next(s for s in sets if s not in used)
    return CutCover(k, tuple(cover))


def split_cover(D: Digraph, dminus: int, dplus: int, k: int) -> CutCover:
    """Colour the low-indegree side with dminus+1 colours and the rest with
    dplus+1 further colours, then map colours onto the middle layer."""
    DegreeClassSpec(dminus, dplus)
    if dminus + dplus > comb(k, k // 2) - 2:
        raise ValueError(f"{dminus} + {dplus} exceeds M({k}) - 2 = {comb(k, k // 2) - 2}")
    order = _topo(D)
    in_minus, _ = split_vertices(D, dminus, dplus)
    color = [-1] * D.n
    for v in order:
        if in_minus[v]:
            used = {color[u] for u in D.in_neighbors(v) if in_minus[u]}
            color[v] = next(c for c in range(dminus + 1) if c not in used)
    for v in reversed(order):
        if not in_minus[v]:
            used = {color[w] for w in D.out_neighbors(v) if not in_minus[w]}
            color[v] = next(c for c in range(dminus + 1, dminus + dplus + 2) if c not in used)
    sets = antichain(k)
    return CutCover(k, tuple(sets[c] for c in color))


_PAIRS_3 = (0b011, 0b101, 0b110)  # {1,2}, {1,3}, {2,3}


def cover_class_21(D: Digraph) -> CutCover:
    """3-cut cover of a digraph where every vertex has indegree <= 2 or outdegree <= 1."""
    order = _topo(D)
    in_minus, _ = split_vertices(D, 2, 1)
    C = [0] * D.n
    for v in order:
        if in_minus[v]:
            used = {C[u] for u in D.in_neighbors(v) if in_minus[u]}
            C[v] = next(s for s in _PAIRS_3 if s not in used)
    for u in reversed(order):
        if in_minus[u]:
            continue
        outs = D.out_neighbors(u)
        if not outs:
            C[u] = 0b001
        elif in_minus[outs[0]]:
            C[u] = 0b111 & ~C[outs[0]]
        else:
            C[u] = next(s for s in (0b001, 0b010, 0b100) if s != C[outs[0]])
    return CutCover(3, tuple(C))


_PAIRS_4 = tuple(charset(c) for c in combinations(range(1, 5), 2))


def cover_class_52(D: Digraph) -> CutCover:
    """4-cut cover of a digraph where every vertex has indegree <= 5 or outdegree <= 2.

    The minus side takes 2-sets.  A plus-side vertex whose first minus-side
    out-neighbour gets B carries the complement of B as a temporary colour,
    which its later minus-side out-neighbours must avoid; so the sets of its
    out-neighbours never cover all of {1,2,3,4} and a free singleton remains.
    """
    order = _topo(D)
    in_minus, _ = split_vertices(D, 5, 2)
    C = [0] * D.n
    temp = [0] * D.n
    for v in order:
        if not in_minus[v]:
            continue
        used = {C[u] if in_minus[u] else temp[u] for u in D.in_neighbors(v)}
        C[v] = next(s for s in _PAIRS_4 if s not in used)
        for u in D.in_neighbors(v):
            if not in_minus[u] and not temp[u]:
                temp[u] = 0b1111 & ~C[v]
    for u in reversed(order):
        if in_minus[u]:
            continue
        taken = 0
        for w in D.out_neighbors(u):
            taken |= C[w]
        free = 0b1111 & ~taken
        assert free, f"out-neighbours of {u} use every element"
        C[u] = free & -free
        assert C[u] != temp[u]
    return CutCover(4, tuple(C))


_MINUS_33 = (0b1001, 0b1010, 0b1100)  # {1,4}, {2,4}, {3,4}; fallback {1,2,3}
_PLUS_33 = (0b0011, 0b0110, 0b0101)   # {1,2}, {2,3}, {1,3}; fallback {4}


def cover_class_33(D: Digraph) -> CutCover:
    """4-cut cover of a digraph where every vertex has indegree <= 3 or outdegree <= 3."""
    order = _topo(D)
    in_minus, _ = split_vertices(D, 3, 3)
    C = [0] * D.n
    for v in order:
        if in_minus[v]:
            used = {C[u] for u in D.in_neighbors(v) if in_minus[u]}
            C[v] = next((s for s in _MINUS_33 if s not in used), 0b0111)
            assert C[v] != 0b0111 or sum(in_minus[u] for u in D.in_neighbors(v)) == 3
    for u in reversed(order):
        if not in_minus[u]:
            used = {C[w] for w in D.out_neighbors(u) if not in_minus[w]}
            C[u] = next((s for s in _PLUS_33 if s not in used), 0b1000)
            assert C[u] != 0b1000 or sum(not in_minus[w] for w in D.out_neighbors(u)) == 3
    return CutCover(4, tuple(C))
