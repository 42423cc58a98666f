"""Randomised cross-checks between independent routines, driven by a seed."""

from __future__ import annotations

import random
from itertools import product
from math import comb

from .constructive import greedy_antichain_cover, split_cover
from .cover import (cover_to_arc_coloring, cover_to_cuts, cuts_to_cover, verify_arc_coloring,
                    verify_cover, verify_cuts)
from .digraph import Digraph
from .generators import random_class_member, random_dag
from .homomorphism import hom_to_path_power, verify_hom
from .solver import decide_one_cut, decide_two_cuts, solve


def _brute_cover(D: Digraph, k: int) -> bool:
    for sets in product(range(1 << k), repeat=D.n):
        if all(sets[u] & ~sets[v] for u, v in D.arcs):
            return True
    return False


def _brute_hom(D: Digraph, n: int, d: int) -> bool:
    for lab in product(range(n), repeat=D.n):
        if all(1 <= lab[v] - lab[u] <= d for u, v in D.arcs):
            return True
    return False


def _random_digraph(rng: random.Random, n: int, p: float) -> Digraph:
    return Digraph(n, [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p])


def run_selftest(seed: int, rounds: int, verbose: bool = True) -> list[str]:
    """Return descriptions of failed checks; an empty list means all passed."""
    rng = random.Random(seed)
    failures: list[str] = []

    def check(ok: bool, what: str) -> None:
        if not ok:
            failures.append(what)
            if verbose:
                print(f"FAIL {what}")

    for r in range(rounds):
        n = rng.randint(1, 5)
        D = _random_digraph(rng, n, rng.random())
        for k in range(3):
            res = solve(D, k)
            check(res.sat == _brute_cover(D, k), f"round {r}: solve k={k} vs brute force")
            if res.sat:
                C = res.cover
                check(bool(verify_cover(D, C)), f"round {r}: solver cover invalid")
                F = cover_to_cuts(C, D)
                check(bool(verify_cuts(D, F)), f"round {r}: cut conversion")
                check(bool(verify_arc_coloring(D, cover_to_arc_coloring(D, C))), f"round {r}: arc colouring")
                check(bool(verify_cover(D, cuts_to_cover(F, D.n, D))), f"round {r}: cut round trip")
            if k == 1:
                check(decide_one_cut(D).ok == res.sat, f"round {r}: one-cut decider")
            if k == 2:
                check(decide_two_cuts(D).ok == res.sat, f"round {r}: two-cut decider")

        A = random_dag(rng.randint(1, 5), rng.random(), rng)
        hn, hd = rng.randint(1, 3), rng.randint(1, 3)
        h = hom_to_path_power(A, hn, hd)
        check(h.ok == _brute_hom(A, hn, hd), f"round {r}: hom to P_{hn}^{hd}")
        if h.ok:
            check(bool(verify_hom(A, hn, hd, h.labeling)), f"round {r}: hom labelling invalid")

        k = rng.randint(2, 5)
        B = random_dag(rng.randint(1, 12), 0.4, rng, max_indegree=comb(k, k // 2) - 1)
        check(bool(verify_cover(B, greedy_antichain_cover(B, k))), f"round {r}: greedy cover k={k}")
        E = random_class_member(rng.randint(1, 12), 2, 2, rng)
        check(bool(verify_cover(E, split_cover(E, 2, 2, 4))), f"round {r}: split cover")

    if verbose:
        print(f"selftest seed={seed} rounds={rounds}: {len(failures)} failures")
    return failures

