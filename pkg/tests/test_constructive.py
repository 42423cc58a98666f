import random
import time
from math import comb

import pytest

from cutcover.constructive import (ClassMembershipError, DegreeClassSpec, antichain, cover_class_21,
                                   cover_class_33, cover_class_52, greedy_antichain_cover, split_cover,
                                   split_vertices)
from cutcover.cover import popcount, verify_cover
from cutcover.digraph import Digraph
from cutcover.generators import gen_path_power, random_class_member, random_dag

EX = Digraph(5, [(0, 1), (1, 2), (1, 3), (2, 3), (3, 4)])
CLASS_ALGOS = [((2, 1), cover_class_21, 3), ((5, 2), cover_class_52, 4), ((3, 3), cover_class_33, 4)]


def test_antichain():
    assert antichain(4) == [0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100]
    assert len(antichain(7)) == comb(7, 3)


def test_greedy_examples():
    k = 3
    D = gen_path_power(20, comb(k, k // 2) - 1).digraph
    C = greedy_antichain_cover(D, k)
    assert verify_cover(D, C) and all(popcount(s) == 1 for s in C.sets)
    assert greedy_antichain_cover(Digraph(3), 1).sets == (0, 0, 0)
    D = random_dag(50, 0.5, random.Random(0), max_indegree=5)
    assert verify_cover(D, greedy_antichain_cover(D, 4))


def test_greedy_errors():
    with pytest.raises(ValueError, match="vertex 3"):
        greedy_antichain_cover(gen_path_power(5, 3).digraph, 3)
    with pytest.raises(ValueError, match="cycle"):
        greedy_antichain_cover(Digraph(2, [(0, 1), (1, 0)]), 3)


def test_greedy_random_1000():
    rng = random.Random(100)
    for _ in range(1000):
        k = rng.randint(1, 5)
        D = random_dag(rng.randint(0, 40), rng.random(), rng, max_indegree=comb(k, k // 2) - 1)
        C = greedy_antichain_cover(D, k)
        assert verify_cover(D, C)
        assert all(popcount(s) == k // 2 for s in C.sets)


def test_split_examples():
    K = Digraph(5, [(u, v) for u in range(2) for v in range(2, 5)])
    assert verify_cover(K, split_cover(K, 0, 0, 2))
    assert verify_cover(EX, split_cover(EX, 2, -1, 3))
    D = random_class_member(30, 2, 2, random.Random(1))
    assert verify_cover(D, split_cover(D, 2, 2, 4))


def test_split_errors():
    with pytest.raises(ValueError, match="exceeds"):
        split_cover(EX, 2, 1, 3)
    with pytest.raises(ClassMembershipError):
        split_cover(gen_path_power(6, 3).digraph, 1, 1, 4)


def test_split_random_1000():
    rng = random.Random(200)
    for _ in range(1000):
        k = rng.randint(2, 5)
        budget = comb(k, k // 2) - 2
        a = rng.randint(-1, budget + 1)
        b = rng.randint(0 if a < 0 else -1, budget - a)
        D = random_class_member(rng.randint(0, 40), a, b, rng)
        assert verify_cover(D, split_cover(D, a, b, k))


def test_class_examples():
    assert verify_cover(EX, cover_class_21(EX))
    P = gen_path_power(5, 1).digraph
    assert verify_cover(P, cover_class_21(P))
    for algo in (cover_class_52, cover_class_33):
        assert algo(Digraph(0)).sets == ()
        assert verify_cover(Digraph(4), algo(Digraph(4)))
    P5 = gen_path_power(30, 5).digraph
    assert verify_cover(P5, cover_class_52(P5))
    P3 = gen_path_power(30, 3).digraph
    assert verify_cover(P3, cover_class_33(P3))


@pytest.mark.parametrize("cls,algo,k", CLASS_ALGOS, ids=["21", "52", "33"])
def test_class_random_1000(cls, algo, k):
    rng = random.Random(hash(cls) & 0xFFFF)
    plus_seen = 0
    for _ in range(1000):
        D = random_class_member(rng.randint(0, 60), *cls, rng)
        C = algo(D)
        assert C.k == k and verify_cover(D, C)
        in_minus, _ = split_vertices(D, *cls)
        plus_seen += not all(in_minus)
    assert plus_seen > 200


@pytest.mark.parametrize("cls,algo,k", CLASS_ALGOS, ids=["21", "52", "33"])
def test_class_membership_error(cls, algo, k):
    a, b = cls
    # a vertex with indegree a+1 and outdegree b+1
    n = a + b + 3
    hub = a + 1
    arcs = [(i, hub) for i in range(a + 1)] + [(hub, hub + 1 + j) for j in range(b + 1)]
    with pytest.raises(ClassMembershipError, match=f"vertex {hub}"):
        algo(Digraph(n, arcs))


def test_class_33_fallback_invariant():
    rng = random.Random(33)
    for _ in range(500):
        D = random_class_member(rng.randint(5, 50), 3, 3, rng)
        C = cover_class_33(D)
        in_minus, _ = split_vertices(D, 3, 3)
        for v, s in enumerate(C.sets):
            if s == 0b0111:
                assert in_minus[v] and sum(in_minus[u] for u in D.in_neighbors(v)) == 3


def test_class_52_plus_side_singletons():
    rng = random.Random(52)
    for _ in range(500):
        D = random_class_member(rng.randint(5, 50), 5, 2, rng)
        C = cover_class_52(D)
        in_minus, _ = split_vertices(D, 5, 2)
        for v, s in enumerate(C.sets):
            assert popcount(s) == (2 if in_minus[v] else 1)


def test_linear_scaling_smoke():
    rng = random.Random(7)
    small = random_class_member(2000, 3, 3, rng)
    big = random_class_member(20000, 3, 3, rng)
    t = time.perf_counter()
    cover_class_33(small)
    t_small = time.perf_counter() - t
    t = time.perf_counter()
    cover_class_33(big)
    t_big = time.perf_counter() - t
    assert t_big < 30 * max(t_small, 1e-3)


def test_degree_class_spec():
    cls = DegreeClassSpec(2, 1)
    assert cls.contains(EX)
    assert DegreeClassSpec(1, 1).contains(EX)
    assert not DegreeClassSpec(0, 0).contains(EX)
    assert not cls.contains(Digraph(2, [(0, 1), (1, 0)]))
    with pytest.raises(ValueError):
        DegreeClassSpec(-2, 0)
