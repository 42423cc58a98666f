import random
from itertools import combinations, product
from math import comb

import pytest

from cutcover.cover import CutCover, InvalidCertificateError, charset, popcount, verify_cover
from cutcover.digraph import Digraph, Graph
from cutcover.solver import solve
from cutcover.symmetric import (SetFamilyLevel, coloring_from_cover, cover_from_coloring,
                                normalize_symmetric_cover, symmetrize)

from conftest import all_graphs, brute_colorable, is_connected

TRIANGLE = symmetrize(Graph.make(3, [(0, 1), (1, 2), (0, 2)]))
K4 = symmetrize(Graph.make(4, combinations(range(4), 2)))


def cover(k, *sets):
    return CutCover(k, tuple(charset(s) for s in sets))


def is_normalized(C):
    return all(popcount(s) == C.k // 2 for s in C.sets)


def test_symmetrize_counts():
    assert symmetrize(Graph.make(2, [(0, 1)])).num_arcs == 2
    assert TRIANGLE.num_arcs == 6 and TRIANGLE.is_symmetric
    assert symmetrize(Graph.make(3, [(0, 1), (1, 2)])).num_arcs == 4


def test_set_family_level():
    lv = SetFamilyLevel(4, 2)
    assert len(lv.family) == 6
    for C in lv.family:
        down, up = lv.candidates(C, True), lv.candidates(C, False)
        assert len(down) == 2 and len(up) == 2
        assert all(popcount(B) == 1 and B & ~C == 0 for B in down)
        assert all(popcount(B) == 3 and C & ~B == 0 for B in up)


def test_normalize_edge_example():
    D = symmetrize(Graph.make(2, [(0, 1)]))
    N = normalize_symmetric_cover(D, cover(3, [1, 2], [3]))
    assert is_normalized(N) and verify_cover(D, N)


def test_normalize_fixed_points():
    C = cover(3, [1], [2], [3])
    assert normalize_symmetric_cover(TRIANGLE, C) == C
    C = cover(4, [1, 2], [1, 3], [2, 4])
    assert normalize_symmetric_cover(TRIANGLE, C) == C


def test_normalize_upper_middle_level_moves_down():
    N = normalize_symmetric_cover(TRIANGLE, cover(3, [1, 2], [1, 3], [2, 3]))
    assert is_normalized(N) and verify_cover(TRIANGLE, N)


def test_normalize_isolated_vertex_reset():
    D = Digraph(3, [(0, 1), (1, 0)])
    N = normalize_symmetric_cover(D, cover(4, [1, 2, 3], [4], []))
    assert is_normalized(N) and verify_cover(D, N)


def test_normalize_errors():
    with pytest.raises(ValueError, match="symmetric"):
        normalize_symmetric_cover(Digraph(2, [(0, 1)]), cover(1, [1], []))
    with pytest.raises(InvalidCertificateError):
        normalize_symmetric_cover(TRIANGLE, cover(3, [1], [1], [2]))


def test_normalize_random_covers():
    rng = random.Random(17)
    done = 0
    for _ in range(400):
        n = rng.randint(2, 7)
        G = Graph.make(n, [e for e in combinations(range(n), 2) if rng.random() < 0.4])
        D = symmetrize(G)
        k = rng.randint(2, 6)
        sets = tuple(rng.randrange(1 << k) for _ in range(n))
        C = CutCover(k, sets)
        if not verify_cover(D, C):
            continue
        N = normalize_symmetric_cover(D, C)
        assert is_normalized(N) and verify_cover(D, N)
        done += 1
    assert done > 50


def test_coloring_round_trip():
    C = cover(3, [1], [2], [3])
    f = coloring_from_cover(C)
    assert len(set(f)) == 3
    assert cover_from_coloring(TRIANGLE, f, 3) == C
    with pytest.raises(ValueError, match="normalised"):
        coloring_from_cover(cover(3, [1, 2, 3], [1], [2]))


def test_cover_from_coloring_k4():
    for f in [(0, 1, 2, 3), (5, 3, 1, 0), (10, 20, 30, 40)]:
        C = cover_from_coloring(K4, f, 4)
        assert verify_cover(K4, C) and is_normalized(C)


def test_cover_from_coloring_rejects():
    with pytest.raises(ValueError, match="exceed"):
        cover_from_coloring(K4, (0, 1, 2, 3), 3)
    with pytest.raises(ValueError, match="proper"):
        cover_from_coloring(TRIANGLE, (0, 0, 1), 3)
    with pytest.raises(ValueError):
        cover_from_coloring(TRIANGLE, (0, 1), 3)


def test_color_classes_preserved():
    rng = random.Random(5)
    for _ in range(200):
        n = rng.randint(1, 6)
        G = Graph.make(n, [e for e in combinations(range(n), 2) if rng.random() < 0.5])
        D = symmetrize(G)
        f = tuple(rng.randrange(6) for _ in range(n))
        if any(f[u] == f[v] for u, v in G.edges):
            continue
        g = coloring_from_cover(cover_from_coloring(D, f, 4))
        assert all((f[u] == f[v]) == (g[u] == g[v]) for u in range(n) for v in range(n))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_equivalence_with_coloring(n):
    m = comb(3, 1)
    for G in all_graphs(n):
        D = symmetrize(G)
        res = solve(D, 3)
        assert res.sat == brute_colorable(G, m)
        if res.sat:
            N = normalize_symmetric_cover(D, res.cover)
            assert is_normalized(N) and verify_cover(D, N)
            f = coloring_from_cover(N)
            assert all(f[u] != f[v] for u, v in G.edges)


def test_equivalence_two_cuts_bipartite():
    for G in all_graphs(4):
        if not is_connected(G):
            continue
        D = symmetrize(G)
        assert solve(D, 2).sat == brute_colorable(G, 2)


def test_all_sets_of_a_cover_on_edge_k2():
    D = symmetrize(Graph.make(2, [(0, 1)]))
    for a, b in product(range(4), repeat=2):
        C = CutCover(2, (a, b))
        if verify_cover(D, C):
            N = normalize_symmetric_cover(D, C)
            assert is_normalized(N) and N.sets[0] != N.sets[1]
