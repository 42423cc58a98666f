import random
from itertools import product

import pytest

from cutcover.cover import CutCover, charset, popcount, verify_cover
from cutcover.digraph import Digraph
from cutcover.generators import gen_path_power, gen_transitive_tournament, random_dag
from cutcover.solver import (MAX_SOLVER_K, Budget, BudgetExceededError, Outcome, SolveConstraints,
                             branching_order, decide_one_cut, decide_two_cuts, min_k, solve,
                             solve_parallel)

from conftest import all_digraphs, coverable_masks, digraph_from_mask

EX = Digraph(5, [(0, 1), (1, 2), (1, 3), (2, 3), (3, 4)])


def plain_backtrack(D, k):
    """Textbook backtracking in vertex order 0..n-1 checking arcs to assigned vertices."""
    sets = [None] * D.n

    def ok(v):
        s = sets[v]
        for w in D.out_neighbors(v):
            if sets[w] is not None and not s & ~sets[w]:
                return False
        for u in D.in_neighbors(v):
            if sets[u] is not None and not sets[u] & ~s:
                return False
        return True

    def go(v):
        if v == D.n:
            return True
        for s in range(1 << k):
            sets[v] = s
            if ok(v) and go(v + 1):
                return True
        sets[v] = None
        return False

    return go(0)


def satisfies(D, C, cons):
    if not verify_cover(D, C):
        return False
    for v, fam in cons.domains.items():
        if C.sets[v] not in fam:
            return False
    for v, sizes in cons.sizes.items():
        if popcount(C.sets[v]) not in sizes:
            return False
    for a, y in cons.excluded:
        if C.sets[y] >> (a - 1) & 1:
            return False
    return all(C.sets[x] & ~C.sets[y] == 0 for x, y in cons.subset_pairs)


def test_path_power_examples():
    assert solve(gen_path_power(10, 3).digraph, 3).sat
    assert solve(gen_path_power(11, 3).digraph, 3).outcome is Outcome.UNSAT


def test_no_arcs_k0():
    res = solve(Digraph(4), 0)
    assert res.sat and res.cover.sets == (0, 0, 0, 0)


def test_tt5_not_two_cuts():
    assert solve(gen_transitive_tournament(5).digraph, 2).outcome is Outcome.UNSAT


def test_min_k_examples():
    assert min_k(Digraph(2, [(0, 1)]), 5) == 1
    assert min_k(EX, 5) == 3
    assert min_k(gen_transitive_tournament(5).digraph, 5) == 3
    assert min_k(gen_transitive_tournament(5).digraph, 2) is None


def test_min_k_budget():
    with pytest.raises(BudgetExceededError):
        min_k(gen_path_power(11, 3).digraph, 3, Budget(nodes=3))


def test_one_cut_examples():
    assert decide_one_cut(Digraph(2, [(0, 1)])).cut == {0}
    r = decide_one_cut(Digraph(3, [(0, 1), (1, 2)]))
    assert not r and r.witness == 1
    K = Digraph(5, [(u, v) for u in range(2) for v in range(2, 5)])
    assert decide_one_cut(K)


def test_two_cut_examples():
    r = decide_two_cuts(EX)
    assert not r and set(r.odd_cycle) == {1, 2, 3}
    P = gen_path_power(4, 1).digraph
    r = decide_two_cuts(P)
    assert r and verify_cover(P, r.cover)
    assert r.cover.sets == (0b11, 0b01, 0b10, 0)
    assert decide_two_cuts(Digraph(2, [(0, 1)]))


def test_odd_cycle_is_a_cycle():
    rng = random.Random(3)
    for _ in range(300):
        D = digraph_from_mask(6, rng.getrandbits(30))
        r = decide_two_cuts(D)
        if r.odd_cycle:
            c = r.odd_cycle
            assert len(c) % 2 == 1 and len(set(c)) == len(c)
            for i in range(len(c)):
                u, v = c[i], c[(i + 1) % len(c)]
                assert D.has_arc(u, v) or D.has_arc(v, u)
                assert D.indegree(u) and D.outdegree(u)
        else:
            assert verify_cover(D, r.cover)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_agrees_with_enumeration_exhaustive(n):
    for k in range(0, 4):
        oracle = coverable_masks(n, k)
        for mask, D in all_digraphs(n):
            res = solve(D, k)
            assert res.sat == oracle[mask], (n, k, D.arcs)
            if res.sat:
                assert verify_cover(D, res.cover)
            if k == 1:
                assert bool(decide_one_cut(D)) == res.sat
            if k == 2:
                r = decide_two_cuts(D)
                assert bool(r) == res.sat
                if r:
                    assert verify_cover(D, r.cover)


def test_symmetry_breaking_never_changes_answer():
    for k in (2, 3):
        oracle = coverable_masks(4, k)
        for mask, D in all_digraphs(4):
            assert solve(D, k, symmetry=False).sat == oracle[mask]


def test_independent_backtracker_medium():
    rng = random.Random(11)
    for _ in range(80):
        n = rng.randint(8, 11)
        if rng.random() < 0.5:
            D = random_dag(n, rng.uniform(0.2, 0.7), rng)
        else:
            D = Digraph(n, [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < 0.15])
        k = rng.randint(2, 3)
        res = solve(D, k)
        assert res.sat == plain_backtrack(D, k)
        if res.sat:
            assert verify_cover(D, res.cover)


def test_constraints_match_constrained_brute_force():
    rng = random.Random(2)
    for _ in range(400):
        n = rng.randint(1, 4)
        D = digraph_from_mask(n, rng.getrandbits(n * (n - 1)))
        k = rng.randint(1, 3)
        cons = SolveConstraints()
        for v in range(n):
            r = rng.random()
            if r < 0.2:
                cons.pin(v, [a for a in range(1, k + 1) if rng.random() < 0.5])
            elif r < 0.35:
                cons.restrict(v, rng.sample(range(1 << k), rng.randint(1, 1 << k)))
            elif r < 0.5:
                cons.allow_sizes(v, rng.sample(range(k + 1), rng.randint(1, k + 1)))
        if rng.random() < 0.4:
            cons.exclude(rng.randint(1, k), rng.randrange(n))
        if n >= 2 and rng.random() < 0.4:
            cons.require_subset(*rng.sample(range(n), 2))
        res = solve(D, k, cons)
        brute = any(satisfies(D, CutCover(k, s), cons) for s in product(range(1 << k), repeat=n))
        assert res.sat == brute
        if res.sat:
            assert satisfies(D, res.cover, cons)


def test_empty_domain_is_unsat():
    cons = SolveConstraints().restrict(0, [])
    assert solve(Digraph(1), 2, cons).outcome is Outcome.UNSAT
    cons = SolveConstraints().pin(0, [1]).pin(0, [2])
    assert solve(Digraph(1), 2, cons).outcome is Outcome.UNSAT


def test_bad_arguments():
    with pytest.raises(ValueError):
        solve(Digraph(1), MAX_SOLVER_K + 1)
    with pytest.raises(ValueError):
        solve(Digraph(1), 2, SolveConstraints().pin(3, [1]))
    with pytest.raises(ValueError):
        solve(Digraph(1), 2, SolveConstraints().exclude(3, 0))


def test_budget_is_not_unsat():
    D = gen_path_power(11, 3).digraph
    res = solve(D, 3, budget=Budget(nodes=5))
    assert res.outcome is Outcome.BUDGET_EXCEEDED and res.cover is None
    res = solve(gen_path_power(17, 10).digraph, 4, budget=Budget(seconds=0.05))
    assert res.outcome is Outcome.BUDGET_EXCEEDED


def test_deterministic():
    D = random_dag(30, 0.2, random.Random(1))
    a, b = solve(D, 3), solve(D, 3)
    assert a.cover == b.cover and a.nodes == b.nodes
    assert a.stats()["outcome"] == a.outcome.value


def test_branching_order():
    D = random_dag(20, 0.3, random.Random(4))
    order = branching_order(D)
    pos = {v: i for i, v in enumerate(order)}
    assert sorted(order) == list(range(20))
    assert all(pos[u] < pos[v] for u, v in D.arcs)
    C = Digraph(3, [(0, 1), (1, 2), (2, 0), (0, 2)])
    assert branching_order(C)[0] in (0, 2)


def test_cyclic_inputs():
    C3 = Digraph(3, [(0, 1), (1, 2), (2, 0)])
    # consecutive arcs around an odd directed cycle need three colours
    assert min_k(C3, 4) == 3
    assert min_k(Digraph(4, [(0, 1), (1, 2), (2, 3), (3, 0)]), 4) == 2
    K3 = Digraph(3, [(u, v) for u in range(3) for v in range(3) if u != v])
    assert min_k(K3, 4) == 3


def test_parallel_matches_sequential_and_is_job_independent():
    rng = random.Random(9)
    for _ in range(6):
        D = random_dag(14, 0.5, rng)
        seq = solve(D, 3)
        p1 = solve_parallel(D, 3, jobs=1)
        p2 = solve_parallel(D, 3, jobs=2)
        p3 = solve_parallel(D, 3, jobs=3)
        assert seq.sat == p1.sat == p2.sat == p3.sat
        assert p1.cover == p2.cover == p3.cover
        if p2.sat:
            assert verify_cover(D, p2.cover)
    D = gen_path_power(10, 3).digraph
    r = solve_parallel(D, 3, SolveConstraints().pin(0, [1, 2, 3]), jobs=2)
    assert r.sat and r.cover.sets[0] == charset([1, 2, 3])
    # the source of P_10^3 needs the full set
    assert solve_parallel(D, 3, SolveConstraints().pin(0, [1, 2]), jobs=2).outcome is Outcome.UNSAT
    assert solve_parallel(gen_path_power(11, 3).digraph, 3, jobs=2).outcome is Outcome.UNSAT
