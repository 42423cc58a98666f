"""Exact k-cut-cover search plus the polynomial deciders for one and two cuts.

The search is a depth-first assignment of characteristic sets with forward
checking on bitmask domains.  A domain is an ``int`` whose bit ``S`` is set iff
the set with mask ``S`` is still allowed, so pruning a neighbour is one AND.

Three devices keep desk-scale refutations fast:

* colours that are indistinguishable on everything assigned so far are
  interchangeable, so a vertex only tries sets that use the lowest members of
  each such class;
* the *frontier* of a level (assigned vertices with an unassigned neighbour)
  determines the remaining subproblem, so a refuted level is cached as a
  nogood keyed on the frontier's sets;
* a refuted level jumps straight back to its deepest frontier vertex.
"""

from __future__ import annotations

import enum
import itertools
import time
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, NamedTuple, Optional

from .cover import CharSet, CutCover, charset, popcount
from .digraph import Digraph, is_acyclic

MAX_SOLVER_K = 12
_CANON_PERM_LIMIT = 120
_NOGOOD_LIMIT = 4_000_000


class Outcome(enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    BUDGET_EXCEEDED = "BUDGET_EXCEEDED"


class BudgetExceededError(RuntimeError):
    pass


@dataclass(frozen=True)
class Budget:
    nodes: Optional[int] = None
    seconds: Optional[float] = None


@dataclass
class SolveConstraints:
    """Restrictions layered on top of the cover condition.

    ``domains`` maps a vertex to its allowed family of sets, ``sizes`` to its
    allowed set sizes, ``subset_pairs`` holds ``(x, y)`` meaning
    ``C(x) ⊆ C(y)`` and ``excluded`` holds ``(a, y)`` meaning ``a ∉ C(y)``.
    """

    domains: dict[int, frozenset] = field(default_factory=dict)
    sizes: dict[int, frozenset] = field(default_factory=dict)
    subset_pairs: list[tuple[int, int]] = field(default_factory=list)
    excluded: list[tuple[int, int]] = field(default_factory=list)

    def restrict(self, v: int, family: Iterable[CharSet]) -> "SolveConstraints":
        fam = frozenset(family)
        self.domains[v] = self.domains[v] & fam if v in self.domains else fam
        return self

    def pin(self, v: int, s: CharSet | Iterable[int]) -> "SolveConstraints":
        return self.restrict(v, [s if isinstance(s, int) else charset(s)])

    def allow_sizes(self, v: int, sizes: Iterable[int]) -> "SolveConstraints":
        sz = frozenset(sizes)
        self.sizes[v] = self.sizes[v] & sz if v in self.sizes else sz
        return self

    def require_subset(self, x: int, y: int) -> "SolveConstraints":
        self.subset_pairs.append((x, y))
        return self

    def exclude(self, a: int, y: int) -> "SolveConstraints":
        self.excluded.append((a, y))
        return self

    def copy(self) -> "SolveConstraints":
        return SolveConstraints(dict(self.domains), dict(self.sizes), list(self.subset_pairs), list(self.excluded))


@dataclass
class SolveResult:
    outcome: Outcome
    cover: Optional[CutCover]
    nodes: int
    ms: float

    @property
    def sat(self) -> bool:
        return self.outcome is Outcome.SAT

    def stats(self) -> dict:
        return {"nodes": self.nodes, "ms": round(self.ms, 3), "outcome": self.outcome.value}


# -- per-k tables -------------------------------------------------------------------


class _Tables(NamedTuple):
    full: int                 # domain with every set allowed
    sup: tuple[int, ...]      # sup[S]: domain of all T ⊇ S
    sub: tuple[int, ...]      # sub[S]: domain of all T ⊆ S
    not_sup: tuple[int, ...]
    not_sub: tuple[int, ...]
    value_order: tuple[int, ...]


@lru_cache(maxsize=None)
def _tables(k: int) -> _Tables:
    m = 1 << k
    full = (1 << m) - 1
    sub = [0] * m
    for s in range(m):
        acc = 1 << s
        t = s
        while t:
            low = t & -t
            acc |= sub[s ^ low]
            t ^= low
        sub[s] = acc
    sup = [0] * m
    for s in range(m - 1, -1, -1):
        acc = 1 << s
        t = (m - 1) & ~s
        while t:
            low = t & -t
            acc |= sup[s | low]
            t ^= low
        sup[s] = acc
    order = tuple(sorted(range(m), key=lambda s: (-popcount(s), s)))
    return _Tables(full, tuple(sup), tuple(sub), tuple(full & ~x for x in sup), tuple(full & ~x for x in sub), order)


@lru_cache(maxsize=None)
def _set_permutation(k: int, perm: tuple[int, ...]) -> tuple[int, ...]:
    out = []
    for s in range(1 << k):
        t = 0
        for a in range(k):
            if s >> a & 1:
                t |= 1 << perm[a]
        out.append(t)
    return tuple(out)


def _permute_domain(dom: int, table: tuple[int, ...]) -> int:
    out = 0
    while dom:
        low = dom & -dom
        out |= 1 << table[low.bit_length() - 1]
        dom ^= low
    return out


def _symmetry_classes(k: int, domains: Iterable[int], full: int) -> list[int]:
    """Partition colours into classes whose transpositions fix every domain."""
    parent = list(range(k))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    restricted = [d for d in set(domains) if d != full]
    for a, b in itertools.combinations(range(k), 2):
        if find(a) == find(b):
            continue
        perm = list(range(k))
        perm[a], perm[b] = b, a
        table = _set_permutation(k, tuple(perm))
        if all(_permute_domain(d, table) == d for d in restricted):
            parent[find(b)] = find(a)
    classes: dict[int, int] = {}
    for a in range(k):
        r = find(a)
        classes[r] = classes.get(r, 0) | 1 << a
    return sorted(classes.values())


def _class_permutations(k: int, classes: list[int]) -> list[tuple[int, ...]]:
    members = [[a for a in range(k) if c >> a & 1] for c in classes]
    count = 1
    for m in members:
        for i in range(2, len(m) + 1):
            count *= i
    if count <= 1 or count > _CANON_PERM_LIMIT:
        return []
    perms = []
    for choice in itertools.product(*(itertools.permutations(m) for m in members)):
        perm = list(range(k))
        for m, image in zip(members, choice):
            for a, b in zip(m, image):
                perm[a] = b
        perms.append(_set_permutation(k, tuple(perm)))
    return perms


_prefix_cache: dict[tuple[int, int], int] = {}


def _prefix(cls: int, c: int) -> int:
    key = (cls, c)
    got = _prefix_cache.get(key)
    if got is None:
        got, t = 0, cls
        for _ in range(c):
            low = t & -t
            got |= low
            t ^= low
        _prefix_cache[key] = got
    return got


# -- the search -------------------------------------------------------------------------


def branching_order(D: Digraph) -> list[int]:
    """Topological order (depth-first flavoured) if acyclic, else degree-descending."""
    if not is_acyclic(D):
        return sorted(range(D.n), key=lambda v: (-(D.indegree(v) + D.outdegree(v)), v))
    indeg = [D.indegree(v) for v in range(D.n)]
    stack = [v for v in range(D.n - 1, -1, -1) if indeg[v] == 0]
    order = []
    while stack:
        v = stack.pop()
        order.append(v)
        ready = []
        for w in D.out_neighbors(v):
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
        stack.extend(sorted(ready, reverse=True))
    return order


def _compile_domains(D: Digraph, k: int, cons: SolveConstraints, tab: _Tables) -> list[int]:
    m = 1 << k
    doms = [tab.full] * D.n
    for v, fam in cons.domains.items():
        d = 0
        for s in fam:
            if 0 <= s < m:
                d |= 1 << s
        doms[v] &= d
    for v, sizes in cons.sizes.items():
        d = 0
        for s in range(m):
            if popcount(s) in sizes:
                d |= 1 << s
        doms[v] &= d
    for a, y in cons.excluded:
        if not 1 <= a <= k:
            raise ValueError(f"excluded colour {a} outside 1..{k}")
        d = 0
        for s in range(m):
            if not s >> (a - 1) & 1:
                d |= 1 << s
        doms[y] &= d
    return doms


def solve(D: Digraph, k: int, constraints: Optional[SolveConstraints] = None,
          budget: Optional[Budget] = None, symmetry: bool = True) -> SolveResult:
    """Decide whether ``D`` has a k-cut cover satisfying ``constraints``.

    Complete unless the budget runs out, which is reported as
    ``BUDGET_EXCEEDED`` and never as ``UNSAT``.
    """
    if not 0 <= k <= MAX_SOLVER_K:
        raise ValueError(f"exact search supports 0 <= k <= {MAX_SOLVER_K}, got {k}")
    cons = constraints or SolveConstraints()
    for v in list(cons.domains) + list(cons.sizes) + [y for _, y in cons.excluded] + [u for p in cons.subset_pairs for u in p]:
        if not 0 <= v < D.n:
            raise ValueError(f"constraint mentions vertex {v} outside 0..{D.n - 1}")
    budget = budget or Budget()
    start = time.perf_counter()
    tab = _tables(k)
    static = _compile_domains(D, k, cons, tab)
    if any(d == 0 for d in static):
        return SolveResult(Outcome.UNSAT, None, 0, (time.perf_counter() - start) * 1e3)
    search = _Search(D, k, tab, static, cons.subset_pairs, budget, symmetry, start)
    outcome, sets = search.run()
    ms = (time.perf_counter() - start) * 1e3
    cover = CutCover(k, tuple(sets)) if outcome is Outcome.SAT else None
    return SolveResult(outcome, cover, search.nodes, ms)


class _Search:
    def __init__(self, D, k, tab, static, pairs, budget, symmetry, start):
        self.D, self.k, self.tab, self.static = D, k, tab, static
        self.budget, self.start = budget, start
        self.nodes = 0
        order = branching_order(D)
        self.order = order
        pos = [0] * D.n
        for i, v in enumerate(order):
            pos[v] = i
        # (neighbour, mask table) for neighbours later in the order
        later: list[list[tuple[int, tuple[int, ...]]]] = [[] for _ in range(D.n)]
        last_pos = [pos[v] for v in range(D.n)]

        def link(a, b, tbl_if_a_first, tbl_if_b_first):
            if pos[a] < pos[b]:
                later[a].append((b, tbl_if_a_first))
            else:
                later[b].append((a, tbl_if_b_first))
            last_pos[a] = max(last_pos[a], pos[b])
            last_pos[b] = max(last_pos[b], pos[a])

        for u, v in D.arcs:
            link(u, v, tab.not_sup, tab.not_sub)
        for x, y in pairs:
            if x == y:
                continue
            link(x, y, tab.sup, tab.sub)
        self.later = [tuple(x) for x in later]
        n = D.n
        frontiers: list[tuple[int, ...]] = [()] * (n + 1)
        cur: list[int] = []
        for j in range(1, n + 1):
            p = j - 1
            cur = [q for q in cur if last_pos[order[q]] >= j]
            if last_pos[order[p]] >= j:
                cur.append(p)
            frontiers[j] = tuple(cur)
        self.frontier_vertices = [tuple(order[q] for q in f) for f in frontiers]
        self.jump = [f[-1] if f else -1 for f in frontiers]
        if symmetry and k > 1:
            classes = _symmetry_classes(k, static, tab.full)
        else:
            classes = [1 << a for a in range(k)]
        self.init_classes = tuple(c for c in classes)
        self.use_symmetry = any(popcount(c) > 1 for c in classes)
        self.perms = _class_permutations(k, classes) if self.use_symmetry else []

    def _key(self, j, val):
        vals = tuple(val[u] for u in self.frontier_vertices[j])
        if self.perms and vals:
            vals = min(tuple(t[x] for x in vals) for t in self.perms)
        return (j, vals)

    def _candidates(self, d, classes):
        out = []
        for s in self.tab.value_order:
            if not d >> s & 1:
                continue
            if classes is not None:
                ok = True
                for c in classes:
                    x = s & c
                    if x and x != _prefix(c, popcount(x)):
                        ok = False
                        break
                if not ok:
                    continue
            out.append(s)
        return out

    @staticmethod
    def _refine(classes, s):
        out = []
        for c in classes:
            a, b = c & s, c & ~s
            if a and b:
                out.append(a)
                out.append(b)
            else:
                out.append(c)
        return tuple(x for x in out if x & (x - 1))  # singleton classes carry no symmetry

    def run(self):
        order, later, n = self.order, self.later, self.D.n
        if n == 0:
            return Outcome.SAT, []
        dom = list(self.static)
        val = [0] * n
        trail: list[tuple[int, int]] = []
        marks = [0] * (n + 1)
        cands: list[list[int]] = [[] for _ in range(n + 1)]
        idx = [0] * (n + 1)
        classes: list = [None] * (n + 1)
        nogoods: set = set()
        jump = self.jump
        node_cap = self.budget.nodes
        sec_cap = self.budget.seconds
        start = self.start
        use_sym = self.use_symmetry

        classes[0] = tuple(c for c in self.init_classes if c & (c - 1)) if use_sym else None
        cands[0] = self._candidates(dom[order[0]], classes[0])
        j = 0
        nodes = 0
        while True:
            if idx[j] < len(cands[j]):
                s = cands[j][idx[j]]
                idx[j] += 1
                nodes += 1
                if node_cap is not None and nodes > node_cap:
                    self.nodes = nodes
                    return Outcome.BUDGET_EXCEEDED, None
                if sec_cap is not None and nodes & 1023 == 0 and time.perf_counter() - start > sec_cap:
                    self.nodes = nodes
                    return Outcome.BUDGET_EXCEEDED, None
                mark = marks[j]
                while len(trail) > mark:
                    w, old = trail.pop()
                    dom[w] = old
                v = order[j]
                val[v] = s
                ok = True
                for w, tbl in later[v]:
                    old = dom[w]
                    new = old & tbl[s]
                    if new != old:
                        trail.append((w, old))
                        dom[w] = new
                        if not new:
                            ok = False
                            break
                if not ok:
                    continue
                nj = j + 1
                if nj == n:
                    self.nodes = nodes
                    return Outcome.SAT, val
                if self._key(nj, val) in nogoods:
                    continue
                j = nj
                marks[j] = len(trail)
                if use_sym:
                    classes[j] = self._refine(classes[j - 1], s) if classes[j - 1] else ()
                    cls = classes[j] or None
                else:
                    cls = None
                cands[j] = self._candidates(dom[order[j]], cls)
                idx[j] = 0
            else:
                # every value at level j refuted: the subproblem given its frontier is infeasible
                if len(nogoods) >= _NOGOOD_LIMIT:
                    nogoods.clear()
                nogoods.add(self._key(j, val))
                t = jump[j]
                if t < 0:
                    self.nodes = nodes
                    return Outcome.UNSAT, None
                j = t


# -- polynomial deciders and min_k ---------------------------------------------------------


class OneCutResult(NamedTuple):
    ok: bool
    cut: Optional[frozenset]   # U = all tails, when ok
    witness: Optional[int]     # a vertex with both in- and out-arcs, when not ok

    def __bool__(self):
        return self.ok


def decide_one_cut(D: Digraph) -> OneCutResult:
    for v in range(D.n):
        if D.indegree(v) and D.outdegree(v):
            return OneCutResult(False, None, v)
    return OneCutResult(True, frozenset(u for u, _ in D.arcs), None)


class TwoCutResult(NamedTuple):
    ok: bool
    cover: Optional[CutCover]
    odd_cycle: Optional[tuple[int, ...]]

    def __bool__(self):
        return self.ok


def decide_two_cuts(D: Digraph) -> TwoCutResult:
    """2-colour the underlying graph on vertices with non-zero in- and outdegree.

    On success the cover uses {1,2} on sources, ∅ on sinks and the singleton
    colour class on everything else.
    """
    inner = [D.indegree(v) > 0 and D.outdegree(v) > 0 for v in range(D.n)]
    color = [0] * D.n
    parent = [-1] * D.n
    depth = [0] * D.n
    for s in range(D.n):
        if not inner[s] or color[s]:
            continue
        color[s] = 1
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in D.neighbors(v):
                if not inner[w]:
                    continue
                if not color[w]:
                    color[w] = 3 - color[v]
                    parent[w] = v
                    depth[w] = depth[v] + 1
                    queue.append(w)
                elif color[w] == color[v]:
                    return TwoCutResult(False, None, _odd_cycle(v, w, parent, depth))
    sets = []
    for v in range(D.n):
        if D.indegree(v) == 0 and D.outdegree(v) > 0:
            sets.append(0b11)
        elif inner[v]:
            sets.append(1 << (color[v] - 1))
        else:
            sets.append(0)
    return TwoCutResult(True, CutCover(2, tuple(sets)), None)


def _odd_cycle(a, b, parent, depth):
    left, right = [a], [b]
    while depth[a] > depth[b]:
        a = parent[a]
        left.append(a)
    while depth[b] > depth[a]:
        b = parent[b]
        right.append(b)
    while a != b:
        a, b = parent[a], parent[b]
        left.append(a)
        right.append(b)
    right.pop()
    return tuple(left + right[::-1])


def min_k(D: Digraph, k_max: int, budget: Optional[Budget] = None) -> Optional[int]:
    """Smallest k <= k_max admitting a cover, or None when even k_max fails."""
    for k in range(0, k_max + 1):
        res = solve(D, k, budget=budget)
        if res.outcome is Outcome.BUDGET_EXCEEDED:
            raise BudgetExceededError(f"budget exhausted at k={k} after {res.nodes} nodes")
        if res.sat:
            return k
    return None


def _solve_chunk(args):
    D, k, cons, budget = args
    res = solve(D, k, cons, budget)
    return res.outcome, res.cover, res.nodes


def solve_parallel(D: Digraph, k: int, constraints: Optional[SolveConstraints] = None,
                   budget: Optional[Budget] = None, jobs: int = 1) -> SolveResult:
    """Solve one subproblem per set of the first branching vertex on ``jobs`` processes.

    Without constraints all colours are interchangeable, so that vertex only
    needs one set per size.  Subproblems are taken in increasing order of
    that set and the first SAT one wins, so the certificate does not depend
    on ``jobs``; ``jobs <= 1`` runs them in this process.  The budget applies
    to each subproblem.
    """
    if D.n == 0:
        return solve(D, k, constraints, budget)
    start = time.perf_counter()
    cons = constraints or SolveConstraints()
    first = branching_order(D)[0]
    if constraints is None:
        values = [(1 << s) - 1 for s in range(k + 1)]
    else:
        dom = _compile_domains(D, k, cons, _tables(k))[first]
        values = [s for s in range(1 << k) if dom >> s & 1]
    tasks = [(D, k, cons.copy().restrict(first, [s]), budget) for s in values]
    nodes = 0
    over = False

    def finish(results, cancel=lambda: None):
        nonlocal nodes, over
        for outcome, cover, n in results:
            nodes += n
            if outcome is Outcome.SAT:
                cancel()
                return SolveResult(Outcome.SAT, cover, nodes, (time.perf_counter() - start) * 1e3)
            over = over or outcome is Outcome.BUDGET_EXCEEDED
        return None

    if jobs <= 1:
        found = finish(map(_solve_chunk, tasks))
    else:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_solve_chunk, t) for t in tasks]
            found = finish((f.result() for f in futures), lambda: [f.cancel() for f in futures])
    if found is not None:
        return found
    outcome = Outcome.BUDGET_EXCEEDED if over else Outcome.UNSAT
    return SolveResult(outcome, None, nodes, (time.perf_counter() - start) * 1e3)
