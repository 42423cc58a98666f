"""Colour-forcing gadgets and the reductions from graph colouring.

A *gadget* here is an acyclic digraph that is covered by k cuts, with two
vertices x, y such that every k-cut cover has ``|C(x)| = 1`` and
``C(x) ⊆ C(y)``, and every colour a is realised by some cover with
``C(x) = C(y) = {a}``.  Gadgets are obtained from a non-coverable digraph by
repeatedly cutting the second-to-last arc of a longest path off its head, and
their properties are checked by refutation with the exact solver.

The second half builds port gadgets with label constraints (arcs go from a
larger label j to a smaller one i with j - i in {1, 2, 3}) and assembles the
vertex gadgets of the bounded-degree 3-colouring reduction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import count
from typing import Optional, Sequence

from .cover import CutCover
from .digraph import Digraph, Graph, is_acyclic
from .generators import GeneratedInstance
from .homomorphism import verify_hom
from .solver import Budget, Outcome, SolveConstraints, SolveResult, solve


class GadgetValidationError(RuntimeError):
    def __init__(self, check: str, detail: str = ""):
        self.check = check
        super().__init__(f"gadget check {check} failed" + (f": {detail}" if detail else ""))


class BudgetError(RuntimeError):
    pass


def _decided(res: SolveResult, what: str) -> bool:
    if res.outcome is Outcome.BUDGET_EXCEEDED:
        raise BudgetError(f"budget exhausted while checking {what}")
    return res.sat


# -- cut-off -------------------------------------------------------------------------


@dataclass(frozen=True)
class Cutoff:
    digraph: Digraph
    x: int
    y: int
    y_prime: int
    path: tuple[int, ...]


def longest_path(D: Digraph) -> tuple[int, ...]:
    """Lexicographically smallest path among those with the most vertices."""
    order = is_acyclic(D).order
    if order is None:
        raise ValueError("digraph has a directed cycle")
    ahead = [1] * D.n  # vertices on a longest path starting here
    for v in reversed(order):
        for w in D.out_neighbors(v):
            ahead[v] = max(ahead[v], ahead[w] + 1)
    if not D.n:
        return ()
    best = max(ahead)
    v = min(u for u in range(D.n) if ahead[u] == best)
    path = [v]
    while ahead[v] > 1:
        v = min(w for w in D.out_neighbors(v) if ahead[w] == ahead[v] - 1)
        path.append(v)
    return tuple(path)


def cutoff(D: Digraph) -> Cutoff:
    """Replace the arc xy by xy' for a new vertex y', where x, y, z end a longest path."""
    path = longest_path(D)
    if len(path) < 3:
        raise ValueError("cut-off needs a directed path on 3 vertices")
    x, y = path[-3], path[-2]
    assert all(D.outdegree(z) == 0 for z in D.out_neighbors(y))
    yp = D.n
    out = D.with_arcs(add=[(x, yp)], remove=[(x, y)], n=D.n + 1)
    assert out.consecutive_pairs() < D.consecutive_pairs()
    return Cutoff(out, x, y, yp, path)


# -- gadgets ---------------------------------------------------------------------------


@dataclass
class Gadget:
    digraph: Digraph
    x: int
    y: int
    y_prime: Optional[int]
    k: int
    origin: Optional[Digraph] = None
    hom: Optional[tuple[int, ...]] = None  # vertex -> vertex of origin
    validated: bool = False
    report: dict = field(default_factory=dict)

    def bundle(self) -> dict:
        out = {"x": self.x, "y": self.y, "k": self.k, "validated": self.validated}
        if self.y_prime is not None:
            out["y_prime"] = self.y_prime
        if self.hom is not None:
            out["hom"] = list(self.hom)
        return out

    @classmethod
    def from_bundle(cls, D: Digraph, data: dict) -> "Gadget":
        for key in ("x", "y", "k"):
            if key not in data:
                raise ValueError(f"gadget bundle lacks {key!r}")
        hom = tuple(data["hom"]) if data.get("hom") is not None else None
        return cls(D, int(data["x"]), int(data["y"]), data.get("y_prime"), int(data["k"]),
                   hom=hom, validated=bool(data.get("validated", False)))


def _sizes_except_one(k):
    return [s for s in range(k + 1) if s != 1]


def gadget_checks(D: Digraph, x: int, y: int, k: int, budget: Optional[Budget] = None) -> dict:
    """Run every refutation/realisation check; map check name -> passed."""
    rep = {}
    res = solve(D, k, SolveConstraints().allow_sizes(x, _sizes_except_one(k)), budget)
    rep["1a"] = not _decided(res, "1a")
    for a in range(1, k + 1):
        res = solve(D, k, SolveConstraints().pin(x, [a]).exclude(a, y), budget)
        rep[f"1b[{a}]"] = not _decided(res, f"1b[{a}]")
    for a in range(1, k + 1):
        res = solve(D, k, SolveConstraints().pin(x, [a]).pin(y, [a]), budget)
        rep[f"2[{a}]"] = _decided(res, f"2[{a}]")
    return rep


def validate_gadget(g: Gadget, budget: Optional[Budget] = None) -> Gadget:
    """Re-run the checks from scratch; raise on the first failing one."""
    rep = gadget_checks(g.digraph, g.x, g.y, g.k, budget)
    g.report = rep
    g.validated = all(rep.values())
    if not g.validated:
        bad = next(name for name, ok in rep.items() if not ok)
        raise GadgetValidationError(bad)
    return g


def find_gadget(D: Digraph, k: int, budget: Optional[Budget] = None) -> Gadget:
    """Cut off arcs until the digraph becomes coverable, then validate."""
    if not is_acyclic(D):
        raise ValueError("find_gadget needs an acyclic digraph")
    if _decided(solve(D, k, budget=budget), "input"):
        raise ValueError(f"input is covered by {k} cuts; no gadget can be derived")
    cur = D
    hom = list(range(D.n))
    while True:
        cut = cutoff(cur)
        hom.append(hom[cut.y])
        if _decided(solve(cut.digraph, k, budget=budget), "cut-off"):
            g = Gadget(cut.digraph, cut.x, cut.y, cut.y_prime, k, origin=D, hom=tuple(hom))
            return validate_gadget(g, budget)
        cur = cut.digraph


def reduce_coloring_to_cutcover(G: Graph, gadget: Gadget) -> GeneratedInstance:
    """One gadget copy per vertex of G, plus x_u -> y_v for each edge u < v.

    Vertex w of copy v gets index v * m + w (m = gadget size).  Labels map each
    vertex to its gadget vertex's image in the gadget's origin.
    """
    if not gadget.validated:
        raise ValueError("gadget is not validated")
    H = gadget.digraph
    m = H.n
    arcs = [(v * m + a, v * m + b) for v in range(G.n) for a, b in H.arcs]
    arcs += [(u * m + gadget.x, v * m + gadget.y) for u, v in G.edges]
    D = Digraph(G.n * m, arcs)
    hom = gadget.hom if gadget.hom is not None else tuple(range(m))
    labels = tuple(hom[w] for _ in range(G.n) for w in range(m))
    assert is_acyclic(D)
    if gadget.origin is not None:
        assert all(gadget.origin.has_arc(labels[u], labels[v]) for u, v in D.arcs)
    params = {"graph_n": G.n, "graph_m": len(G.edges), "k": gadget.k, "gadget_n": m}
    return GeneratedInstance(D, "reduction", params, labels)


# -- forcing profiles -------------------------------------------------------------------------


@dataclass(frozen=True)
class ForcingProfile:
    X: tuple[int, ...]
    k: int
    exists_pinned: dict
    forced_equal_singleton: bool
    failed_case: Optional[str] = None
    witness: Optional[CutCover] = None

    @property
    def realises_all(self) -> bool:
        return all(self.exists_pinned.values())


def forcing_profile(D: Digraph, X: Sequence[int], k: int, budget: Optional[Budget] = None,
                    assume_singletons: bool = False) -> ForcingProfile:
    """Which colours X can share as a common singleton, and whether it must.

    ``forced_equal_singleton`` asks: does every cover with all sets on X
    non-empty (or, with ``assume_singletons``, all of size one) give every
    vertex of X the same singleton?  It is decided by refuting a complete
    case split: some x in X has two or more elements, or all are singletons
    and the first differs from some other.  Colours are interchangeable, so
    the second case is checked with the colours 1 and 2 only.
    """
    X = tuple(X)
    if not X:
        raise ValueError("X must be non-empty")
    pinned = {}
    for a in range(1, k + 1):
        cons = SolveConstraints()
        for x in X:
            cons.pin(x, [a])
        pinned[a] = _decided(solve(D, k, cons, budget), f"pinned {a}")
    base = range(1, 2) if assume_singletons else range(1, k + 1)
    cases = []
    if not assume_singletons:
        for x in X:
            cons = SolveConstraints()
            for z in X:
                cons.allow_sizes(z, range(2 if z == x else 1, k + 1))
            cases.append((f"|C({x})|>=2", cons))
    if k >= 2:
        for z in X[1:]:
            cons = SolveConstraints()
            for w in X:
                cons.allow_sizes(w, base)
            cons.pin(X[0], [1]).pin(z, [2])
            cases.append((f"C({X[0]})!=C({z})", cons))
    for name, cons in cases:
        res = solve(D, k, cons, budget)
        if _decided(res, name):
            return ForcingProfile(X, k, pinned, False, name, res.cover)
    return ForcingProfile(X, k, pinned, True)


# -- port gadgets and the bounded-degree reduction ---------------------------------------------


@dataclass(frozen=True)
class PortGadget:
    """Digraph with inverted labels (arcs go down by 1..3) and port vertices."""

    name: str
    digraph: Digraph
    labels: tuple[int, ...]
    ports: tuple[int, ...]
    meets_degrees: bool = True

    def label_consistent(self, span: int = 3) -> bool:
        return all(1 <= self.labels[u] - self.labels[v] <= span for u, v in self.digraph.arcs)

    def max_degrees(self) -> tuple[int, int]:
        return self.digraph.max_indegree(), self.digraph.max_outdegree()


def _p_ok(D: Digraph, ports) -> bool:
    prof = forcing_profile(D, ports, 3)
    return prof.realises_all and prof.forced_equal_singleton


def _q_ok(D: Digraph, ports) -> bool:
    prof = forcing_profile(D, ports, 3, assume_singletons=True)
    return prof.realises_all and prof.forced_equal_singleton


def _label_arcs(labels, allowed):
    arcs = []
    for u, lu in enumerate(labels):
        for v, lv in enumerate(labels):
            if 1 <= lu - lv <= 3 and allowed(u, v):
                arcs.append((u, v))
    return arcs


def prune_arcs(D: Digraph, check) -> Digraph:
    """Drop arcs one at a time while ``check`` keeps holding, until no single
    arc can go; arcs at the busiest vertices are tried first."""
    if not check(D):
        raise ValueError("starting digraph fails the property")
    changed = True
    while changed:
        changed = False
        load = [D.indegree(v) + D.outdegree(v) for v in range(D.n)]
        for a in sorted(D.arcs, key=lambda a: (-max(load[a[0]], load[a[1]]), -(load[a[0]] + load[a[1]]), a)):
            cand = D.with_arcs(remove=[a])
            if check(cand):
                D = cand
                changed = True
                break
    return D


def thin_to_degrees(D: Digraph, check, violates, limit: int = 20000) -> Optional[Digraph]:
    """Depth-first search for a subdigraph passing ``check`` with no vertex
    flagged by ``violates``.

    Each step removes an arc at the first flagged vertex.  Deleting arcs
    keeps every cover, so the realisation part of a forcing check never
    breaks and a failed forcing part never recovers; a failed check thus
    prunes the whole subtree and the search is complete.  It gives up after
    ``limit`` checks.
    """
    seen = set()
    budget = [limit]

    def go(H):
        bad = next((v for v in range(H.n) if violates(H, v)), None)
        if bad is None:
            return H
        for a in H.arcs:
            if bad not in a:
                continue
            cand = H.with_arcs(remove=[a])
            if cand.arcs in seen:
                continue
            seen.add(cand.arcs)
            budget[0] -= 1
            if budget[0] < 0:
                return None
            if check(cand):
                got = go(cand)
                if got is not None:
                    return got
        return None

    return go(D) if check(D) else None


# characteristic sets by label that realise each P layout with colours a, b, c = 1, 2, 3
_P_SEQUENCES = {
    11: (0b001, 0b010, 0b100, 0b110, 0b001, 0b011, 0b101, 0b110, 0b111),
    13: (0b001, 0b010, 0b100, 0b110, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111),
}


def _degree_rule(bounded_sum: bool):
    def violates(D: Digraph, v: int) -> bool:
        i, o = D.indegree(v), D.outdegree(v)
        return i > 3 or o > 3 or (bounded_sum and min(i, o) > 2)
    return violates


def _search(name, labels, ports, arcs, check, violates) -> PortGadget:
    start = Digraph(len(labels), arcs)
    thin = thin_to_degrees(start, check, violates)
    D = prune_arcs(thin if thin is not None else start, check)
    return PortGadget(name, D, labels, ports, thin is not None)


def _search_p(top: int) -> PortGadget:
    # two ports with label 3 fed only from labels 4 and 5, then labels 4..top;
    # only arcs compatible with the known realising sequence are offered
    labels = (3, 3) + tuple(range(4, top + 1))
    ports = (0, 1)
    seq = _P_SEQUENCES[top]
    C = [seq[lab - 3] for lab in labels]

    def allowed(u, v):
        if v in ports and labels[u] not in (4, 5):
            return False
        return C[u] & ~C[v] != 0

    return _search(f"P{top + 1}", labels, ports, _label_arcs(labels, allowed),
                   lambda H: _p_ok(H, ports), _degree_rule(top == 13))


def _search_q() -> PortGadget:
    labels = (3, 3, 3, 2, 1, 1, 0, 0)
    ports = (0, 1, 2)
    return _search("Q", labels, ports, _label_arcs(labels, lambda u, v: True),
                   lambda H: _q_ok(H, ports), _degree_rule(True))


@lru_cache(maxsize=None)
def search_port_gadget(kind: str) -> PortGadget:
    """Search-found port gadgets: "P12" (labels 3..11), "P14" (3..13), "Q".

    Each starts from the largest digraph that fits its label layout, is
    thinned until in- and outdegrees are at most 3 (for "P14" and "Q" also
    min(in, out) <= 2) and then pruned to be arc-minimal.  ``meets_degrees``
    records whether the degree target was reached.  They are candidates
    validated by :func:`forcing_profile`, not reconstructions of any
    published drawing.
    """
    if kind == "P12":
        return _search_p(11)
    if kind == "P14":
        return _search_p(13)
    if kind == "Q":
        return _search_q()
    raise ValueError(f"unknown gadget kind {kind!r}")


def check_port_gadget(g: PortGadget, role: str) -> ForcingProfile:
    """``role`` "P": realisable with every colour and forced equal given non-empty
    ports.  ``role`` "Q": the same, given singleton ports."""
    if role not in ("P", "Q"):
        raise ValueError("role is 'P' or 'Q'")
    return forcing_profile(g.digraph, g.ports, 3, assume_singletons=role == "Q")


@dataclass(frozen=True)
class VertexGadget:
    instance: GeneratedInstance
    W: tuple[int, ...]           # leaf ports, one per incident edge
    tree_edges: tuple[tuple[int, int], ...]
    internal: tuple[int, ...]

    @property
    def digraph(self) -> Digraph:
        return self.instance.digraph


def caterpillar(leaves: int) -> tuple[list[int], list[tuple[int, int]], list[int]]:
    """Tree with ``leaves`` leaves and leaves - 2 vertices of degree 3.

    Internal nodes 0..leaves-3 form a path; returns (internal, edges, leaf ids).
    """
    if leaves < 3:
        raise ValueError("need at least 3 leaves")
    m = leaves - 2
    internal = list(range(m))
    edges = [(i, i + 1) for i in range(m - 1)]
    leaf_ids = []
    nxt = count(m)
    for i in internal:
        for _ in range(3 - (i > 0) - (i < m - 1)):
            leaf = next(nxt)
            edges.append((i, leaf))
            leaf_ids.append(leaf)
    assert len(leaf_ids) == leaves
    return internal, edges, leaf_ids


class _Builder:
    def __init__(self):
        self.labels: list[int] = []
        self.arcs: list[tuple[int, int]] = []

    def add(self, label):
        self.labels.append(label)
        return len(self.labels) - 1

    def copy(self, g: PortGadget, glue: dict) -> list[int]:
        """Add a copy of ``g``; ports listed in ``glue`` reuse existing vertices."""
        idx = []
        for v, lab in enumerate(g.labels):
            idx.append(glue[v] if v in glue else self.add(lab))
        self.arcs.extend((idx[u], idx[v]) for u, v in g.digraph.arcs)
        return idx


def assemble_vertex_gadget(P: PortGadget, Q: PortGadget, degree: int, check: bool = True) -> VertexGadget:
    """Caterpillar with ``degree`` leaves; Q at internal nodes, P on tree edges,
    glued at ports; each leaf port gets an extra label-0 sink."""
    if degree < 3:
        raise ValueError("vertex gadgets need degree >= 3")
    if check:
        if not _p_ok(P.digraph, P.ports):
            raise GadgetValidationError("P", "port properties fail")
        if not _q_ok(Q.digraph, Q.ports):
            raise GadgetValidationError("Q", "port properties fail")
    internal, edges, leaf_ids = caterpillar(degree)
    b = _Builder()
    q_free = {}
    for i in internal:
        idx = b.copy(Q, {})
        q_free[i] = [idx[p] for p in Q.ports]
    leaf_vertex = {}
    for s, t in edges:
        glue = {P.ports[0]: q_free[s].pop(0)}
        if t in q_free:
            glue[P.ports[1]] = q_free[t].pop(0)
        idx = b.copy(P, glue)
        if t not in q_free:
            leaf_vertex[t] = idx[P.ports[1]]
    W = tuple(leaf_vertex[t] for t in leaf_ids)
    for w in W:
        b.arcs.append((w, b.add(0)))
    D = Digraph(len(b.labels), b.arcs)
    inst = GeneratedInstance(D, "vertex-gadget", {"degree": degree, "P": P.name, "Q": Q.name},
                             tuple(b.labels), {"W": list(W)})
    return VertexGadget(inst, W, tuple(edges), tuple(internal))


def reduce_planar_coloring(G: Graph, P: PortGadget, Q: PortGadget) -> GeneratedInstance:
    """Bounded-degree 3-colouring reduction: one vertex gadget per vertex of G
    (with max(degree, 3) leaf ports) and an arc w_uv -> w_vu per edge u < v,
    whose head is relabelled from 3 to 2.  Labels are inverted, so the
    homomorphism to the path power is l -> top - l.  No planar embedding is
    attempted.
    """
    labels: list[int] = []
    arcs: list[tuple[int, int]] = []
    ports: dict[int, list[int]] = {}
    for v in range(G.n):
        vg = assemble_vertex_gadget(P, Q, max(G.degree(v), 3), check=False)
        off = len(labels)
        labels.extend(vg.instance.labels)
        arcs.extend((a + off, b + off) for a, b in vg.digraph.arcs)
        ports[v] = [w + off for w in vg.W]
    for u, v in G.edges:
        a, b = ports[u].pop(0), ports[v].pop(0)
        arcs.append((a, b))
        labels[b] = 2
    D = Digraph(len(labels), arcs)
    top = max(labels, default=0)
    assert verify_hom(D, top + 1, 3, [top - x for x in labels])
    return GeneratedInstance(D, "planar-reduction", {"graph_n": G.n, "graph_m": len(G.edges)},
                             tuple(labels))
