"""Homomorphisms into powers of directed paths.

A labeling l: V -> {0..n-1} is a homomorphism to P_n^d iff every arc uv has
l(v) - l(u) in {1..d}.  The largest candidate labeling is

    l(v) = max over undirected walks U ending in v of  m+(U) - d * m-(U),

computed by repeated relaxation; it exists iff no closed walk has positive
weight, and it is a homomorphism iff its maximum is at most n - 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .cover import Verdict
from .digraph import Digraph, is_acyclic


@dataclass(frozen=True)
class Walk:
    """Vertices u_0..u_m and, per step, whether it follows an arc forward."""

    vertices: tuple[int, ...]
    forward: tuple[bool, ...]

    def __post_init__(self):
        if len(self.forward) != max(len(self.vertices) - 1, 0):
            raise ValueError("need one direction flag per step")

    @property
    def m_plus(self) -> int:
        return sum(self.forward)

    @property
    def m_minus(self) -> int:
        return len(self.forward) - self.m_plus

    @property
    def closed(self) -> bool:
        return len(self.vertices) > 1 and self.vertices[0] == self.vertices[-1]

    def check(self, D: Digraph) -> None:
        for i, fwd in enumerate(self.forward):
            a, b = self.vertices[i], self.vertices[i + 1]
            if not (D.has_arc(a, b) if fwd else D.has_arc(b, a)):
                arrow = "->" if fwd else "<-"
                raise ValueError(f"step {i}: no arc {a} {arrow} {b}")

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "forward": list(self.forward)}


def delta_of_walk(W: Walk, d: int, D: Optional[Digraph] = None) -> int:
    """m+ - d*m-; validates the steps against ``D`` when given."""
    if D is not None:
        W.check(D)
    return W.m_plus - d * W.m_minus


@dataclass(frozen=True)
class HomResult:
    """``kind`` is "labeling", "too_long" or "unbounded"."""

    kind: str
    labeling: Optional[tuple[int, ...]] = None
    walk: Optional[Walk] = None
    rounds: int = 0

    @property
    def ok(self) -> bool:
        return self.kind == "labeling"

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        if self.kind == "labeling":
            return {"type": "labeling", "data": list(self.labeling)}
        return {"type": self.kind, "data": list(self.walk.vertices), "forward": list(self.walk.forward)}


def hom_to_path_power(D: Digraph, n: int, d: int) -> HomResult:
    """Decide D -> P_n^d; return the max-walk labeling or a refuting walk."""
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    for u, v in D.arcs:
        if D.has_arc(v, u):
            return HomResult("unbounded", walk=Walk((u, v, u), (True, True)))
    acyc = is_acyclic(D)
    if not acyc:
        cyc = acyc.cycle + (acyc.cycle[0],)
        return HomResult("unbounded", walk=Walk(cyc, (True,) * (len(cyc) - 1)))
    rank = {v: i for i, v in enumerate(acyc.order)}
    label = [0] * D.n
    # pred[v] = (previous vertex, step was forward) for the walk realising label[v]
    pred: list[Optional[tuple[int, bool]]] = [None] * D.n
    total_rounds = 0
    for comp in D.weak_components():
        comp = sorted(comp, key=rank.__getitem__)
        res = _relax_component(D, comp, d, label, pred)
        total_rounds = max(total_rounds, res[1])
        if res[0] is not None:
            return HomResult("unbounded", walk=res[0], rounds=total_rounds)
    top = max(label, default=0)
    if top >= n:
        v = label.index(top)
        return HomResult("too_long", walk=_trace(v, pred), rounds=total_rounds)
    return HomResult("labeling", labeling=tuple(label), rounds=total_rounds)


def _relax_component(D, comp, d, label, pred):
    """Relax rounds over one weak component until stable.

    Each round visits every vertex and pulls from its in-arcs (+1) and its
    out-arcs (-d), so every arc is looked at twice per round.  Sweeps run
    along ``comp`` and back again on alternate rounds.  A stable round
    within |comp| + 1 rounds certifies the labeling.  Otherwise a positive
    closed walk exists; further sweeps only serve to expose it as a cycle of
    predecessor pointers, and the reported round count stays |comp| + 1.
    """
    size = len(comp)
    ins = {v: D.in_neighbors(v) for v in comp}
    outs = {v: D.out_neighbors(v) for v in comp}

    def sweep(backward):
        changed = False
        for v in (reversed(comp) if backward else comp):
            best = label[v]
            arg = None
            for u in ins[v]:
                cand = label[u] + 1
                if cand > best:
                    best, arg = cand, (u, True)
            for w in outs[v]:
                cand = label[w] - d
                if cand > best:
                    best, arg = cand, (w, False)
            if arg is not None:
                label[v] = best
                pred[v] = arg
                changed = True
                # a finite optimum uses at most |comp| - 1 forward steps
                if best > size - 1:
                    walk = _cycle_from(v, pred)
                    if walk is not None:
                        return changed, walk
        return changed, None

    rounds = 0
    while rounds < size + 1:
        rounds += 1
        changed, walk = sweep(rounds % 2 == 0)
        if walk is not None:
            return walk, rounds
        if not changed:
            return None, rounds
    extra = rounds
    while True:
        walk = _any_pred_cycle(comp, pred)
        if walk is not None:
            return walk, rounds
        extra += 1
        _, walk = sweep(extra % 2 == 0)
        if walk is not None:
            return walk, rounds


def _trace(v, pred) -> Walk:
    verts, fwd = [v], []
    seen = {v}
    while pred[v] is not None:
        u, f = pred[v]
        if u in seen:
            raise AssertionError("predecessor chain of a finite label is cyclic")
        seen.add(u)
        verts.append(u)
        fwd.append(f)
        v = u
    verts.reverse()
    fwd.reverse()
    return Walk(tuple(verts), tuple(fwd))


def _cycle_from(v, pred) -> Optional[Walk]:
    """Follow predecessors from v to the first repeated vertex; return the
    enclosed closed walk (in walking direction) if one is reached."""
    pos: dict[int, int] = {}
    chain: list[int] = []
    flags: list[bool] = []
    while v not in pos:
        if pred[v] is None:
            return None
        pos[v] = len(chain)
        chain.append(v)
        u, f = pred[v]
        flags.append(f)
        v = u
    i = pos[v]
    # chain[i] = v, chain[i+1] = pred(v), ...; walking direction is reversed
    cyc = chain[i:] + [v]
    steps = flags[i:]
    cyc.reverse()
    steps.reverse()
    return Walk(tuple(cyc), tuple(steps))


def _any_pred_cycle(comp, pred) -> Optional[Walk]:
    state: dict[int, int] = {}
    for s in comp:
        if s in state:
            continue
        path = []
        v = s
        while v not in state and pred[v] is not None:
            state[v] = 1
            path.append(v)
            v = pred[v][0]
        if v in state and state[v] == 1 and v in path:
            return _cycle_from(v, pred)
        for u in path:
            state[u] = 2
    return None


def verify_hom(D: Digraph, n: int, d: int, labels: Sequence[int]) -> Verdict:
    """Witness is ``("range", v)`` or ``("arc", (u, v))`` for the first failure."""
    if len(labels) != D.n:
        raise ValueError(f"{len(labels)} labels for {D.n} vertices")
    for v, x in enumerate(labels):
        if not 0 <= x < n:
            return Verdict(False, ("range", v))
    for u, v in D.arcs:
        if not 1 <= labels[v] - labels[u] <= d:
            return Verdict(False, ("arc", (u, v)))
    return Verdict(True)
