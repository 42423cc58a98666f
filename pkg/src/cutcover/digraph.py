"""Digraph data model, acyclicity queries and the plain-text/DOT formats."""

from __future__ import annotations

import heapq
from typing import Iterable, NamedTuple, Optional, Sequence

Arc = tuple[int, int]


class DigraphFormatError(ValueError):
    """Malformed digraph text; ``line`` is 1-based (0 when not tied to a line)."""

    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


class Digraph:
    """Immutable digraph on vertices ``0..n-1``.

    Arcs are stored sorted; self-loops and duplicate arcs are rejected.
    Opposite arc pairs are allowed (see :attr:`is_antisymmetric`).
    """

    __slots__ = ("n", "arcs", "_out", "_in", "_arc_index")

    def __init__(self, n: int, arcs: Iterable[Sequence[int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        canon = sorted((int(u), int(v)) for u, v in arcs)
        out: list[list[int]] = [[] for _ in range(n)]
        inn: list[list[int]] = [[] for _ in range(n)]
        prev = None
        for u, v in canon:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc {u}->{v} out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if (u, v) == prev:
                raise ValueError(f"duplicate arc {u}->{v}")
            prev = (u, v)
            out[u].append(v)
            inn[v].append(u)
        self.n = n
        self.arcs: tuple[Arc, ...] = tuple(canon)
        self._out = tuple(tuple(x) for x in out)
        self._in = tuple(tuple(sorted(x)) for x in inn)
        self._arc_index = {a: i for i, a in enumerate(self.arcs)}

    def __setattr__(self, name, value):
        if hasattr(self, "_arc_index"):
            raise AttributeError("Digraph is immutable")
        object.__setattr__(self, name, value)

    # -- queries ----------------------------------------------------------

    def out_neighbors(self, v: int) -> tuple[int, ...]:
        return self._out[v]

    def in_neighbors(self, v: int) -> tuple[int, ...]:
        return self._in[v]

    def outdegree(self, v: int) -> int:
        return len(self._out[v])

    def indegree(self, v: int) -> int:
        return len(self._in[v])

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self._arc_index

    def arc_index(self, u: int, v: int) -> int:
        return self._arc_index[(u, v)]

    @property
    def num_arcs(self) -> int:
        return len(self.arcs)

    def max_indegree(self) -> int:
        return max((len(x) for x in self._in), default=0)

    def max_outdegree(self) -> int:
        return max((len(x) for x in self._out), default=0)

    @property
    def is_antisymmetric(self) -> bool:
        return not any((v, u) in self._arc_index for u, v in self.arcs)

    @property
    def is_symmetric(self) -> bool:
        return all((v, u) in self._arc_index for u, v in self.arcs)

    def neighbors(self, v: int) -> tuple[int, ...]:
        """Underlying undirected neighbourhood, sorted."""
        return tuple(sorted(set(self._out[v]) | set(self._in[v])))

    def consecutive_pairs(self) -> int:
        """Number of pairs (uv, vw) of consecutive arcs."""
        return sum(len(self._in[v]) * len(self._out[v]) for v in range(self.n))

    def reverse(self) -> "Digraph":
        return Digraph(self.n, ((v, u) for u, v in self.arcs))

    def with_arcs(self, add: Iterable[Arc] = (), remove: Iterable[Arc] = (), n: Optional[int] = None) -> "Digraph":
        drop = set(remove)
        arcs = [a for a in self.arcs if a not in drop]
        arcs.extend(add)
        return Digraph(self.n if n is None else n, arcs)

    def weak_components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp, stack = [], [s]
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in self._out[v] + self._in[v]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    # -- dunder -----------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, Digraph) and self.n == other.n and self.arcs == other.arcs

    def __hash__(self):
        return hash((self.n, self.arcs))

    def __repr__(self):
        return f"Digraph(n={self.n}, arcs={len(self.arcs)})"


class Acyclicity(NamedTuple):
    acyclic: bool
    order: Optional[tuple[int, ...]]
    cycle: Optional[tuple[int, ...]]

    def __bool__(self):
        return self.acyclic


def is_acyclic(D: Digraph) -> Acyclicity:
    """Kahn's algorithm taking the smallest available vertex first.

    On success ``order`` is a topological order; otherwise ``cycle`` lists the
    vertices of a directed cycle in traversal order.
    """
    indeg = [D.indegree(v) for v in range(D.n)]
    heap = [v for v in range(D.n) if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for w in D.out_neighbors(v):
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    if len(order) == D.n:
        return Acyclicity(True, tuple(order), None)
    return Acyclicity(False, None, _find_cycle(D, {v for v in range(D.n) if indeg[v] > 0}))


def _find_cycle(D: Digraph, left: set[int]) -> tuple[int, ...]:
    # every vertex in `left` keeps an in-neighbour in `left`; walk backwards until a repeat
    v = min(left)
    seen: dict[int, int] = {}
    path = []
    while v not in seen:
        seen[v] = len(path)
        path.append(v)
        v = min(u for u in D.in_neighbors(v) if u in left)
    cyc = path[seen[v]:]
    cyc.reverse()
    i = cyc.index(min(cyc))
    return tuple(cyc[i:] + cyc[:i])


def topological_order(D: Digraph) -> tuple[int, ...]:
    res = is_acyclic(D)
    if not res:
        raise ValueError(f"digraph has a directed cycle {res.cycle}")
    return res.order


# -- text formats -------------------------------------------------------------


def read_digraph(text: str) -> Digraph:
    """Parse the ``vertices N`` / ``u v`` format; ``#`` starts a comment line."""
    n = None
    arcs: list[Arc] = []
    seen: set[Arc] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "vertices" or not parts[1].isdigit():
                raise DigraphFormatError(f"expected header 'vertices N', got {raw!r}", lineno)
            n = int(parts[1])
            continue
        if len(parts) != 2 or not (parts[0].isdigit() and parts[1].isdigit()):
            raise DigraphFormatError(f"expected arc 'u v', got {raw!r}", lineno)
        u, v = int(parts[0]), int(parts[1])
        if u >= n or v >= n:
            raise DigraphFormatError(f"vertex index out of range in {raw!r} (n={n})", lineno)
        if u == v:
            raise DigraphFormatError(f"self-loop at vertex {u}", lineno)
        if (u, v) in seen:
            raise DigraphFormatError(f"duplicate arc {u} {v}", lineno)
        seen.add((u, v))
        arcs.append((u, v))
    if n is None:
        raise DigraphFormatError("missing 'vertices N' header")
    return Digraph(n, arcs)


def write_digraph(D: Digraph, comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"vertices {D.n}")
    lines.extend(f"{u} {v}" for u, v in D.arcs)
    return "\n".join(lines) + "\n"


def to_dot(D: Digraph, name: str = "D") -> str:
    body = "".join(f"  {u} -> {v};\n" for u, v in D.arcs)
    isolated = "".join(f"  {v};\n" for v in range(D.n) if not D.out_neighbors(v) and not D.in_neighbors(v))
    return f"digraph {name} {{\n{isolated}{body}}}\n"


# -- undirected graphs (reduction inputs) ---------------------------------------


class Graph(NamedTuple):
    """Simple undirected graph on ``0..n-1``; edges stored as sorted pairs ``u < v``."""

    n: int
    edges: tuple[tuple[int, int], ...]

    @classmethod
    def make(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        es = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"bad edge {u} {v} for n={n}")
            es.add((min(u, v), max(u, v)))
        return cls(n, tuple(sorted(es)))

    def degree(self, v: int) -> int:
        return sum(v in e for e in self.edges)


def read_graph(text: str) -> Graph:
    n = None
    edges = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "graph" or not parts[1].isdigit():
                raise DigraphFormatError(f"expected header 'graph N', got {raw!r}", lineno)
            n = int(parts[1])
            continue
        if len(parts) != 2 or not (parts[0].isdigit() and parts[1].isdigit()):
            raise DigraphFormatError(f"expected edge 'u v', got {raw!r}", lineno)
        u, v = int(parts[0]), int(parts[1])
        if not u < v:
            raise DigraphFormatError(f"edge must satisfy u < v, got {raw!r}", lineno)
        if v >= n:
            raise DigraphFormatError(f"vertex index out of range in {raw!r} (n={n})", lineno)
        if (u, v) in seen:
            raise DigraphFormatError(f"duplicate edge {u} {v}", lineno)
        seen.add((u, v))
        edges.append((u, v))
    if n is None:
        raise DigraphFormatError("missing 'graph N' header")
    return Graph.make(n, edges)


def write_graph(G: Graph) -> str:
    return "".join([f"graph {G.n}\n"] + [f"{u} {v}\n" for u, v in G.edges])
