"""k-cut covers in their three equivalent forms and the conversions between them.

A characteristic set is an ``int`` bitmask: element ``a`` (1-based) is bit
``a - 1``.  A :class:`CutCover` assigns one such mask to every vertex; it is a
valid cover of ``D`` iff ``C(u)`` is not a subset of ``C(v)`` for every arc
``uv``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Iterable, NamedTuple, Optional, Sequence

from .digraph import Digraph

MAX_K = 30

CharSet = int


class InvalidCertificateError(ValueError):
    pass


def charset(elements: Iterable[int]) -> CharSet:
    mask = 0
    for a in elements:
        if a < 1:
            raise ValueError(f"set element {a} must be >= 1")
        mask |= 1 << (a - 1)
    return mask


def elements(mask: CharSet) -> list[int]:
    out = []
    a = 1
    while mask:
        if mask & 1:
            out.append(a)
        mask >>= 1
        a += 1
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def is_subset(a: CharSet, b: CharSet) -> bool:
    return a & ~b == 0


def _check_k(k: int) -> None:
    if not 0 <= k <= MAX_K:
        raise ValueError(f"k must lie in 0..{MAX_K}, got {k}")


class Verdict(NamedTuple):
    """Outcome of a verifier: ``ok`` plus the first offending item, if any."""

    ok: bool
    witness: Any = None

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class CutCover:
    k: int
    sets: tuple[CharSet, ...]

    def __post_init__(self):
        _check_k(self.k)
        object.__setattr__(self, "sets", tuple(self.sets))
        full = (1 << self.k) - 1
        for s in self.sets:
            if s < 0 or s & ~full:
                raise ValueError(f"set {elements(s)} not within {{1..{self.k}}}")

    @classmethod
    def from_lists(cls, k: int, sets: Sequence[Iterable[int]]) -> "CutCover":
        return cls(k, tuple(charset(s) for s in sets))

    def as_lists(self) -> list[list[int]]:
        return [elements(s) for s in self.sets]

    def __len__(self):
        return len(self.sets)

    def __getitem__(self, v: int) -> CharSet:
        return self.sets[v]


@dataclass(frozen=True)
class ArcColoring:
    """One colour in ``1..k`` per arc, aligned with ``D.arcs``."""

    k: int
    colors: tuple[int, ...]

    def __post_init__(self):
        _check_k(self.k)
        object.__setattr__(self, "colors", tuple(self.colors))
        for c in self.colors:
            if not 1 <= c <= self.k:
                raise ValueError(f"colour {c} outside 1..{self.k}")


@dataclass(frozen=True)
class CutFamily:
    """Vertex subsets ``U_1..U_k``; cut ``a`` is ``{uv : u in U_a, v not in U_a}``."""

    k: int
    cuts: tuple[frozenset, ...]

    def __post_init__(self):
        _check_k(self.k)
        object.__setattr__(self, "cuts", tuple(frozenset(U) for U in self.cuts))
        if len(self.cuts) != self.k:
            raise ValueError(f"expected {self.k} cuts, got {len(self.cuts)}")


# -- verifiers --------------------------------------------------------------------


def verify_cover(D: Digraph, C: CutCover) -> Verdict:
    """True iff ``C(u) ⊄ C(v)`` on every arc; otherwise the first bad arc."""
    if len(C.sets) != D.n:
        raise ValueError(f"cover has {len(C.sets)} sets for {D.n} vertices")
    sets = C.sets
    for u, v in D.arcs:
        if sets[u] & ~sets[v] == 0:
            return Verdict(False, (u, v))
    return Verdict(True)


def verify_arc_coloring(D: Digraph, col: ArcColoring) -> Verdict:
    """True iff no two consecutive arcs ``uv, vw`` share a colour."""
    if len(col.colors) != D.num_arcs:
        raise ValueError(f"colouring has {len(col.colors)} colours for {D.num_arcs} arcs")
    for v in range(D.n):
        outs = {}
        for w in D.out_neighbors(v):
            outs.setdefault(col.colors[D.arc_index(v, w)], (v, w))
        for u in D.in_neighbors(v):
            c = col.colors[D.arc_index(u, v)]
            if c in outs:
                return Verdict(False, ((u, v), outs[c]))
    return Verdict(True)


def verify_cuts(D: Digraph, F: CutFamily) -> Verdict:
    """True iff every arc lies in some cut of ``F``; otherwise the first uncovered arc."""
    for u, v in D.arcs:
        if not any(u in U and v not in U for U in F.cuts):
            return Verdict(False, (u, v))
    return Verdict(True)


def _require(verdict: Verdict, what: str) -> None:
    if not verdict:
        raise InvalidCertificateError(f"invalid {what}: violated at {verdict.witness}")


# -- conversions ---------------------------------------------------------------------


def cover_to_cuts(C: CutCover, D: Optional[Digraph] = None) -> CutFamily:
    """``U_a = {v : a in C(v)}``.  When ``D`` is given the cover is checked first."""
    if D is not None:
        _require(verify_cover(D, C), "cover")
    return CutFamily(C.k, tuple(frozenset(v for v, s in enumerate(C.sets) if s >> a & 1) for a in range(C.k)))


def cuts_to_cover(F: CutFamily, n: int, D: Optional[Digraph] = None) -> CutCover:
    """``C(v) = {a : v in U_a}``."""
    if D is not None:
        _require(verify_cuts(D, F), "cut family")
    sets = [0] * n
    for a, U in enumerate(F.cuts):
        for v in U:
            if not 0 <= v < n:
                raise ValueError(f"vertex {v} out of range")
            sets[v] |= 1 << a
    return CutCover(F.k, tuple(sets))


def cover_to_arc_coloring(D: Digraph, C: CutCover) -> ArcColoring:
    """Colour each arc ``uv`` with the smallest element of ``C(u) \\ C(v)``."""
    _require(verify_cover(D, C), "cover")
    colors = []
    for u, v in D.arcs:
        diff = C.sets[u] & ~C.sets[v]
        colors.append((diff & -diff).bit_length())
    return ArcColoring(C.k, tuple(colors))


def arc_coloring_to_cuts(D: Digraph, col: ArcColoring) -> CutFamily:
    """``U_a`` is the set of tails of colour-``a`` arcs."""
    _require(verify_arc_coloring(D, col), "arc colouring")
    tails: list[set[int]] = [set() for _ in range(col.k)]
    for (u, _), c in zip(D.arcs, col.colors):
        tails[c - 1].add(u)
    return CutFamily(col.k, tuple(tails))


def arc_coloring_to_cover(D: Digraph, col: ArcColoring) -> CutCover:
    return cuts_to_cover(arc_coloring_to_cuts(D, col), D.n)


def cuts_to_arc_coloring(D: Digraph, F: CutFamily) -> ArcColoring:
    return cover_to_arc_coloring(D, cuts_to_cover(F, D.n, D))


# -- JSON ------------------------------------------------------------------------------


def cover_to_json(C: CutCover) -> dict:
    return {"k": C.k, "sets": C.as_lists()}


def cuts_to_json(F: CutFamily) -> dict:
    return {"k": F.k, "cuts": [sorted(U) for U in F.cuts]}


def coloring_to_json(col: ArcColoring) -> dict:
    return {"k": col.k, "colors": list(col.colors)}


def certificate_from_json(data: dict | str):
    """Decode a cover, cut family or arc colouring by its distinguishing key."""
    if isinstance(data, str):
        data = json.loads(data)
    if not isinstance(data, dict) or "k" not in data:
        raise ValueError("certificate JSON must be an object with key 'k'")
    k = int(data["k"])
    if "sets" in data:
        return CutCover.from_lists(k, data["sets"])
    if "cuts" in data:
        return CutFamily(k, tuple(frozenset(int(v) for v in U) for U in data["cuts"]))
    if "colors" in data:
        return ArcColoring(k, tuple(int(c) for c in data["colors"]))
    raise ValueError("certificate JSON needs one of 'sets', 'cuts', 'colors'")


def certificate_to_json(cert) -> dict:
    if isinstance(cert, CutCover):
        return cover_to_json(cert)
    if isinstance(cert, CutFamily):
        return cuts_to_json(cert)
    if isinstance(cert, ArcColoring):
        return coloring_to_json(cert)
    raise TypeError(f"not a certificate: {type(cert).__name__}")


def verify_certificate(D: Digraph, cert) -> Verdict:
    if isinstance(cert, CutCover):
        return verify_cover(D, cert)
    if isinstance(cert, CutFamily):
        return verify_cuts(D, cert)
    if isinstance(cert, ArcColoring):
        return verify_arc_coloring(D, cert)
    raise TypeError(f"not a certificate: {type(cert).__name__}")
