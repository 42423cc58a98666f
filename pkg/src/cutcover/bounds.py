"""Exact bounds: central binomials, path-power thresholds and degree classes.

Comparisons are exact integer arithmetic (square roots are compared after
squaring), apart from the large-d branch of :func:`conjecture_threshold`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from math import comb

_EXACT_LIMIT = 4096


def central_binomial(k: int) -> int:
    """M(k) = C(k, floor(k/2)), the width of the subset lattice of {1..k}."""
    if not 1 <= k <= 64:
        raise ValueError(f"k must lie in 1..64, got {k}")
    return comb(k, k // 2)


def _M(k: int) -> int:
    # M(0) = 1 is needed by the degree-class bounds at k = 0
    return comb(k, k // 2) if k >= 0 else 0


def check_mk_bounds(k: int) -> bool:
    """Check both the plain and the parity-refined two-sided bounds on M(k).

    Plain:   2^k / sqrt(2(k+1)) <= M(k) <= sqrt(3) 2^k / (2 sqrt(k+1)).
    Odd k:   the upper bound holds with k+2 in place of k+1.
    Even k:  the lower bound holds with k in place of k+1.
    """
    if not 1 <= k <= 60:
        raise ValueError(f"k must lie in 1..60, got {k}")
    m2 = central_binomial(k) ** 2
    p = 4 ** k
    ok = p <= 2 * (k + 1) * m2 and 4 * (k + 1) * m2 <= 3 * p
    if k % 2:
        ok = ok and 4 * (k + 2) * m2 <= 3 * p
    else:
        ok = ok and p <= 2 * k * m2
    return ok


def delta_iii_threshold(k: int) -> int:
    """Largest d with P^d_{2^k+1} covered by k cuts."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return 2 ** k - 2 ** (k // 2) - 2 ** ((k + 1) // 2) + 1


def conjecture_threshold(k: int) -> int:
    """max{d >= 0 : d^d 2^k >= (d+1)^(d+1)}, found by bisection since
    d^d/(d+1)^(d+1) decreases in d.

    Small d is compared exactly.  For large d the powers are far too big, so
    the logarithms are compared at 60 significant digits; equality only
    occurs at d = 1, k = 2, so the comparison is never a tie there.
    """
    if not 1 <= k <= 40:
        raise ValueError(f"k must lie in 1..40, got {k}")
    p = 2 ** k
    log_p = k * Decimal(2).ln()

    def ok(d):
        if d <= _EXACT_LIMIT:
            return d ** d * p >= (d + 1) ** (d + 1)
        return d * Decimal(d).ln() + log_p >= (d + 1) * Decimal(d + 1).ln()

    with localcontext() as ctx:
        ctx.prec = 60
        lo, hi = 0, p  # ok(0) holds and ok(2^k) fails
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if ok(mid):
                lo = mid
            else:
                hi = mid
    return lo


@dataclass(frozen=True)
class DeltaBounds:
    k: int
    lower: int
    upper: int
    provenance: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"k": self.k, "lower": self.lower, "upper": self.upper, "provenance": self.provenance}


_DELTA_EXACT = {1: (0, "derived: M(1)-1 and the 2^k+1 threshold"),
                2: (1, "derived: M(2)-1 and the 2^k+1 threshold"),
                3: (2, "exact: P^3_n covered by 3 cuts iff n <= 10"),
                4: (5, "exact: P^6_n covered by 4 cuts iff n <= 24")}


def delta_bounds(k: int) -> DeltaBounds:
    """Interval for the largest d with every power P_n^d covered by k cuts."""
    if not 1 <= k <= 40:
        raise ValueError(f"k must lie in 1..40, got {k}")
    p = 2 ** k
    lows = {"antichain M(k)-1": _M(k) - 1, "block path 2^k/4": p // 4}
    if k >= 4:
        lows["5/16 2^k"] = 5 * p // 16
    r = 2
    while k >= r * (r.bit_length() - 1):
        lows[f"(1-1/{r})^{r} 2^k"] = (r - 1) ** r * p // r ** r
        r *= 2
    ups = {"2^k-1": p - 1}
    if k >= 3:
        ups["2^k/2-2"] = p // 2 - 2
    lower, upper = max(lows.values()), min(ups.values())
    prov = {"lower": lows, "upper": ups}
    if k in _DELTA_EXACT:
        value, why = _DELTA_EXACT[k]
        assert lower <= value <= upper
        lower = upper = value
        prov["exact"] = why
    assert lower <= upper
    return DeltaBounds(k, lower, upper, prov)


@dataclass(frozen=True)
class DegreeClassBounds:
    dminus: int
    dplus: int
    lower: int
    upper: int

    def to_json(self) -> dict:
        return {"dminus": self.dminus, "dplus": self.dplus, "lower": self.lower, "upper": self.upper}


# c(a, b) <= k and c(a, b) > k for specific pairs; closed under swapping below
_UPPER_TABLE = {(2, 1): 3, (3, 3): 4, (5, 2): 4, (1, 0): 2, (0, 0): 1}
_LOWER_TABLE = {(6, -1): 4, (4, 3): 4, (2, 2): 3, (3, -1): 3, (2, -1): 2, (1, 1): 2}


def _both(table):
    out = dict(table)
    for (a, b), k in table.items():
        out[(b, a)] = k
    return out


_UPPER = _both(_UPPER_TABLE)
_LOWER = _both(_LOWER_TABLE)


def degree_class_bounds(dminus: int, dplus: int) -> DegreeClassBounds:
    """Interval for the least k covering every acyclic digraph in which each
    vertex has indegree <= dminus or outdegree <= dplus.

    Combines the three general bounds with the small exact cases; the class
    grows with either argument and reversing arcs swaps them, so entries are
    propagated monotonically and symmetrically.
    """
    if dminus < -1 or dplus < -1:
        raise ValueError("degree bounds must be >= -1")
    a, b = dminus, dplus
    upper = 0
    while a + b > _M(upper) - 2:
        upper += 1
    for (x, y), k in _UPPER.items():
        if x >= a and y >= b:
            upper = min(upper, k)
    lower = 0
    k = 0
    # the general lower bounds certify c > k; both are monotone in k
    while max(a, b) > _M(k) - 1 or a + b > _M(k + 1) - 2:
        k += 1
        lower = k
    for (x, y), k in _LOWER.items():
        if x <= a and y <= b:
            lower = max(lower, k + 1)
    assert lower <= upper, (a, b, lower, upper)
    return DegreeClassBounds(a, b, lower, upper)
