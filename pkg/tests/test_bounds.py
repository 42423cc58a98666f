from fractions import Fraction
from math import ceil, comb, e, floor

import pytest

from cutcover.bounds import (central_binomial, check_mk_bounds, conjecture_threshold, degree_class_bounds,
                             delta_bounds, delta_iii_threshold)


def test_central_binomial():
    assert [central_binomial(k) for k in range(1, 9)] == [1, 2, 3, 6, 10, 20, 35, 70]
    assert central_binomial(2) == 2
    assert central_binomial(64) == comb(64, 32)
    for l in range(1, 31):
        assert central_binomial(2 * l) == 2 * central_binomial(2 * l - 1)
    for l in range(1, 30):
        assert central_binomial(2 * l + 1) * (l + 1) == (2 * l + 1) * central_binomial(2 * l)
    for bad in (0, 65):
        with pytest.raises(ValueError):
            central_binomial(bad)


def test_mk_bounds():
    assert all(check_mk_bounds(k) for k in range(1, 61))
    with pytest.raises(ValueError):
        check_mk_bounds(61)


def test_mk_lower_bound_tight_at_one():
    # 2^k / sqrt(2(k+1)) equals M(1) = 1 exactly
    assert 4 ** 1 == 2 * (1 + 1) * central_binomial(1) ** 2


def test_delta_iii_threshold():
    assert [delta_iii_threshold(k) for k in (2, 3, 4)] == [1, 3, 9]
    with pytest.raises(ValueError):
        delta_iii_threshold(0)


def conj_ok(d, k):
    return Fraction(d ** d, (d + 1) ** (d + 1)) * 2 ** k >= 1


def test_conjecture_threshold_examples():
    assert conjecture_threshold(3) == 2
    assert conjecture_threshold(4) == 5
    assert conjecture_threshold(5) == 11


@pytest.mark.parametrize("k", range(1, 17))
def test_conjecture_threshold_exact_oracle(k):
    d = conjecture_threshold(k)
    assert conj_ok(d, k) and not conj_ok(d + 1, k)


def test_conjecture_threshold_below_2k_over_e():
    for k in range(1, 41):
        assert conjecture_threshold(k) < ceil(2 ** k / e)
    with pytest.raises(ValueError):
        conjecture_threshold(41)


def test_conjecture_threshold_boundary_exact_for_moderate_k():
    # exact comparison of the returned d at k = 20, where d is still small enough
    k = 20
    d = conjecture_threshold(k)
    assert d ** d * 2 ** k >= (d + 1) ** (d + 1)
    assert (d + 1) ** (d + 1) * 2 ** k < (d + 2) ** (d + 2)


def test_delta_bounds_examples():
    assert (delta_bounds(1).lower, delta_bounds(1).upper) == (0, 0)
    assert (delta_bounds(2).lower, delta_bounds(2).upper) == (1, 1)
    assert (delta_bounds(3).lower, delta_bounds(3).upper) == (2, 2)
    assert (delta_bounds(4).lower, delta_bounds(4).upper) == (5, 5)
    b = delta_bounds(5)
    assert (b.lower, b.upper) == (10, 14)
    assert b.provenance["lower"]["5/16 2^k"] == 10
    assert b.to_json()["k"] == 5


def test_delta_bounds_interval_and_conjecture_position():
    for k in range(1, 41):
        b = delta_bounds(k)
        assert b.lower <= b.upper
        assert b.lower >= central_binomial(k) - 1
        assert b.upper <= 2 ** k - 1
    for k in (3, 4):
        assert conjecture_threshold(k) == delta_bounds(k).lower


def test_delta_bounds_r_terms():
    k = 24
    b = delta_bounds(k)
    lows = b.provenance["lower"]
    for r in (2, 4, 8):
        assert lows[f"(1-1/{r})^{r} 2^k"] == floor(Fraction(r - 1, r) ** r * 2 ** k)
    assert "(1-1/16)^16 2^k" not in lows


def test_degree_class_examples():
    for args, expected in [((2, 1), (3, 3)), ((3, 3), (4, 4)), ((6, -1), (5, 5)), ((7, 7), (5, 6)),
                           ((1, 1), (3, 3)), ((2, 2), (4, 4)), ((1, 0), (2, 2)), ((0, 0), (1, 1)),
                           ((-1, -1), (0, 0))]:
        c = degree_class_bounds(*args)
        assert (c.lower, c.upper) == expected, args
    with pytest.raises(ValueError):
        degree_class_bounds(-2, 0)


def test_degree_class_symmetric_monotone():
    grid = {(a, b): degree_class_bounds(a, b) for a in range(-1, 41) for b in range(-1, 41)}
    for (a, b), c in grid.items():
        assert c.lower <= c.upper
        assert (grid[(b, a)].lower, grid[(b, a)].upper) == (c.lower, c.upper)
        if a + 1 <= 40:
            n = grid[(a + 1, b)]
            assert n.lower >= c.lower and n.upper >= c.upper


LOWER_CASES = {(6, -1): 4, (4, 3): 4, (2, 2): 3, (3, -1): 3, (2, -1): 2, (1, 1): 2}


def general_lower(a, b):
    k = 0
    while max(a, b) > comb(k, k // 2) - 1 or a + b > comb(k + 1, (k + 1) // 2) - 2:
        k += 1
    return k


def general_upper(a, b):
    k = 0
    while a + b > comb(k, k // 2) - 2:
        k += 1
    return k


def test_degree_class_consistent_with_general_bounds():
    for a in range(-1, 41):
        for b in range(-1, 41):
            c = degree_class_bounds(a, b)
            assert general_lower(a, b) <= c.lower <= c.upper <= general_upper(a, b)
            exact = [k + 1 for (x, y), k in LOWER_CASES.items() if (x <= a and y <= b) or (y <= a and x <= b)]
            assert c.lower == max([general_lower(a, b)] + exact)
