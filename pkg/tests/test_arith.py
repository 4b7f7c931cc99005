import math
import random

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from threepowers.arith import (
    MASK64,
    ExponentPair,
    add_u128,
    double_factorial,
    gcd6,
    mobius,
    mobius_table,
    pow_nat,
    power_sum,
    power_sum_fixed,
    select_arith,
)


@pytest.mark.parametrize("x, k, expected", [(2, 10, 1024), (1, 7, 1), (1, 123, 1), (10, 9, 10**9)])
def test_pow_nat_examples(x, k, expected):
    assert pow_nat(x, k) == expected


def test_pow_nat_matches_repeated_multiplication():
    for x in range(1, 51):
        acc = 1
        for k in range(1, 13):
            acc *= x
            assert pow_nat(x, k) == acc


def test_pow_nat_rejects_bad_input():
    with pytest.raises(ValueError):
        pow_nat(0, 3)
    with pytest.raises(ValueError):
        pow_nat(3, 0)


@pytest.mark.parametrize("m, mu", [(1, 1), (4, 0), (30, -1), (2, -1), (6, 1), (12, 0)])
def test_mobius_examples(m, mu):
    assert mobius(m) == mu


def test_mobius_against_sympy():
    table = mobius_table(3000)
    assert [int(v) for v in table[1:]] == [int(sympy.mobius(m)) for m in range(1, 3001)]


def test_mertens_style_identity():
    n_max = 10**4
    mu = mobius_table(n_max).astype(np.int64)
    ms = np.arange(1, n_max + 1)
    for n in range(1, n_max + 1):
        assert int(np.dot(mu[1 : n + 1], n // ms[:n])) == 1


def test_mobius_rejects_zero():
    with pytest.raises(ValueError):
        mobius(0)


@pytest.mark.parametrize(
    "xs, g",
    [((1, 5, 6, 2, 3, 7), 1), ((2, 8, 8, 4, 4, 10), 2), ((6, 10, 15, 6, 10, 15), 1), ((9,) * 6, 9)],
)
def test_gcd6_examples(xs, g):
    assert gcd6(xs) == g


def test_gcd6_rejects_bad_input():
    with pytest.raises(ValueError):
        gcd6((1, 2, 3))
    with pytest.raises(ValueError):
        gcd6((0, 2, 3, 4, 5, 6))


def test_exponent_pair_validation():
    assert tuple(ExponentPair(1, 2)) == (1, 2)
    for c, d in [(2, 2), (3, 2), (0, 1)]:
        with pytest.raises(ValueError):
            ExponentPair(c, d)


def test_double_factorial():
    assert [double_factorial(n) for n in (1, 3, 5, 7)] == [1, 3, 15, 105]


def test_select_arith_thresholds():
    assert select_arith(400, 3) == "u64"
    assert select_arith(400, 8) == "u128"
    assert select_arith(400, 20) == "bigint"
    edge = int(sympy.integer_nthroot(MASK64 // 3, 3)[0])
    assert 3 * edge**3 <= MASK64 < 3 * (edge + 1) ** 3
    assert select_arith(edge, 3) == "u64"
    assert select_arith(edge + 1, 3) == "u128"


def _straddling_rows(rng, n):
    """Triples with x^k near 2^128 (and near 2^64) so some sums overflow."""
    rows, ks = [], []
    for _ in range(n):
        k = rng.randint(2, 12)
        bits = rng.choice([64, 128])
        top = int(round(2 ** (bits / k)))
        lo = max(1, top - max(2, top // 50))
        hi = top + max(2, top // 50)
        rows.append([rng.randint(lo, hi) for _ in range(3)])
        ks.append(k)
    return rows, ks


def test_fixed_width_matches_bigint_across_overflow_boundary():
    rng = random.Random(20261015)
    rows, ks = _straddling_rows(rng, 10**4)
    overflowed = 0
    for row, k in zip(rows, ks):
        exact = sum(v**k for v in row)
        if max(row) ** k < 1 << 128:
            try:
                limbs = power_sum_fixed(np.array([row]), k, "u128")
            except OverflowError:
                overflowed += 1
                assert exact >= 1 << 128
            else:
                assert exact < 1 << 128
                assert (int(limbs[0][0]) << 64) | int(limbs[1][0]) == exact
        assert power_sum([row], k) == [exact]
    assert overflowed > 0


def test_add_u128_detects_carry_out():
    top = np.array([MASK64], dtype=np.uint64)
    one = np.array([1], dtype=np.uint64)
    zero = np.array([0], dtype=np.uint64)
    hi, lo = add_u128((zero, top), (zero, one))
    assert (int(hi[0]), int(lo[0])) == (1, 0)
    with pytest.raises(OverflowError):
        add_u128((top, top), (zero, one))


@given(st.lists(st.integers(1, 2**40), min_size=3, max_size=3), st.integers(1, 9))
def test_power_sum_exact(row, k):
    assert power_sum([row], k) == [sum(v**k for v in row)]
