"""Exact natural-number arithmetic with fixed-width fast paths.

Power sums are the hot spot of the counting engine.  When every power sum
fits in one or two 64-bit limbs they are carried as ``uint64`` numpy
arrays (with explicit carry/overflow detection for the two-limb case);
otherwise the engine escalates to Python integers.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

MASK64 = (1 << 64) - 1

#: arithmetic modes understood by :func:`select_arith`
ARITH_MODES = ("u64", "u128", "bigint")


@dataclass(frozen=True, order=True)
class ExponentPair:
    """The exponent pair ``(c, d)`` with ``1 <= c < d``."""

    c: int
    d: int

    def __post_init__(self) -> None:
        if not (isinstance(self.c, int) and isinstance(self.d, int)):
            raise TypeError("exponents must be integers")
        if not 1 <= self.c < self.d:
            raise ValueError(f"need 1 <= c < d, got c={self.c}, d={self.d}")

    def __iter__(self):
        yield self.c
        yield self.d


def as_exponent_pair(e) -> ExponentPair:
    if isinstance(e, ExponentPair):
        return e
    c, d = e
    return ExponentPair(int(c), int(d))


def pow_nat(x: int, k: int) -> int:
    """Return ``x**k`` exactly; ``x >= 1``, ``k >= 1``."""
    if x < 1 or k < 1:
        raise ValueError(f"pow_nat needs x >= 1 and k >= 1, got ({x}, {k})")
    result = 1
    base = x
    while k:
        if k & 1:
            result *= base
        k >>= 1
        if k:
            base *= base
    return result


def gcd6(xs) -> int:
    """Greatest common divisor of six positive integers."""
    xs = tuple(int(v) for v in xs)
    if len(xs) != 6:
        raise ValueError(f"gcd6 takes exactly six coordinates, got {len(xs)}")
    if min(xs) < 1:
        raise ValueError("gcd6 coordinates must be positive")
    return math.gcd(*xs)


def double_factorial(n: int) -> int:
    """``n!!`` for ``n >= -1``."""
    if n < -1:
        raise ValueError("double factorial undefined below -1")
    result = 1
    while n > 1:
        result *= n
        n -= 2
    return result


# ---------------------------------------------------------------------------
# Moebius function: linear sieve, cached up to the largest argument seen.

_mu_lock = threading.Lock()
_mu_table = np.array([0, 1], dtype=np.int8)


def _linear_sieve_mu(n: int) -> np.ndarray:
    mu = np.zeros(n + 1, dtype=np.int8)
    if n >= 1:
        mu[1] = 1
    is_comp = bytearray(n + 1)
    primes: list[int] = []
    for i in range(2, n + 1):
        if not is_comp[i]:
            primes.append(i)
            mu[i] = -1
        for p in primes:
            ip = i * p
            if ip > n:
                break
            is_comp[ip] = 1
            if i % p == 0:
                mu[ip] = 0
                break
            mu[ip] = -mu[i]
    return mu


def mobius_table(n: int) -> np.ndarray:
    """Array ``mu`` with ``mu[m]`` the Moebius function for ``0 <= m <= n``
    (``mu[0]`` is 0 by convention)."""
    global _mu_table
    table = _mu_table
    if len(table) <= n:
        with _mu_lock:
            if len(_mu_table) <= n:
                _mu_table = _linear_sieve_mu(max(n, 2 * (len(_mu_table) - 1)))
            table = _mu_table
    return table[: n + 1]


def mobius(m: int) -> int:
    if m < 1:
        raise ValueError(f"mobius needs m >= 1, got {m}")
    return int(mobius_table(m)[m])


# ---------------------------------------------------------------------------
# Fixed-width power sums.


def select_arith(B: int, d: int, parts: int = 3) -> str:
    """Pick the narrowest exact representation for sums of ``parts`` d-th
    powers of integers in ``[1, B]``."""
    bound = parts * B**d
    if bound <= MASK64:
        return "u64"
    if bound < 1 << 128:
        return "u128"
    return "bigint"


def limbs_needed(mode: str) -> int:
    return {"u64": 1, "u128": 2}[mode]


def _limbs(values: list[int], mode: str, what: str) -> tuple[np.ndarray, ...]:
    if mode == "bigint":
        return (np.array(values, dtype=object),)
    top = max(values, default=0)
    if mode == "u64":
        if top > MASK64:
            raise OverflowError(f"{what} does not fit in 64 bits")
        return (np.array(values, dtype=np.uint64),)
    if mode == "u128":
        if top >> 128:
            raise OverflowError(f"{what} does not fit in 128 bits")
        hi = np.array([v >> 64 for v in values], dtype=np.uint64)
        lo = np.array([v & MASK64 for v in values], dtype=np.uint64)
        return (hi, lo)
    raise ValueError(f"unknown arithmetic mode {mode!r}")


def power_table(B: int, k: int, mode: str) -> tuple[np.ndarray, ...]:
    """Limb tables ``T`` with ``T[x]`` the limbs of ``x**k`` for ``0 <= x <= B``
    (most significant limb first).  ``bigint`` mode returns one object array."""
    return _limbs([x**k for x in range(B + 1)], mode, f"{B}**{k}")


def add_u64(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise ``a + b`` on uint64; raises OverflowError on wraparound."""
    s = a + b
    if np.any(s < a):
        raise OverflowError("uint64 addition overflowed")
    return s


def add_u128(a: tuple[np.ndarray, np.ndarray], b: tuple[np.ndarray, np.ndarray]):
    """Elementwise 128-bit addition of ``(hi, lo)`` limb pairs.

    Raises OverflowError if any sum is ``>= 2**128``.
    """
    a_hi, a_lo = a
    b_hi, b_lo = b
    lo = a_lo + b_lo
    carry = (lo < a_lo).astype(np.uint64)
    t = b_hi + carry
    hi = a_hi + t
    if np.any(t < b_hi) or np.any(hi < a_hi):
        raise OverflowError("uint128 addition overflowed")
    return hi, lo


def add_limbs(a: tuple, b: tuple, mode: str) -> tuple:
    if mode == "u64":
        return (add_u64(a[0], b[0]),)
    if mode == "u128":
        return add_u128(a, b)
    return (a[0] + b[0],)


def limbs_to_int(limbs, mode: str, i: int) -> int:
    """Recover the exact Python integer at position ``i``."""
    if mode == "u128":
        return (int(limbs[0][i]) << 64) | int(limbs[1][i])
    return int(limbs[0][i])


def power_sum_fixed(xs: np.ndarray, k: int, mode: str) -> tuple[np.ndarray, ...]:
    """Row sums of ``xs**k`` for an ``(n, m)`` array of positive integers,
    using ``mode`` limbs.  Raises OverflowError if a term or sum overflows."""
    xs = np.asarray(xs)
    # powers of the distinct values only; xs may hold values far beyond any table size
    vals, inv = np.unique(xs, return_inverse=True)
    table = _limbs([int(v) ** k for v in vals.tolist()], mode, f"power {k}")
    inv = inv.reshape(xs.shape)
    acc = tuple(t[inv[:, 0]] for t in table)
    for j in range(1, xs.shape[1]):
        acc = add_limbs(acc, tuple(t[inv[:, j]] for t in table), mode)
    return acc


def power_sum(xs, k: int) -> list[int]:
    """Exact row sums of ``xs**k``.

    Tries the 64-bit path, then the 128-bit path, escalating to Python
    integers when both overflow.
    """
    rows = [[int(v) for v in row] for row in xs]
    if max((max(r) for r in rows if r), default=0) <= MASK64:
        arr = np.array(rows, dtype=np.uint64)
        for mode in ("u64", "u128"):
            try:
                limbs = power_sum_fixed(arr, k, mode)
            except OverflowError:
                continue
            return [limbs_to_int(limbs, mode, i) for i in range(len(rows))]
    return [sum(v**k for v in row) for row in rows]
