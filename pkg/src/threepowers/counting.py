"""Solution counts for the paired equal-sums-of-three-powers equations.

All counts are of ORDERED sextuples ``(x0, ..., x5)`` of positive integers
in ``[1, B]`` with

    x0^c + x1^c + x2^c = x3^c + x4^c + x5^c,
    x0^d + x1^d + x2^d = x3^d + x4^d + x5^d.

A solution is trivial when ``(x3, x4, x5)`` is a permutation of
``(x0, x1, x2)``.
"""

from __future__ import annotations

import itertools
import math
import sys
from dataclasses import dataclass
from typing import Optional

from .arith import ExponentPair, as_exponent_pair, gcd6, mobius_table
from .enumerator import (
    DEFAULT_MEMORY_BUDGET,
    AggregateTable,
    CanonicalTriple,
    CollisionSummary,
    PowerKey,
    aggregate,
    summarize,
)

ORACLE_MAX_B = 12


@dataclass(frozen=True)
class CountReport:
    B: int
    exponents: ExponentPair
    total_ordered: int
    trivial_ordered: int
    nontrivial_ordered: int
    primitive_nontrivial: Optional[int] = None

    def __post_init__(self) -> None:
        if self.total_ordered != self.trivial_ordered + self.nontrivial_ordered:
            raise ValueError("total must equal trivial + nontrivial")


@dataclass(frozen=True, order=True)
class SolutionPair:
    """An unordered pair of distinct multisets with equal power sums."""

    height: int
    left: CanonicalTriple
    right: CanonicalTriple
    key: PowerKey
    gcd: int

    @property
    def ordered_solutions(self) -> int:
        """Ordered sextuples represented by this pair (both orientations)."""
        return 2 * self.left.weight * self.right.weight

    def coordinates(self) -> tuple[int, ...]:
        return (*self.left, *self.right)


def trivial_count_closed_form(B: int) -> int:
    """Exact number of ordered trivial sextuples with entries in ``[1, B]``."""
    if B < 1:
        raise ValueError(f"B must be >= 1, got {B}")
    return 6 * B**3 - 9 * B**2 + 4 * B


def report_from_table(table, B: Optional[int] = None) -> CountReport:
    """Count report at height ``B`` (default: the table's own bound).

    ``table`` is an :class:`AggregateTable` or a :class:`CollisionSummary`.
    For ``B`` below the table's bound the non-trivial count is read off the
    height profile and the trivial count is exponent independent.
    """
    top = table.B
    B = top if B is None else B
    if not 1 <= B <= top:
        raise ValueError(f"B={B} outside [1, {top}]")
    profile = table.nontrivial_profile()
    if B == top:
        if isinstance(table, AggregateTable):
            table = CollisionSummary.of(table)
        total = table.total_ordered
        trivial = table.trivial_ordered
        nontrivial = total - trivial
        if nontrivial != profile[B]:
            raise RuntimeError("height profile disagrees with key aggregates")
    else:
        trivial = trivial_count_closed_form(B)
        nontrivial = profile[B]
        total = trivial + nontrivial
    primitive = _mobius_invert(profile, B)
    return CountReport(B, table.exponents, total, trivial, nontrivial, primitive)


def _mobius_invert(profile: list[int], B: int) -> int:
    mu = mobius_table(B)
    return sum(int(mu[m]) * profile[B // m] for m in range(1, B + 1) if mu[m])


def count_report(
    e,
    B: int,
    *,
    shard_count: int = 1,
    workers: int = 1,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
    arith: Optional[str] = None,
) -> CountReport:
    """Total, trivial, non-trivial and primitive non-trivial ordered counts."""
    e = as_exponent_pair(e)
    if B < 1:
        raise ValueError(f"B must be >= 1, got {B}")
    summary = summarize(
        B, e, shard_count=shard_count, workers=workers, memory_budget=memory_budget, arith=arith
    )
    return report_from_table(summary)


def nontrivial_profile(e, B: int, **kwargs) -> list[int]:
    """``[N(0), N(1), ..., N(B)]`` from a single enumeration at ``B``."""
    return summarize(B, as_exponent_pair(e), **kwargs).nontrivial_profile()


def primitive_nontrivial(e, B: int, **kwargs) -> int:
    """Ordered non-trivial solutions with coprime coordinates.

    Moebius inversion of ``N(B) = sum_m N_prim(B // m)``.
    """
    if B < 1:
        raise ValueError(f"B must be >= 1, got {B}")
    return _mobius_invert(nontrivial_profile(e, B, **kwargs), B)


def brute_force_oracle(e, B: int) -> CountReport:
    """Count by iterating over all ``B**6`` ordered sextuples.

    Independent of the enumerator: no canonical triples, no weights, no
    hashing, and primitivity is decided by a direct gcd.
    """
    e = as_exponent_pair(e)
    if B < 1:
        raise ValueError(f"B must be >= 1, got {B}")
    if B > ORACLE_MAX_B:
        raise ValueError(
            f"brute-force oracle is O(B^6) and refuses B={B} > {ORACLE_MAX_B}; "
            "use count_report for larger B"
        )
    c, d = e.c, e.d
    rng = range(1, B + 1)
    sides = []
    for t in itertools.product(rng, repeat=3):
        sides.append((t, t[0] ** c + t[1] ** c + t[2] ** c, t[0] ** d + t[1] ** d + t[2] ** d, sorted(t)))
    total = trivial = primitive = 0
    for left, lc, ld, lsorted in sides:
        for right, rc, rd, rsorted in sides:
            if lc != rc or ld != rd:
                continue
            total += 1
            if lsorted == rsorted:
                trivial += 1
            elif math.gcd(*left, *right) == 1:
                primitive += 1
    return CountReport(B, e, total, trivial, total - trivial, primitive)


def list_nontrivial(e, B: int, cap: Optional[int] = None, **kwargs) -> list[SolutionPair]:
    """Non-trivial solutions as unordered multiset pairs, sorted by
    ``(height, left, right)``; at most ``cap`` of them (all if ``None``).

    Every pair is re-verified with exact arithmetic before being returned.
    """
    e = as_exponent_pair(e)
    if B < 1:
        raise ValueError(f"B must be >= 1, got {B}")
    if cap is not None and cap < 1:
        raise ValueError("cap must be positive")
    table = aggregate(B, e, witness_cap=sys.maxsize, **kwargs)
    out: list[SolutionPair] = []
    for i in table.colliding().tolist():
        key = table.key_at(i)
        triples = table.witnesses_at(i)
        for left, right in itertools.combinations(triples, 2):
            if left.power_key(e) != key or right.power_key(e) != key:
                raise RuntimeError(f"key re-verification failed for {left} / {right}")
            coords = (*left, *right)
            out.append(SolutionPair(max(coords), left, right, key, gcd6(coords)))
    out.sort()
    return out if cap is None else out[:cap]
