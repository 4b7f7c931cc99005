"""Meet-in-the-middle enumeration of canonical triples.

Every sorted triple ``x0 <= x1 <= x2`` in ``[1, B]`` is mapped to its pair of
power sums ``(x0^c + x1^c + x2^c, x0^d + x1^d + x2^d)``.  Triples sharing a
key are aggregated; the collision statistics of those aggregates are all the
counting layer needs.

Work is split into shards by a hash of the exact key.  Each shard replays the
whole triple stream and keeps only its own keys, so shards are independent
and a merge is just a sort of the concatenated tables.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from .arith import (
    MASK64,
    ExponentPair,
    add_limbs,
    as_exponent_pair,
    limbs_needed,
    power_table,
    select_arith,
)

DEFAULT_MEMORY_BUDGET = 2 * 1024**3
DEFAULT_WITNESS_CAP = 64


class MemoryBudgetExceeded(RuntimeError):
    """A shard would not fit in the memory budget."""

    def __init__(self, message: str, suggested_shards: int):
        super().__init__(message)
        self.suggested_shards = suggested_shards


def triple_weight(x0: int, x1: int, x2: int) -> int:
    """Number of ordered arrangements of the multiset ``{x0, x1, x2}``."""
    distinct = len({x0, x1, x2})
    return (1, 3, 6)[distinct - 1]


@dataclass(frozen=True, order=True)
class CanonicalTriple:
    x0: int
    x1: int
    x2: int
    weight: int = field(init=False, compare=False)

    def __post_init__(self) -> None:
        if not 1 <= self.x0 <= self.x1 <= self.x2:
            raise ValueError(f"not a canonical triple: {(self.x0, self.x1, self.x2)}")
        object.__setattr__(self, "weight", triple_weight(self.x0, self.x1, self.x2))

    def __iter__(self):
        yield self.x0
        yield self.x1
        yield self.x2

    def __repr__(self) -> str:
        return f"CanonicalTriple({self.x0}, {self.x1}, {self.x2}, w={self.weight})"

    def power_key(self, e) -> PowerKey:
        c, d = as_exponent_pair(e)
        return PowerKey(
            self.x0**c + self.x1**c + self.x2**c,
            self.x0**d + self.x1**d + self.x2**d,
        )


@dataclass(frozen=True, order=True)
class PowerKey:
    sc: int
    sd: int


@dataclass(frozen=True)
class KeyAggregate:
    key: PowerKey
    sum_w: int
    sum_w2: int
    count: int
    witnesses: tuple[CanonicalTriple, ...] = ()


def canonical_triples(B: int) -> Iterator[CanonicalTriple]:
    """All sorted triples in ``[1, B]``, lexicographically ascending."""
    if B < 1:
        raise ValueError(f"B must be >= 1, got {B}")
    for x0 in range(1, B + 1):
        for x1 in range(x0, B + 1):
            for x2 in range(x1, B + 1):
                yield CanonicalTriple(x0, x1, x2)


def triple_count(B: int) -> int:
    return B * (B + 1) * (B + 2) // 6


# ---------------------------------------------------------------------------
# shard hashing (splitmix64 finaliser over the low 64 bits of each sum)

_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_GOLDEN = 0x9E3779B97F4A7C15


def _mix_int(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def _mix_np(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def key_hash(sc: int, sd: int) -> int:
    """64-bit shard hash of an exact key."""
    return _mix_int((sc & MASK64) ^ _mix_int((sd & MASK64) + _GOLDEN))


def key_hash_array(sc_lo: np.ndarray, sd_lo: np.ndarray) -> np.ndarray:
    return _mix_np(sc_lo ^ _mix_np(sd_lo + np.uint64(_GOLDEN)))


def shard_of(key: PowerKey, shard_count: int) -> int:
    return key_hash(key.sc, key.sd) % shard_count


# ---------------------------------------------------------------------------
# aggregate table


@dataclass(eq=False)
class AggregateTable:
    """Per-key aggregates, sorted by exact key ``(sc, sd)``.

    ``keys`` holds the limbs of ``sc`` followed by those of ``sd`` (most
    significant first; a single object column each in ``bigint`` mode).
    ``profile[b]`` is the increment of the non-trivial ordered count when
    the height bound grows from ``b - 1`` to ``b``.
    """

    B: int
    exponents: ExponentPair
    mode: str
    keys: tuple[np.ndarray, ...]
    sum_w: np.ndarray
    sum_w2: np.ndarray
    count: np.ndarray
    profile: np.ndarray
    witness_cap: Optional[int] = None
    witness_len: Optional[np.ndarray] = None
    witness_rows: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return len(self.sum_w)

    @property
    def _limbs(self) -> int:
        return 1 if self.mode == "bigint" else limbs_needed(self.mode)

    def key_at(self, i: int) -> PowerKey:
        n = self._limbs
        vals = [int(col[i]) for col in self.keys]
        if n == 1:
            return PowerKey(vals[0], vals[1])
        return PowerKey((vals[0] << 64) | vals[1], (vals[2] << 64) | vals[3])

    def witnesses_at(self, i: int) -> tuple[CanonicalTriple, ...]:
        if self.witness_rows is None:
            return ()
        start = int(self._witness_offsets()[i])
        rows = self.witness_rows[start : start + int(self.witness_len[i])]
        return tuple(CanonicalTriple(*map(int, r)) for r in rows)

    def _witness_offsets(self) -> np.ndarray:
        off = getattr(self, "_woff", None)
        if off is None:
            off = np.concatenate(([0], np.cumsum(self.witness_len)[:-1])).astype(np.int64)
            self._woff = off
        return off

    def __getitem__(self, i: int) -> KeyAggregate:
        return KeyAggregate(
            self.key_at(i),
            int(self.sum_w[i]),
            int(self.sum_w2[i]),
            int(self.count[i]),
            self.witnesses_at(i),
        )

    def __iter__(self) -> Iterator[KeyAggregate]:
        for i in range(len(self)):
            yield self[i]

    def colliding(self) -> np.ndarray:
        """Indices of keys shared by at least two canonical triples."""
        return np.flatnonzero(self.count >= 2)

    def total_ordered(self) -> int:
        return _exact_square_sum(self.sum_w)

    def trivial_ordered(self) -> int:
        return _exact_sum(self.sum_w2)

    def nontrivial_profile(self) -> list[int]:
        """``N(b)`` for ``b = 0..B`` as exact integers."""
        out = [0]
        acc = 0
        for v in self.profile[1:].tolist():
            acc += v
            out.append(acc)
        return out

    def digest(self) -> str:
        """SHA-256 over the full table contents."""
        h = hashlib.sha256()
        h.update(f"{self.B}|{self.exponents.c}|{self.exponents.d}|{self.mode}".encode())
        for col in self.keys:
            if col.dtype == object:
                h.update(",".join(map(str, col.tolist())).encode())
            else:
                h.update(np.ascontiguousarray(col).tobytes())
        for arr in (self.sum_w, self.sum_w2, self.count, self.profile):
            h.update(np.ascontiguousarray(arr, dtype=np.int64).tobytes())
        if self.witness_rows is not None:
            h.update(np.ascontiguousarray(self.witness_len, dtype=np.int64).tobytes())
            h.update(np.ascontiguousarray(self.witness_rows, dtype=np.int64).tobytes())
        return h.hexdigest()

    def same_as(self, other: AggregateTable) -> bool:
        return self.digest() == other.digest()

    @classmethod
    def merge(cls, tables: list[AggregateTable]) -> AggregateTable:
        """Combine shard tables into one canonical, key-sorted table."""
        if not tables:
            raise ValueError("nothing to merge")
        first = tables[0]
        for t in tables[1:]:
            if (t.B, t.exponents, t.mode, t.witness_cap) != (
                first.B,
                first.exponents,
                first.mode,
                first.witness_cap,
            ):
                raise ValueError("cannot merge tables from different runs")
        keys = tuple(np.concatenate([t.keys[j] for t in tables]) for j in range(len(first.keys)))
        sum_w = np.concatenate([t.sum_w for t in tables])
        sum_w2 = np.concatenate([t.sum_w2 for t in tables])
        count = np.concatenate([t.count for t in tables])
        profile = np.sum([t.profile for t in tables], axis=0).astype(np.int64)
        order = _key_order(keys, first.mode)
        keys = tuple(col[order] for col in keys)
        if len(order) > 1 and not np.all(_starts(keys)):
            raise ValueError("duplicate keys across shards")
        wlen = wrows = None
        if first.witness_rows is not None:
            wlen_all = np.concatenate([t.witness_len for t in tables])
            wrows_all = np.concatenate([t.witness_rows for t in tables])
            offsets = np.concatenate(([0], np.cumsum(wlen_all)[:-1])).astype(np.int64)
            wlen = wlen_all[order]
            wrows = wrows_all[_gather_segments(offsets[order], wlen)]
        return cls(
            first.B,
            first.exponents,
            first.mode,
            keys,
            sum_w[order],
            sum_w2[order],
            count[order],
            profile,
            first.witness_cap,
            wlen,
            wrows,
        )


def _exact_sum(a: np.ndarray) -> int:
    if len(a) == 0:
        return 0
    if int(a.max()) * len(a) < 2**62:
        return int(a.sum())
    return sum(a.tolist())


def _exact_square_sum(a: np.ndarray) -> int:
    if len(a) == 0:
        return 0
    top = int(a.max())
    if top * top * len(a) < 2**62:
        return int(np.dot(a, a))
    return sum(v * v for v in a.tolist())


def _gather_segments(starts: np.ndarray, lengths: np.ndarray) -> np.ndarray:
    total = int(lengths.sum())
    if total == 0:
        return np.zeros(0, dtype=np.int64)
    excl = np.concatenate(([0], np.cumsum(lengths)[:-1]))
    return np.repeat(starts - excl, lengths) + np.arange(total)


def _key_order(keys: tuple[np.ndarray, ...], mode: str) -> np.ndarray:
    n = len(keys[0])
    if mode == "bigint":
        sc, sd = keys
        return np.array(sorted(range(n), key=lambda i: (sc[i], sd[i])), dtype=np.int64)
    if mode == "u64" and n:
        sc, sd = keys
        top_sd = int(sd.max())
        if int(sc.max()) * (top_sd + 1) + top_sd <= MASK64:
            return np.argsort(sc * np.uint64(top_sd + 1) + sd, kind="stable")
    return np.lexsort(tuple(reversed(keys)))


def _starts(sorted_keys: tuple[np.ndarray, ...]) -> np.ndarray:
    """Boolean mask marking the first row of each run of equal keys."""
    n = len(sorted_keys[0])
    flag = np.zeros(n, dtype=bool)
    if n == 0:
        return flag
    flag[0] = True
    for col in sorted_keys:
        flag[1:] |= np.asarray(col[1:] != col[:-1], dtype=bool)
    return flag


# ---------------------------------------------------------------------------
# one shard


def _row_bytes(mode: str) -> int:
    if mode == "bigint":
        return 400
    cols = 2 * limbs_needed(mode)
    return 2 * (8 * cols + 3 * 4 + 8) + 16


def _check_budget(rows: int, mode: str, shard_count: int, budget: int) -> None:
    need = rows * _row_bytes(mode)
    if need > budget:
        per_shard = max(budget // _row_bytes(mode), 1)
        suggested = max(shard_count + 1, math.ceil(rows * shard_count / per_shard))
        raise MemoryBudgetExceeded(
            f"shard needs ~{need / 2**20:.0f} MiB for {rows} triples, "
            f"budget is {budget / 2**20:.0f} MiB; increase shard_count "
            f"to at least {suggested}",
            suggested,
        )


def _collect_fixed(B: int, e: ExponentPair, mode: str, shard_index: int, shard_count: int):
    tc = power_table(B, e.c, mode)
    td = power_table(B, e.d, mode)
    i1, i2 = np.triu_indices(B)
    p1 = (i1 + 1).astype(np.int64)
    p2 = (i2 + 1).astype(np.int64)
    pc = add_limbs(tuple(t[p1] for t in tc), tuple(t[p2] for t in tc), mode)
    pd = add_limbs(tuple(t[p1] for t in td), tuple(t[p2] for t in td), mode)
    first = np.searchsorted(p1, np.arange(B + 2), side="left")

    chunks: list[tuple] = []
    for x0 in range(1, B + 1):
        s = first[x0]
        sc = add_limbs(tuple(a[s:] for a in pc), tuple(t[x0] for t in tc), mode)
        sd = add_limbs(tuple(a[s:] for a in pd), tuple(t[x0] for t in td), mode)
        a1 = p1[s:]
        a2 = p2[s:]
        if shard_count > 1:
            h = key_hash_array(sc[-1], sd[-1])
            keep = (h % np.uint64(shard_count)) == np.uint64(shard_index)
            sc = tuple(a[keep] for a in sc)
            sd = tuple(a[keep] for a in sd)
            a1 = a1[keep]
            a2 = a2[keep]
        chunks.append((sc, sd, x0, a1, a2))

    nl = len(tc)
    keys = tuple(np.concatenate([ch[0][j] for ch in chunks]) for j in range(nl)) + tuple(
        np.concatenate([ch[1][j] for ch in chunks]) for j in range(nl)
    )
    dt = np.uint16 if B < 2**16 else np.uint32
    x0 = np.concatenate([np.full(len(ch[3]), ch[2], dtype=dt) for ch in chunks])
    x1 = np.concatenate([ch[3] for ch in chunks]).astype(dt)
    x2 = np.concatenate([ch[4] for ch in chunks]).astype(dt)
    return keys, x0, x1, x2


def _collect_bigint(B: int, e: ExponentPair, shard_index: int, shard_count: int):
    c, d = e.c, e.d
    pc = [x**c for x in range(B + 1)]
    pd = [x**d for x in range(B + 1)]
    sc_l, sd_l, rows = [], [], []
    for x0 in range(1, B + 1):
        for x1 in range(x0, B + 1):
            for x2 in range(x1, B + 1):
                sc = pc[x0] + pc[x1] + pc[x2]
                sd = pd[x0] + pd[x1] + pd[x2]
                if shard_count > 1 and key_hash(sc, sd) % shard_count != shard_index:
                    continue
                sc_l.append(sc)
                sd_l.append(sd)
                rows.append((x0, x1, x2))
    keys = (np.array(sc_l + [None], dtype=object)[:-1], np.array(sd_l + [None], dtype=object)[:-1])
    xs = np.array(rows, dtype=np.int64).reshape(-1, 3)
    return keys, xs[:, 0], xs[:, 1], xs[:, 2]


def build_aggregates(
    B: int,
    e,
    shard: tuple[int, int] = (0, 1),
    *,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
    witness_cap: Optional[int] = None,
    arith: Optional[str] = None,
) -> AggregateTable:
    """Aggregate every canonical triple whose key hashes into ``shard``.

    ``shard`` is ``(shard_index, shard_count)``.  ``arith`` forces an
    arithmetic mode (``"u64"``, ``"u128"`` or ``"bigint"``); by default the
    narrowest exact one is chosen from ``B`` and ``d``.  With ``witness_cap``
    set, up to that many triples per key are retained in stream order.
    """
    e = as_exponent_pair(e)
    if B < 1:
        raise ValueError(f"B must be >= 1, got {B}")
    shard_index, shard_count = shard
    if not 0 <= shard_index < shard_count:
        raise ValueError(f"bad shard descriptor {shard}")
    mode = arith or select_arith(B, e.d)
    if mode != "bigint" and select_arith(B, e.d) == "bigint":
        raise OverflowError(f"power sums for B={B}, d={e.d} exceed 128 bits")
    if mode == "u64" and select_arith(B, e.d) != "u64":
        raise OverflowError(f"power sums for B={B}, d={e.d} exceed 64 bits")

    estimate = math.ceil(triple_count(B) / shard_count * 1.05)
    _check_budget(estimate, mode, shard_count, memory_budget)

    if mode == "bigint":
        keys, x0, x1, x2 = _collect_bigint(B, e, shard_index, shard_count)
    else:
        keys, x0, x1, x2 = _collect_fixed(B, e, mode, shard_index, shard_count)
    _check_budget(len(x0), mode, shard_count, memory_budget)
    return _aggregate_rows(B, e, mode, keys, x0, x1, x2, witness_cap)


def _aggregate_rows(B, e, mode, keys, x0, x1, x2, witness_cap) -> AggregateTable:
    n = len(x0)
    if n == 0:
        empty_keys = tuple(col[:0] for col in keys)
        z = np.zeros(0, dtype=np.int64)
        return AggregateTable(
            B, e, mode, empty_keys, z, z.copy(), z.copy(), np.zeros(B + 1, dtype=np.int64),
            witness_cap,
            z.copy() if witness_cap else None,
            np.zeros((0, 3), dtype=np.int64) if witness_cap else None,
        )
    order = _key_order(keys, mode)
    keys = tuple(col[order] for col in keys)
    x0, x1, x2 = x0[order], x1[order], x2[order]
    eq = (x0 == x1).astype(np.int8) + (x1 == x2).astype(np.int8)
    w = np.where(eq == 0, 6, np.where(eq == 1, 3, 1)).astype(np.int64)

    start_flag = _starts(keys)
    starts = np.flatnonzero(start_flag)
    sum_w = np.add.reduceat(w, starts)
    sum_w2 = np.add.reduceat(w * w, starts)
    count = np.diff(np.append(starts, n)).astype(np.int64)
    gid = np.cumsum(start_flag) - 1

    # nontrivial increments: adding a triple of weight w to a key whose
    # running weight is S raises (sum_w^2 - sum_w2) by 2*w*S
    profile = np.zeros(B + 1, dtype=np.int64)
    hot = count[gid] >= 2
    if np.any(hot):
        g = gid[hot]
        h2 = x2[hot].astype(np.int64)
        hw = w[hot]
        o2 = np.lexsort((h2, g))
        g, h2, hw = g[o2], h2[o2], hw[o2]
        cs = np.cumsum(hw)
        first = np.ones(len(g), dtype=bool)
        first[1:] = g[1:] != g[:-1]
        excl = cs - hw
        head = np.maximum.accumulate(np.where(first, np.arange(len(g)), 0))
        s_prev = excl - excl[head]
        np.add.at(profile, h2, 2 * hw * s_prev)

    wlen = wrows = None
    if witness_cap:
        wlen = np.minimum(count, witness_cap)
        take = _gather_segments(starts, wlen)
        wrows = np.stack([x0[take], x1[take], x2[take]], axis=1).astype(np.int64)

    return AggregateTable(
        B,
        e,
        mode,
        tuple(col[starts] for col in keys),
        sum_w,
        sum_w2,
        count,
        profile,
        witness_cap,
        wlen,
        wrows,
    )


def _shard_job(args):
    B, e, idx, count, budget, witness_cap, arith = args
    return build_aggregates(
        B, e, (idx, count), memory_budget=budget, witness_cap=witness_cap, arith=arith
    )


@dataclass(frozen=True)
class CollisionSummary:
    """What counting needs from a table: ``sum sum_w^2``, ``sum sum_w2`` and
    the non-trivial height profile.  Summaries of shards add."""

    B: int
    exponents: ExponentPair
    total_ordered: int
    trivial_ordered: int
    profile: tuple[int, ...]

    @classmethod
    def of(cls, table: AggregateTable) -> CollisionSummary:
        return cls(
            table.B,
            table.exponents,
            table.total_ordered(),
            table.trivial_ordered(),
            tuple(table.profile.tolist()),
        )

    def __add__(self, other: CollisionSummary) -> CollisionSummary:
        if (self.B, self.exponents) != (other.B, other.exponents):
            raise ValueError("cannot add summaries from different runs")
        return CollisionSummary(
            self.B,
            self.exponents,
            self.total_ordered + other.total_ordered,
            self.trivial_ordered + other.trivial_ordered,
            tuple(a + b for a, b in zip(self.profile, other.profile)),
        )

    def nontrivial_profile(self) -> list[int]:
        out = [0]
        for v in self.profile[1:]:
            out.append(out[-1] + v)
        return out


def _summary_job(args):
    return CollisionSummary.of(_shard_job(args))


def summarize(
    B: int,
    e,
    *,
    shard_count: int = 1,
    workers: int = 1,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
    arith: Optional[str] = None,
) -> CollisionSummary:
    """Like :func:`aggregate` but reduces every shard to its counts before
    combining, so peak memory is that of a single shard."""
    e = as_exponent_pair(e)
    if shard_count < 1 or workers < 1:
        raise ValueError("shard_count and workers must be >= 1")
    jobs = [(B, e, i, shard_count, memory_budget, None, arith) for i in range(shard_count)]
    if workers == 1 or shard_count == 1:
        parts = map(_summary_job, jobs)
        total = next(parts)
        for part in parts:
            total = total + part
        return total
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_summary_job, jobs))
    total = parts[0]
    for part in parts[1:]:
        total = total + part
    return total


def aggregate(
    B: int,
    e,
    *,
    shard_count: int = 1,
    workers: int = 1,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
    witness_cap: Optional[int] = None,
    arith: Optional[str] = None,
) -> AggregateTable:
    """Run every shard (in up to ``workers`` processes) and merge.

    The result is identical for every ``shard_count`` and ``workers``.
    """
    e = as_exponent_pair(e)
    if shard_count < 1 or workers < 1:
        raise ValueError("shard_count and workers must be >= 1")
    jobs = [(B, e, i, shard_count, memory_budget, witness_cap, arith) for i in range(shard_count)]
    if workers == 1 or shard_count == 1:
        tables = [_shard_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            tables = list(pool.map(_shard_job, jobs))
    if len(tables) == 1:
        return tables[0]
    return AggregateTable.merge(tables)
