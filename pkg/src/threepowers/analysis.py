"""Growth-exponent experiments and the catalogue of published bounds."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .arith import ExponentPair, as_exponent_pair
from .counting import CountReport, count_report
from .enumerator import DEFAULT_MEMORY_BUDGET

CSV_HEADER = ("B", "nontrivial", "primitive_nontrivial", "seconds")


# ---------------------------------------------------------------------------
# bounds


@dataclass(frozen=True)
class BoundCatalog:
    """Exponents ``a`` of bounds ``N_{c,d}(B) << B^(a + eps)``.

    A bound that does not apply to the exponent pair is ``None``.
    """

    exponents: ExponentPair
    theorem_exponent: Optional[Fraction]
    greaves: Optional[Fraction]
    skinner_wooley: Optional[Fraction]
    wooley_23: Optional[Fraction]
    tsui_wooley_24: Optional[Fraction]

    NAMES = ("theorem_exponent", "greaves", "skinner_wooley", "wooley_23", "tsui_wooley_24")

    def applicable(self) -> dict[str, Fraction]:
        return {n: getattr(self, n) for n in self.NAMES if getattr(self, n) is not None}

    def best(self) -> Optional[tuple[str, Fraction]]:
        bounds = self.applicable()
        if not bounds:
            return None
        name = min(bounds, key=lambda n: (bounds[n], self.NAMES.index(n)))
        return name, bounds[name]

    def theorem_beats(self, name: str) -> Optional[bool]:
        """Whether the theorem exponent is strictly smaller than bound ``name``
        (``None`` if either is inapplicable)."""
        other = getattr(self, name)
        if self.theorem_exponent is None or other is None:
            return None
        return self.theorem_exponent < other

    def to_dict(self) -> dict:
        out = {"c": str(self.exponents.c), "d": str(self.exponents.d), "bounds": {}}
        for name, value in self.applicable().items():
            out["bounds"][name] = {"exact": str(value), "value": float(value)}
        best = self.best()
        out["best"] = best[0] if best else None
        return out


def bound_catalog(e) -> BoundCatalog:
    e = as_exponent_pair(e)
    c, d = e.c, e.d
    theorem = None
    if d >= 4:
        theorem = max(Fraction(11, 4), Fraction(5, 2) + Fraction(5, 3 * c * d))
    first_power = c == 1 and d >= 3
    return BoundCatalog(
        e,
        theorem,
        Fraction(17, 6) if first_power else None,
        Fraction(8, 3) + Fraction(1, d - 1) if first_power else None,
        Fraction(7, 3) if (c, d) == (2, 3) else None,
        Fraction(36, 13) if (c, d) == (2, 4) else None,
    )


# ---------------------------------------------------------------------------
# scaling experiments


@dataclass(frozen=True)
class ScalingRow:
    B: int
    nontrivial: int
    primitive_nontrivial: Optional[int]
    seconds: float

    @property
    def ratio_cubic(self) -> float:
        """``N / B^3``."""
        return self.nontrivial / self.B**3

    @property
    def ratio_cubic_log(self) -> Optional[float]:
        """``N / (B^3 log B)``; undefined at ``B = 1``."""
        if self.B < 2:
            return None
        return self.nontrivial / (self.B**3 * math.log(self.B))


@dataclass(frozen=True)
class ScalingTable:
    exponents: ExponentPair
    rows: tuple[ScalingRow, ...]
    fitted_exponent: Optional[float] = None
    fit_window: Optional[tuple[int, int]] = None

    def __post_init__(self) -> None:
        bs = [r.B for r in self.rows]
        if any(a >= b for a, b in zip(bs, bs[1:])):
            raise ValueError("rows must have strictly increasing B")

    def without_timings(self) -> ScalingTable:
        return replace(self, rows=tuple(replace(r, seconds=0.0) for r in self.rows))


def fit_growth_exponent(
    Bs: Sequence[int], Ns: Sequence[int], window: Optional[tuple[int, int]] = None
) -> Optional[float]:
    """Least-squares slope of ``log N`` against ``log B`` over the points with
    ``N > 0`` inside ``window``; ``None`` with fewer than two such points."""
    pts = [
        (b, n)
        for b, n in zip(Bs, Ns)
        if n > 0 and (window is None or window[0] <= b <= window[1])
    ]
    if len({b for b, _ in pts}) < 2:
        return None
    x = np.log([float(b) for b, _ in pts])
    y = np.log([float(n) for _, n in pts])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def default_fit_window(schedule: Sequence[int]) -> tuple[int, int]:
    """The largest half of the schedule."""
    upper = list(schedule)[len(schedule) // 2 :]
    return upper[0], upper[-1]


def scaling_experiment(
    e,
    B_schedule: Sequence[int],
    *,
    shard_count: int = 1,
    workers: int = 1,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
    fit_window: Optional[tuple[int, int]] = None,
    progress=None,
) -> ScalingTable:
    """Count at every ``B`` of the schedule and fit the growth exponent."""
    e = as_exponent_pair(e)
    schedule = [int(b) for b in B_schedule]
    if not schedule:
        raise ValueError("empty B schedule")
    if schedule[0] < 1 or any(a >= b for a, b in zip(schedule, schedule[1:])):
        raise ValueError("B schedule must be positive and strictly increasing")
    window = fit_window or default_fit_window(schedule)
    rows = []
    for B in schedule:
        t0 = time.perf_counter()
        rep = count_report(
            e, B, shard_count=shard_count, workers=workers, memory_budget=memory_budget
        )
        row = ScalingRow(B, rep.nontrivial_ordered, rep.primitive_nontrivial, time.perf_counter() - t0)
        rows.append(row)
        if progress is not None:
            progress(row)
    slope = fit_growth_exponent([r.B for r in rows], [r.nontrivial for r in rows], window)
    return ScalingTable(e, tuple(rows), slope, window if slope is not None else None)


# ---------------------------------------------------------------------------
# report serialisation (integers as decimal strings)


def _opt_str(v) -> Optional[str]:
    return None if v is None else str(v)


def _opt_int(v) -> Optional[int]:
    return None if v is None else int(v)


def count_report_to_dict(rep: CountReport) -> dict:
    return {
        "kind": "count_report",
        "B": str(rep.B),
        "exponents": {"c": str(rep.exponents.c), "d": str(rep.exponents.d)},
        "total_ordered": str(rep.total_ordered),
        "trivial_ordered": str(rep.trivial_ordered),
        "nontrivial_ordered": str(rep.nontrivial_ordered),
        "primitive_nontrivial": _opt_str(rep.primitive_nontrivial),
    }


def count_report_from_dict(obj: dict) -> CountReport:
    return CountReport(
        int(obj["B"]),
        ExponentPair(int(obj["exponents"]["c"]), int(obj["exponents"]["d"])),
        int(obj["total_ordered"]),
        int(obj["trivial_ordered"]),
        int(obj["nontrivial_ordered"]),
        _opt_int(obj.get("primitive_nontrivial")),
    )


def scaling_table_to_dict(table: ScalingTable) -> dict:
    return {
        "kind": "scaling_table",
        "exponents": {"c": str(table.exponents.c), "d": str(table.exponents.d)},
        "rows": [
            {
                "B": str(r.B),
                "nontrivial_ordered": str(r.nontrivial),
                "primitive_nontrivial": _opt_str(r.primitive_nontrivial),
                "wall_time_seconds": r.seconds,
                "ratio_cubic": r.ratio_cubic,
                "ratio_cubic_log": r.ratio_cubic_log,
            }
            for r in table.rows
        ],
        "fitted_exponent": table.fitted_exponent,
        "fit_window": None if table.fit_window is None else [str(b) for b in table.fit_window],
        "bounds": bound_catalog(table.exponents).to_dict()["bounds"],
    }


def scaling_table_from_dict(obj: dict) -> ScalingTable:
    rows = tuple(
        ScalingRow(
            int(r["B"]),
            int(r["nontrivial_ordered"]),
            _opt_int(r["primitive_nontrivial"]),
            float(r["wall_time_seconds"]),
        )
        for r in obj["rows"]
    )
    window = obj.get("fit_window")
    return ScalingTable(
        ExponentPair(int(obj["exponents"]["c"]), int(obj["exponents"]["d"])),
        rows,
        obj.get("fitted_exponent"),
        None if window is None else (int(window[0]), int(window[1])),
    )


def to_json(obj) -> str:
    if isinstance(obj, CountReport):
        payload = count_report_to_dict(obj)
    elif isinstance(obj, ScalingTable):
        payload = scaling_table_to_dict(obj)
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")
    return json.dumps(payload, indent=2)


def from_json(text: str):
    obj = json.loads(text)
    kind = obj.get("kind")
    if kind == "count_report":
        return count_report_from_dict(obj)
    if kind == "scaling_table":
        return scaling_table_from_dict(obj)
    raise ValueError(f"unknown report kind {kind!r}")


def rows_to_csv(rows: Sequence[ScalingRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow(
            [r.B, r.nontrivial, "" if r.primitive_nontrivial is None else r.primitive_nontrivial, repr(r.seconds)]
        )
    return buf.getvalue()


def rows_from_csv(text: str) -> tuple[ScalingRow, ...]:
    reader = csv.reader(io.StringIO(text))
    header = tuple(next(reader))
    if header != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {header}")
    return tuple(
        ScalingRow(int(b), int(n), int(p) if p else None, float(s)) for b, n, p, s in reader
    )
