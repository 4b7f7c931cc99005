"""Command-line driver.

Exit status: 0 on success, 1 on a usage or precondition error, 2 on an
internal inconsistency (an oracle mismatch or a failed self-test).
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
import time
from typing import Optional, Sequence

from . import analysis, counting, geometry
from .arith import ExponentPair, double_factorial
from .enumerator import DEFAULT_MEMORY_BUDGET, MemoryBudgetExceeded

OUTPUT_DIR_ENV = "THREEPOWERS_OUTPUT_DIR"
SELFTEST_PAIRS = ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4))


class UsageError(Exception):
    pass


class Inconsistency(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.replace(" ", "").split(",") if tok]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="threepowers",
        description="Count solutions of paired equal sums of three powers.",
        allow_abbrev=False,
    )
    parser.add_argument("--config", help="key=value file with defaults (shards, workers, memory_budget)")
    parser.add_argument("--output-dir", help=f"also write the report here (default: ${OUTPUT_DIR_ENV})")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def engine(p):
        p.add_argument("--shards", type=int, default=None)
        p.add_argument("--workers", type=int, default=None)

    def exponents(p, required=True):
        p.add_argument("--c", type=int, required=required)
        p.add_argument("--d", type=int, required=required)

    def fmt(p, choices=("text", "json", "csv")):
        p.add_argument("--format", choices=choices, default="text")

    p = sub.add_parser("count", help="exact counts at one height bound", allow_abbrev=False)
    exponents(p)
    p.add_argument("--B", type=int, required=True)
    p.add_argument("--list", type=int, default=0, metavar="CAP", help="also list up to CAP solutions")
    engine(p)
    fmt(p)

    p = sub.add_parser("scaling", help="counts over a B schedule plus exponent fit", allow_abbrev=False)
    exponents(p)
    p.add_argument("--B-list", type=_int_list, required=True)
    engine(p)
    fmt(p)

    p = sub.add_parser("oracle", help="brute-force count, cross-checked against the engine", allow_abbrev=False)
    exponents(p)
    p.add_argument("--B", type=int, required=True)
    fmt(p)

    p = sub.add_parser("planes", help="standard planes of F_k, or the plane census of X_{c,d}", allow_abbrev=False)
    p.add_argument("--k", type=int)
    exponents(p, required=False)
    fmt(p, ("text", "json"))

    p = sub.add_parser("spaces", help="standard m-spaces on the degree-k Fermat form", allow_abbrev=False)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    fmt(p, ("text", "json"))

    p = sub.add_parser("probe", help="finite-field search for non-standard planes", allow_abbrev=False)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    fmt(p, ("text", "json"))

    p = sub.add_parser("singular", help="heuristic singular-point candidates of X_{c,d}", allow_abbrev=False)
    exponents(p)
    p.add_argument("--tolerance", type=float, default=geometry.DEFAULT_TOLERANCE)
    fmt(p, ("text", "json"))

    p = sub.add_parser("selftest", help="oracle equivalence and identity checks", allow_abbrev=False)
    p.add_argument("--B-max", type=int, default=8)
    return parser


def load_config(path: Optional[str]) -> dict:
    defaults = {"shards": 1, "workers": 1, "memory_budget": DEFAULT_MEMORY_BUDGET}
    if not path:
        return defaults
    cp = configparser.ConfigParser()
    with open(path) as fh:
        cp.read_string("[defaults]\n" + fh.read())
    for key, value in cp["defaults"].items():
        key = key.replace("-", "_")
        if key not in defaults:
            raise UsageError(f"unknown config key {key!r}")
        defaults[key] = int(value)
    return defaults


def _exponents(args) -> ExponentPair:
    if args.c is None or args.d is None:
        raise UsageError("--c and --d are required")
    return ExponentPair(args.c, args.d)


def _engine_opts(args, cfg) -> dict:
    return {
        "shard_count": args.shards if args.shards is not None else cfg["shards"],
        "workers": args.workers if args.workers is not None else cfg["workers"],
        "memory_budget": cfg["memory_budget"],
    }


def _solutions_payload(sols) -> list[dict]:
    return [
        {
            "left": [str(v) for v in s.left],
            "right": [str(v) for v in s.right],
            "key": [str(s.key.sc), str(s.key.sd)],
            "height": str(s.height),
            "gcd": str(s.gcd),
        }
        for s in sols
    ]


def cmd_count(args, cfg) -> tuple[str, str]:
    e = _exponents(args)
    opts = _engine_opts(args, cfg)
    t0 = time.perf_counter()
    rep = counting.count_report(e, args.B, **opts)
    seconds = time.perf_counter() - t0
    sols = counting.list_nontrivial(e, args.B, args.list, **opts) if args.list else None
    if args.format == "json":
        payload = analysis.count_report_to_dict(rep)
        if sols is not None:
            payload["solutions"] = _solutions_payload(sols)
        return json.dumps(payload, indent=2), "json"
    if args.format == "csv":
        row = analysis.ScalingRow(rep.B, rep.nontrivial_ordered, rep.primitive_nontrivial, seconds)
        return analysis.rows_to_csv([row]).rstrip("\n"), "csv"
    lines = [
        f"(c, d) = ({e.c}, {e.d}), B = {rep.B}",
        f"total ordered        {rep.total_ordered}",
        f"trivial ordered      {rep.trivial_ordered}",
        f"non-trivial ordered  {rep.nontrivial_ordered}",
        f"primitive non-triv.  {rep.primitive_nontrivial}",
    ]
    for s in sols or ():
        lines.append(f"  {tuple(s.left)} / {tuple(s.right)}  key={s.key.sc},{s.key.sd}  H={s.height}  gcd={s.gcd}")
    return "\n".join(lines), "txt"


def cmd_scaling(args, cfg) -> tuple[str, str]:
    e = _exponents(args)
    table = analysis.scaling_experiment(e, args.B_list, **_engine_opts(args, cfg))
    if args.format == "json":
        return analysis.to_json(table), "json"
    if args.format == "csv":
        return analysis.rows_to_csv(table.rows).rstrip("\n"), "csv"
    lines = [f"(c, d) = ({e.c}, {e.d})", f"{'B':>8} {'N':>14} {'N_prim':>14} {'N/B^3':>10} {'N/(B^3 log B)':>14} {'sec':>8}"]
    for r in table.rows:
        ratio_log = "-" if r.ratio_cubic_log is None else f"{r.ratio_cubic_log:.6f}"
        lines.append(
            f"{r.B:>8} {r.nontrivial:>14} {r.primitive_nontrivial!s:>14} "
            f"{r.ratio_cubic:>10.6f} {ratio_log:>14} {r.seconds:>8.3f}"
        )
    if table.fitted_exponent is None:
        lines.append("fitted exponent: n/a (no rows with N > 0 in the fit window)")
    else:
        lines.append(f"fitted exponent: {table.fitted_exponent:.4f} over B in {table.fit_window}")
    for name, value in analysis.bound_catalog(e).applicable().items():
        lines.append(f"bound {name:<18} {str(value):>7} = {float(value):.4f}")
    return "\n".join(lines), "txt"


def cmd_oracle(args, cfg) -> tuple[str, str]:
    e = _exponents(args)
    oracle = counting.brute_force_oracle(e, args.B)
    engine = counting.count_report(e, args.B)
    if oracle != engine:
        raise Inconsistency(f"oracle {oracle} != engine {engine}")
    if args.format == "json":
        return analysis.to_json(oracle), "json"
    if args.format == "csv":
        row = analysis.ScalingRow(oracle.B, oracle.nontrivial_ordered, oracle.primitive_nontrivial, 0.0)
        return analysis.rows_to_csv([row]).rstrip("\n"), "csv"
    return (
        f"oracle (c, d) = ({e.c}, {e.d}), B = {oracle.B}: total {oracle.total_ordered}, "
        f"trivial {oracle.trivial_ordered}, non-trivial {oracle.nontrivial_ordered}, "
        f"primitive {oracle.primitive_nontrivial}; engine agrees",
        "txt",
    )


def _plane_payload(p: geometry.StandardPlane) -> dict:
    return {
        "pairing": [list(pair) for pair in p.pairing],
        "roots": [[str(r.numerator), str(r.order)] for r in p.roots],
    }


def cmd_planes(args, cfg) -> tuple[str, str]:
    if args.k is not None:
        if args.k < 1:
            raise UsageError("--k must be positive")
        planes = geometry.standard_planes(args.k)
        payload = {"k": str(args.k), "standard_planes": str(len(planes)), "expected": str(15 * args.k**3)}
        text = f"F_{args.k}: {len(planes)} standard planes (15 k^3 = {15 * args.k**3})"
    else:
        e = _exponents(args)
        census = geometry.planes_on_X(e)
        payload = {
            "c": str(e.c),
            "d": str(e.d),
            "standard_planes_on_G_d": str(census.standard_on_Gd),
            "planes_on_X": str(len(census.on_X)),
            "total_rational_positive": str(census.total_rational_positive),
            "planes": [_plane_payload(p) for p in census.planes],
        }
        text = (
            f"X_({e.c},{e.d}): {census.standard_on_Gd} standard planes on G_{e.d}, "
            f"{len(census.on_X)} on X, {census.total_rational_positive} with positive rational points"
        )
        for p in census.planes:
            text += "\n  " + ", ".join(f"x{i}=x{j}" for i, j in p.pairing)
    return (json.dumps(payload, indent=2), "json") if args.format == "json" else (text, "txt")


def cmd_spaces(args, cfg) -> tuple[str, str]:
    fam = geometry.linear_space_count(args.m, args.k)
    payload = {"m": str(fam.m), "k": str(fam.k), "count": str(fam.count), "expected": str(fam.expected)}
    if fam.count != fam.expected:
        raise Inconsistency(f"generated {fam.count} spaces, formula gives {fam.expected}")
    text = (
        f"m = {fam.m}, k = {fam.k}: {fam.count} standard {fam.m}-spaces "
        f"({double_factorial(2 * fam.m + 1)} * {fam.k}^{fam.m + 1} = {fam.expected})"
    )
    return (json.dumps(payload, indent=2), "json") if args.format == "json" else (text, "txt")


def cmd_probe(args, cfg) -> tuple[str, str]:
    rep = geometry.nonstandard_plane_probe(args.k, args.p, args.seed)
    payload = {
        "k": str(rep.k),
        "p": str(rep.p),
        "seed": None if rep.seed is None else str(rep.seed),
        "planes_found": str(rep.planes_found),
        "standard": str(rep.standard),
        "expected_standard": str(rep.expected_standard),
        "all_standard": rep.all_standard,
        "nonstandard_examples": [[[str(v) for v in row] for row in ex] for ex in rep.nonstandard_examples],
    }
    text = (
        f"F_{rep.k} over F_{rep.p}: {rep.planes_found} planes in normal form, "
        f"{rep.standard} standard (expected {rep.expected_standard}); "
        + ("all standard" if rep.all_standard else "NON-STANDARD PLANES FOUND")
    )
    return (json.dumps(payload, indent=2), "json") if args.format == "json" else (text, "txt")


def cmd_singular(args, cfg) -> tuple[str, str]:
    e = _exponents(args)
    rep = geometry.singular_candidates(e, args.tolerance)
    payload = {
        "c": str(e.c),
        "d": str(e.d),
        "label": "HEURISTIC",
        "tolerance": rep.tolerance,
        "root_order": str(rep.root_order),
        "patterns_tested": str(rep.patterns_tested),
        "pattern_bound": str(rep.pattern_bound),
        "count": str(rep.count),
        "max_residual": rep.max_residual,
        "candidates": [[None if v is None else str(v) for v in cand] for cand in rep.candidates],
    }
    text = (
        f"HEURISTIC singular candidates of X_({e.c},{e.d}): {rep.count} "
        f"(of {rep.patterns_tested} patterns, bound {rep.pattern_bound}); "
        f"max residual {rep.max_residual:.2e}"
    )
    return (json.dumps(payload, indent=2), "json") if args.format == "json" else (text, "txt")


def run_selftest(B_max: int = 8, out=sys.stdout) -> bool:
    """Oracle equivalence plus the exact identities; prints one line per check."""
    results = []

    def check(name, ok):
        results.append(ok)
        print(f"{'PASS' if ok else 'FAIL'}  {name}", file=out)

    for e in SELFTEST_PAIRS:
        ok = all(counting.count_report(e, B) == counting.brute_force_oracle(e, B) for B in range(1, B_max + 1))
        check(f"oracle equivalence {e}, B <= {B_max}", ok)
    for e in ((1, 2), (2, 5)):
        ok = all(
            counting.count_report(e, B).trivial_ordered == counting.trivial_count_closed_form(B)
            for B in range(1, 31)
        )
        check(f"trivial closed form {e}, B <= 30", ok)
    for e in ((1, 2), (1, 3)):
        profile = counting.nontrivial_profile(e, 40)
        ok = all(
            sum(counting.primitive_nontrivial(e, B // m) for m in range(1, B + 1)) == profile[B]
            for B in range(1, 41)
        )
        check(f"Moebius round trip {e}, B <= 40", ok)
    check("standard planes 15 k^3, k <= 5", all(len(geometry.standard_planes(k)) == 15 * k**3 for k in range(1, 6)))
    check(
        "linear spaces (2m+1)!! k^(m+1), m <= 3, k <= 3",
        all(
            geometry.linear_space_count(m, k).count == double_factorial(2 * m + 1) * k ** (m + 1)
            for m in (1, 2, 3)
            for k in (1, 2, 3)
        ),
    )
    check(
        "six rational-positive planes, 4 <= d <= 6",
        all(geometry.planes_on_X((c, d)).total_rational_positive == 6 for d in range(4, 7) for c in range(1, d)),
    )
    return all(results)


COMMANDS = {
    "count": cmd_count,
    "scaling": cmd_scaling,
    "oracle": cmd_oracle,
    "planes": cmd_planes,
    "spaces": cmd_spaces,
    "probe": cmd_probe,
    "singular": cmd_singular,
}


def _write_report(text: str, ext: str, args) -> None:
    out_dir = args.output_dir or os.environ.get(OUTPUT_DIR_ENV)
    if not out_dir:
        return
    os.makedirs(out_dir, exist_ok=True)
    parts = [args.command] + [
        f"{k}{v}" for k, v in sorted(vars(args).items()) if k in ("c", "d", "B", "k", "m", "p") and v is not None
    ]
    with open(os.path.join(out_dir, "_".join(parts) + "." + ext), "w") as fh:
        fh.write(text + "\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.command == "selftest":
            return 0 if run_selftest(args.B_max) else 2
        text, ext = COMMANDS[args.command](args, cfg)
    except Inconsistency as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return 2
    except MemoryBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (UsageError, ValueError, OverflowError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(text)
    _write_report(text, ext, args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
