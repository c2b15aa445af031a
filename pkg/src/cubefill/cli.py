"""Command-line front end.

Exit codes: 0 success, 1 validation failure, 2 pattern search failure,
3 missing input artifact, 64 usage error.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

from . import analysis, curve, export, pattern, samples

log = logging.getLogger("cubefill")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_SEARCH = 2
EXIT_MISSING = 3
EXIT_USAGE = 64

MAX_DEPTH = 12
MAX_GRID = 243


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _depth(text):
    n = int(text)
    if not 0 <= n <= MAX_DEPTH:
        raise argparse.ArgumentTypeError(f"depth must be in 0..{MAX_DEPTH}")
    return n


def _grid(text):
    m = int(text)
    if not 1 <= m <= MAX_GRID:
        raise argparse.ArgumentTypeError(f"grid must be in 1..{MAX_GRID}")
    return m


def _floats(text):
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")
    if not vals or any(not v > 0 for v in vals):
        raise argparse.ArgumentTypeError("values must be positive")
    return vals


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cubefill", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("pattern", help="search, validate and export the pattern table")
    c.add_argument("--depth", type=_depth, default=4)
    c.add_argument("--out")
    c.add_argument("--check", metavar="FILE", help="re-validate an exported table instead")

    c = sub.add_parser("generate", help="emit the depth-n polyline")
    c.add_argument("--depth", type=_depth, required=True)
    c.add_argument("--format", choices=("csv", "obj"), default="csv")
    c.add_argument("--out")
    c.add_argument("--pattern", metavar="FILE", help="pattern table to use (default: search)")

    c = sub.add_parser("coverage", help="certify the midpoint net of the voxel centres")
    c.add_argument("--depth", type=_depth, default=6)
    c.add_argument("--grid", type=_grid, default=9)
    c.add_argument("--out")

    c = sub.add_parser("rectifiable", help="greedy partition bounds and voxel sweep")
    c.add_argument("--curve", default="circle")
    c.add_argument("--eps", type=_floats, default=[0.5, 0.2, 0.1])
    c.add_argument("--h", type=_floats, default=[0.08, 0.04, 0.02, 0.01])
    c.add_argument("--samples", type=int, default=None)
    c.add_argument("--seed", type=int, default=None)
    c.add_argument("--out")

    c = sub.add_parser("sf", help="distance of Minkowski averages to the hull")
    c.add_argument("--curve", default="square")
    c.add_argument("--k", type=int, default=2)
    c.add_argument("--samples", type=int, default=None)
    c.add_argument("--seed", type=int, default=None)
    c.add_argument("--out")

    c = sub.add_parser("length", help="polyline length and its lower bound")
    c.add_argument("--depth", type=_depth, required=True)
    c.add_argument("--out")

    c = sub.add_parser("modulus", help="largest jump between adjacent curve samples")
    c.add_argument("--depth", type=_depth, required=True)
    c.add_argument("--samples", type=int, default=4)
    c.add_argument("--out")
    return p


def _emit(text: str, out) -> None:
    if out:
        export.write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _load_table(path):
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    data = json.loads(path.read_text(encoding="utf-8"))
    return pattern.table_from_dict(data), data


def _stored_matches(table, data) -> list[str]:
    """Names of table parts whose stored connections disagree with the derived ones."""
    fresh = pattern.table_to_dict(table)
    bad = []
    if data["root"]["pattern"].get("connections") not in (None, fresh["root"]["pattern"]["connections"]):
        bad.append("root")
    for name, d in data["classes"].items():
        if d.get("connections") not in (None, fresh["classes"][name]["connections"]):
            bad.append(name)
    return bad


def cmd_pattern(args) -> int:
    if args.check:
        try:
            table, data = _load_table(args.check)
        except FileNotFoundError:
            log.error("pattern file not found: %s", args.check)
            return EXIT_MISSING
        except (ValueError, KeyError, TypeError) as exc:
            log.error("malformed pattern file: %s", exc)
            return EXIT_INVALID
        report = pattern.validate_tree(table, args.depth)
        for name in _stored_matches(table, data):
            report.fail("stored_connections", detail=name)
        _emit(export.dumps(report.to_dict()), args.out)
        return EXIT_OK if report.ok else EXIT_INVALID
    try:
        table = pattern.pattern_closure()
    except pattern.NotFound as exc:
        log.error("pattern search failed: %s", exc)
        return EXIT_SEARCH
    report = pattern.validate_tree(table, args.depth)
    doc = pattern.table_to_dict(table, report)
    doc["search"] = {
        "root": table.root.kind,
        **{name: p.kind for name, p in sorted(table.classes.items())},
    }
    _emit(export.dumps(doc), args.out)
    log.info("classes=%s violations=%d", ",".join(sorted(table.classes)), len(report.violations))
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_generate(args) -> int:
    if args.pattern:
        try:
            table, _ = _load_table(args.pattern)
        except FileNotFoundError:
            log.error("pattern file not found: %s", args.pattern)
            return EXIT_MISSING
        except (ValueError, KeyError, TypeError) as exc:
            log.error("malformed pattern file: %s", exc)
            return EXIT_INVALID
    else:
        try:
            table = pattern.default_table()
        except pattern.NotFound as exc:
            log.error("pattern search failed: %s", exc)
            return EXIT_SEARCH
    poly = curve.build_polyline(args.depth, table)
    text = export.polyline_csv(poly) if args.format == "csv" else export.polyline_obj(poly)
    _emit(text, args.out)
    log.info("depth=%d chords=%d vertices=%d", args.depth, 8 ** args.depth, len(poly))
    return EXIT_OK


def cmd_coverage(args) -> int:
    report = analysis.coverage_certificate(args.depth, args.grid)
    _emit(export.dumps(report), args.out)
    return EXIT_OK if report["ok"] else EXIT_INVALID


def _curve(args):
    try:
        return samples.named_curve(args.curve, args.samples, args.seed)
    except KeyError:
        raise UsageError(f"unknown curve {args.curve!r}; choose from {', '.join(samples.BUILTIN)} or file:PATH")
    except FileNotFoundError:
        raise


def rectifiable_report(points, closed, eps_list, h_list) -> dict:
    rows = []
    for eps in eps_list:
        dec = analysis.greedy_partition(points, eps, closed=closed)
        rows.append(analysis.measure_bound(dec))
    sweep = analysis.voxel_sweep(points, points, h_list, symmetric=True)
    sweep["linear_ok"] = bool(sweep["r2"] >= 0.9 and sweep["slope"] > 0)
    return {"partitions": rows, "voxels": sweep}


def cmd_rectifiable(args) -> int:
    try:
        points, closed = _curve(args)
    except FileNotFoundError as exc:
        log.error("curve file not found: %s", exc)
        return EXIT_MISSING
    report = rectifiable_report(points, closed, args.eps, args.h)
    report.update(curve=args.curve, samples=len(points), seed=args.seed)
    _emit(export.dumps(report), args.out)
    ok = report["voxels"]["linear_ok"] and all(
        r["piece_count_ok"] and r["refined_ok"] and r["final_form_ok"] for r in report["partitions"]
    )
    return EXIT_OK if ok else EXIT_INVALID


def cmd_sf(args) -> int:
    if args.k < 1:
        raise UsageError("--k must be at least 1")
    try:
        points, _ = _curve(args)
    except FileNotFoundError as exc:
        log.error("curve file not found: %s", exc)
        return EXIT_MISSING
    seq = analysis.sf_sequence(points, args.k)
    report = {
        "curve": args.curve,
        "samples": len(points),
        "seed": args.seed,
        "sequence": seq,
        "sampling_tolerance": 2 / math.sqrt(len(points)),
    }
    report["below_tolerance"] = seq[-1]["hausdorff"] <= report["sampling_tolerance"]
    _emit(export.dumps(report), args.out)
    return EXIT_OK


def cmd_length(args) -> int:
    _emit(export.dumps(curve.length_stats(args.depth).to_dict()), args.out)
    return EXIT_OK


def cmd_modulus(args) -> int:
    if args.depth < 1 or args.samples < 1:
        raise UsageError("modulus needs --depth >= 1 and --samples >= 1")
    report = curve.modulus_check(args.depth, args.samples)
    _emit(export.dumps(report), args.out)
    return EXIT_OK if report["within_bound"] else EXIT_INVALID


COMMANDS = {
    "pattern": cmd_pattern,
    "generate": cmd_generate,
    "coverage": cmd_coverage,
    "rectifiable": cmd_rectifiable,
    "sf": cmd_sf,
    "length": cmd_length,
    "modulus": cmd_modulus,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"cubefill: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
