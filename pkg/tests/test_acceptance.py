"""End-to-end acceptance run.

Each criterion produces a JSON report and prints one ``PASS``/``FAIL`` line.
The last criterion repeats criteria 1-7 from scratch (fresh pattern search,
cleared caches) and compares the SHA-256 digests of every report byte for
byte.  Timings are printed but kept out of the digested reports.

Run with ``pytest tests/test_acceptance.py -v`` or directly as a script.
"""
from __future__ import annotations

import hashlib
import itertools
import json
import math
import sys
import tempfile
import time
from fractions import Fraction as F
from pathlib import Path

import numpy as np
import pytest

from cubefill import analysis, cantor, cli, curve, export, pattern, samples

SEED = 0
RUNTIME_LIMITS = {1: 30.0, 2: 10.0, 5: 60.0}


def _cli_json(argv, out: Path):
    code = cli.main([*argv, "--out", str(out)])
    return code, json.loads(out.read_text(encoding="utf-8")) if out.exists() else None


def criterion_1(work: Path):
    """Pattern family exists, is class-closed and validates exactly at depth 4."""
    code, doc = _cli_json(["pattern", "--depth", "4"], work / "pattern.json")
    v = doc["validation"]
    ok = code == 0 and v["ok"] and v["depth"] == 4 and not v["violations"]
    detail = (
        f"exit={code} classes={','.join(doc['occurring_classes'])} "
        f"iterations={doc['closure_iterations']} checks={v['total_checks']} "
        f"violations={len(v['violations'])}"
    )
    return ok, detail, doc


def criterion_2(work: Path):
    """Every centre of the 9^3 grid has a witness midpoint within 2 sqrt(3) 3^-6."""
    code, doc = _cli_json(["coverage", "--depth", "6", "--grid", "9"], work / "coverage.json")
    num, den = doc["max_deviation_sq"]
    exact_ok = F(num, den) <= curve.witness_bound_sq(6)
    ok = code == 0 and doc["ok"] and doc["failures"] == 0 and exact_ok and doc["points"] == 729
    detail = f"exit={code} max_dev={doc['max_deviation']:.6g} bound={doc['bound']:.6g} failures={doc['failures']}"
    return ok, detail, doc


def criterion_3(work: Path):
    """(F+F)^3 = F^3 + F^3 at depth 2 and the halved sum set fills the 1/9 grid."""
    f2 = cantor.cantor_level(2)
    ff = sorted({a + b for a in f2 for b in f2})
    lhs = set(itertools.product(ff, repeat=3))
    cube = list(itertools.product(f2, repeat=3))
    rhs = {tuple(a + b for a, b in zip(p, q)) for p in cube for q in cube}
    pts = np.array([[float(c) for c in p] for p in cube])
    grid = analysis.midpoint_voxel_cover(pts, pts, 1 / 9, unit_cube=True)
    ok = lhs == rhs and len(lhs) == 729 and grid.count == 729 and grid.occupancy.all()
    doc = {
        "F2": [str(x) for x in f2],
        "pairs": len(cube) ** 2,
        "sum_set_size": len(rhs),
        "product_set_size": len(lhs),
        "sets_equal": lhs == rhs,
        "voxels": grid.count,
    }
    detail = f"|(F+F)^3|={len(lhs)} |F^3+F^3|={len(rhs)} equal={lhs == rhs} voxels={grid.count}/729"
    return ok, detail, doc


def criterion_4(work: Path):
    """d_H(polyline_n, polyline_{n+1}) <= sqrt(3) 3^-n for n = 0..4 (vertex sets)."""
    table = pattern.default_table()
    verts = [curve.build_polyline(n, table).as_array() for n in range(6)]
    rows = []
    for n in range(5):
        d = analysis.hausdorff(verts[n], verts[n + 1])
        bound = math.sqrt(3) * 3.0 ** -n
        rows.append({"n": n, "hausdorff": d, "bound": bound, "ok": d <= bound})
    ok = all(r["ok"] for r in rows)
    detail = " ".join(f"n={r['n']}:{r['hausdorff']:.4g}<={r['bound']:.4g}" for r in rows)
    return ok, detail, {"rows": rows}


def criterion_5(work: Path):
    """Greedy partition bounds on the unit circle plus a linear voxel h-sweep."""
    eps_list = [0.5, 0.2, 0.1]
    pts, closed = samples.named_curve("circle", 2000, SEED)
    doc = cli.rectifiable_report(pts, closed, eps_list, [0.08, 0.04, 0.02, 0.01])
    checks = []
    for row in doc["partitions"]:
        eps, n1 = row["epsilon"], row["n_pieces"]
        count_ok = n1 <= 2 * math.pi / eps + 1
        exact = 64 * F(eps) ** 3 * n1 ** 2
        bound_ok = row["paper_bound"] == 64 * eps ** 3 * n1 ** 2 and abs(
            F(row["paper_bound"]) - exact
        ) <= exact * F(1, 2 ** 50)
        checks.append(count_ok and bound_ok and row["refined_ok"])
    sweep = doc["voxels"]
    ok = all(checks) and sweep["r2"] >= 0.9 and sweep["slope"] > 0
    detail = (
        "pieces="
        + ",".join(str(r["n_pieces"]) for r in doc["partitions"])
        + f" limits={','.join(str(math.floor(2 * math.pi / e + 1)) for e in eps_list)}"
        + f" R2={sweep['r2']:.4f} exponent={sweep['loglog_exponent']:.3f}"
    )
    return ok, detail, doc


def criterion_6(work: Path):
    """Exact lower-bound series for n <= 6 and polyline length above 25 at n = 3."""
    series = []
    for n in range(7):
        lb = curve.connection_lower_bound(n)
        closed_form = F(7, 5) * (F(8, 3) ** n - 1)
        series.append({"n": n, "lower_bound": [lb.numerator, lb.denominator], "match": lb == closed_form})
    stats = curve.length_stats(3)
    ok = all(s["match"] for s in series) and stats.polyline_length > 25
    ok = ok and stats.lower_bound == F(679, 27)
    detail = f"series_match={all(s['match'] for s in series)} length(3)={stats.polyline_length:.4f} lower_bound(3)=679/27"
    return ok, detail, {"series": series, "length": stats.to_dict()}


def criterion_7(work: Path):
    """Square boundary: the second Minkowski average already matches the hull."""
    code, doc = _cli_json(["sf", "--curve", "square", "--k", "2", "--seed", str(SEED)], work / "sf.json")
    d2 = doc["sequence"][1]["hausdorff"]
    ok = code == 0 and doc["below_tolerance"] and d2 < doc["sampling_tolerance"]
    detail = f"d_H(k=1)={doc['sequence'][0]['hausdorff']:.4g} d_H(k=2)={d2:.4g} tolerance={doc['sampling_tolerance']:.4g}"
    return ok, detail, doc


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
}


def run_all(work: Path) -> dict:
    pattern.default_table.cache_clear()
    results = {}
    for k, fn in CRITERIA.items():
        start = time.perf_counter()
        ok, detail, doc = fn(work)
        elapsed = time.perf_counter() - start
        if k in RUNTIME_LIMITS and elapsed > RUNTIME_LIMITS[k]:
            ok = False
            detail += f" (runtime {elapsed:.1f}s over {RUNTIME_LIMITS[k]:.0f}s)"
        text = export.dumps(doc)
        results[k] = {
            "ok": ok,
            "detail": detail,
            "seconds": elapsed,
            "digest": hashlib.sha256(text.encode("utf-8")).hexdigest(),
        }
    return results


def criterion_8(first: dict, work: Path):
    second = run_all(work)
    same = {k: first[k]["digest"] == second[k]["digest"] for k in CRITERIA}
    ok = all(same.values())
    detail = " ".join(f"{k}:{first[k]['digest'][:12]}{'=' if same[k] else '!='}" for k in CRITERIA)
    return ok, detail


def line(k, ok, detail, seconds=None):
    t = "" if seconds is None else f" [{seconds:.1f}s]"
    return f"ACCEPTANCE criterion {k}: {'PASS' if ok else 'FAIL'}{t} {detail}"


# ------------------------------------------------------------ pytest


@pytest.fixture(scope="module")
def first_run(tmp_path_factory):
    return run_all(tmp_path_factory.mktemp("acceptance-1"))


def _report(capsys, text):
    with capsys.disabled():
        print("\n" + text)


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k, first_run, capsys):
    r = first_run[k]
    _report(capsys, line(k, r["ok"], r["detail"], r["seconds"]))
    assert r["ok"], r["detail"]


def test_criterion_8_determinism(first_run, tmp_path, capsys):
    start = time.perf_counter()
    ok, detail = criterion_8(first_run, tmp_path)
    _report(capsys, line(8, ok, detail, time.perf_counter() - start))
    assert ok, detail


# ------------------------------------------------------------ script


def main() -> int:
    with tempfile.TemporaryDirectory() as d1, tempfile.TemporaryDirectory() as d2:
        first = run_all(Path(d1))
        for k, r in first.items():
            print(line(k, r["ok"], r["detail"], r["seconds"]))
        ok8, detail8 = criterion_8(first, Path(d2))
        print(line(8, ok8, detail8))
    return 0 if ok8 and all(r["ok"] for r in first.values()) else 1


if __name__ == "__main__":
    sys.exit(main())
