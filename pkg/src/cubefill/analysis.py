"""Midpoint-set diagnostics: voxel covers, Hausdorff distances, Minkowski averages
and the greedy diameter partition behind the measure-zero bound for rectifiable curves.

Everything here works on binary64 point samples except
:func:`coverage_certificate`, which compares exact rationals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy import ndimage
from scipy.spatial import Delaunay, cKDTree
from scipy.spatial.distance import cdist, pdist

from .curve import witness_bound_sq, witness_deviation_sq
from .pattern import PatternTable, default_table

BRUTE_FORCE_LIMIT = 10_000


def as_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ValueError("expected an (n, 3) array of points")
    if len(pts) == 0:
        raise ValueError("empty point set")
    return pts


# ---------------------------------------------------------------- Hausdorff


def directed_hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    """``max_{x in a} min_{y in b} |x - y|``."""
    if len(a) <= BRUTE_FORCE_LIMIT and len(b) <= BRUTE_FORCE_LIMIT:
        best = 0.0
        for start in range(0, len(a), 1024):
            d = cdist(a[start:start + 1024], b)
            best = max(best, float(d.min(axis=1).max()))
        return best
    dist, _ = cKDTree(b).query(a, k=1)
    return float(dist.max())


def hausdorff(a, b) -> float:
    """Hausdorff distance between two finite point sets."""
    a, b = as_points(a), as_points(b)
    return max(directed_hausdorff(a, b), directed_hausdorff(b, a))


# ---------------------------------------------------------------- greedy partition


@dataclass
class PieceDecomposition:
    """Consecutive pieces of a path cut where the running diameter reaches ``epsilon``.

    ``breakpoints`` are arc-length parameters ``t_0 = 0 < ... < t_{n+1} = L``;
    ``pieces[i]`` holds the cut points and the path vertices between them.
    """

    epsilon: float
    breakpoints: np.ndarray
    pieces: list
    length: float
    tol_d: float

    @property
    def n(self) -> int:
        """Index of the last piece; there are ``n + 1`` pieces."""
        return len(self.pieces) - 1

    def diameters(self) -> np.ndarray:
        return np.array([pdist(p).max() if len(p) > 1 else 0.0 for p in self.pieces])

    def bboxes(self) -> np.ndarray:
        return np.array([[p.min(axis=0), p.max(axis=0)] for p in self.pieces])


def _cumulative_length(pts: np.ndarray) -> np.ndarray:
    steps = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    return np.concatenate([[0.0], np.cumsum(steps)])


def greedy_partition(path, epsilon: float, closed: bool = False, tol_b: float = 1e-12):
    """Cut a polygonal path into pieces of diameter ``epsilon`` (the last one at most).

    Each cut ``t_{i+1}`` is the supremum of the ``u`` for which the sub-path
    ``[t_i, u]`` has diameter below ``epsilon``.  The diameter of a polygonal
    sub-path is the largest distance among its vertices and cut points and
    grows monotonically with ``u``, so the cut inside the offending edge is
    found by bisection to ``tol_b`` relative to the path length.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    pts = as_points(path)
    if closed:
        pts = np.vstack([pts, pts[:1]])
    keep = np.concatenate([[True], np.any(np.diff(pts, axis=0) != 0, axis=1)])
    pts = pts[keep]
    if len(pts) < 2:
        raise ValueError("degenerate single-point path")
    cum = _cumulative_length(pts)
    total = float(cum[-1])
    tol = tol_b * total

    breakpoints = [0.0]
    pieces = []
    current = [pts[0]]
    diam = 0.0
    k = 1  # next vertex to absorb
    start_t = 0.0
    while k < len(pts):
        q = np.asarray(current)
        reach = float(np.max(np.linalg.norm(q - pts[k], axis=1)))
        if max(diam, reach) < epsilon:
            current.append(pts[k])
            diam = max(diam, reach)
            k += 1
            continue
        # the cut lies on edge k-1 -> k, after the last absorbed point
        seg_len = float(cum[k] - cum[k - 1])

        def point_at(t):
            s = (t - cum[k - 1]) / seg_len
            return pts[k - 1] + s * (pts[k] - pts[k - 1])

        lo, hi = max(start_t, float(cum[k - 1])), float(cum[k])
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if float(np.max(np.linalg.norm(q - point_at(mid), axis=1))) < epsilon:
                lo = mid
            else:
                hi = mid
        cut_t = hi
        if k == len(pts) - 1 and cut_t >= total - tol:
            # the supremum is the end of the path: it closes the last piece
            current.append(pts[k])
            k += 1
            break
        cut = point_at(cut_t)
        current.append(cut)
        pieces.append(np.asarray(current))
        breakpoints.append(cut_t)
        start_t = cut_t
        current = [cut]
        diam = 0.0
    pieces.append(np.asarray(current))
    breakpoints.append(total)
    return PieceDecomposition(
        float(epsilon), np.asarray(breakpoints), pieces, total, 1e-9 * max(total, 1.0)
    )


def measure_bound(dec: PieceDecomposition) -> dict:
    """Three upper estimates for the outer measure of the midpoint set.

    ``paper_bound = 64 eps^3 (n+1)^2`` covers each ``L_i + L_j`` by a cube of
    side ``4 eps`` (``2 eps`` would already do; the larger constant is kept).
    ``refined`` sums the volumes of ``bbox(L_i) + bbox(L_j)`` scaled by 1/8 for
    the halving.  ``final_form = 64 eps (L^2 + 2 eps L + eps^2)`` uses
    ``n + 1 <= L / eps + 1``.
    """
    eps = dec.epsilon
    n1 = dec.n + 1
    length = dec.length
    widths = np.array([p.max(axis=0) - p.min(axis=0) for p in dec.pieces])
    pair_sides = widths[:, None, :] + widths[None, :, :]
    refined = float(np.prod(pair_sides, axis=2).sum()) / 8
    paper_bound = 64 * eps ** 3 * n1 ** 2
    final_form = 64 * eps * (length ** 2 + 2 * eps * length + eps ** 2)
    count_ok = n1 <= length / eps + 1 + 1e-12
    return {
        "epsilon": eps,
        "n_pieces": n1,
        "length": length,
        "paper_bound": paper_bound,
        "refined": refined,
        "final_form": final_form,
        "tight_cube_bound": 8 * eps ** 3 * n1 ** 2,
        "piece_count_ok": bool(count_ok),
        "refined_ok": bool(refined <= paper_bound / 8 + 1e-12 * paper_bound),
        "final_form_ok": bool(paper_bound <= final_form * (1 + 1e-12)) if count_ok else None,
    }


# ---------------------------------------------------------------- voxels


@dataclass
class VoxelGrid:
    """Occupancy over cells ``[i h, (i+1) h)``; ``offset`` is the index of cell ``[0,0,0]``."""

    h: float
    offset: np.ndarray
    occupancy: np.ndarray
    upper: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def count(self) -> int:
        return int(self.occupancy.sum())

    @property
    def volume(self) -> float:
        return self.count * self.h ** 3

    @property
    def upper_count(self) -> int:
        return int(self.upper.sum()) if self.upper is not None else self.count

    @property
    def upper_volume(self) -> float:
        return self.upper_count * self.h ** 3

    def report(self) -> dict:
        return {
            "h": self.h,
            "voxel_count": self.count,
            "volume": self.volume,
            "upper_voxel_count": self.upper_count,
            "upper_volume": self.upper_volume,
        }

    def rle(self) -> str:
        """Run-length text: header line, then ``value count`` runs of the C-ordered bits."""
        flat = self.occupancy.ravel().astype(np.int8)
        change = np.flatnonzero(np.diff(flat)) + 1
        starts = np.concatenate([[0], change])
        ends = np.concatenate([change, [flat.size]])
        lines = [
            "# h={!r} shape={} offset={}".format(
                self.h, ",".join(map(str, self.occupancy.shape)), ",".join(map(str, self.offset))
            )
        ]
        lines += [f"{flat[s]} {e - s}" for s, e in zip(starts, ends)]
        return "\n".join(lines) + "\n"


def _cell_index(p: np.ndarray, m: float) -> np.ndarray:
    # rounding first keeps points that sit exactly on a grid plane in the upper cell
    return np.floor(np.round(p * m, 9)).astype(np.int64)


def midpoint_voxel_cover(a, b, h: float, unit_cube: Optional[bool] = None, symmetric=False):
    """Mark every voxel that contains a midpoint ``(x + y) / 2``, ``x in a``, ``y in b``.

    The occupied volume is a *lower* estimate of the midpoint set's outer
    measure (only sampled pairs are seen); ``upper`` dilates the occupancy by
    the 27-neighbourhood.  With ``unit_cube`` the grid is ``[0, 1]^3`` split
    into ``round(1/h)`` cells per axis (points on the far faces fall into the
    last cell); otherwise the grid spans the midpoints' bounding box.
    ``symmetric=True`` (for ``a is b``) only visits pairs ``i <= j``.
    """
    a, b = as_points(a), as_points(b)
    if not h > 0:
        raise ValueError("h must be positive")
    m = 1.0 / h
    lo = (a.min(axis=0) + b.min(axis=0)) / 2
    hi = (a.max(axis=0) + b.max(axis=0)) / 2
    if unit_cube is None:
        unit_cube = bool(np.all(lo >= 0) and np.all(hi <= 1))
    if unit_cube:
        cells = int(round(m))
        offset = np.zeros(3, dtype=np.int64)
        shape = (cells, cells, cells)
    else:
        offset = _cell_index(lo, m)
        shape = tuple(int(x) for x in (_cell_index(hi, m) - offset + 1))
    occ = np.zeros(shape, dtype=bool)
    top = np.array(shape) - 1
    chunk = max(1, 2_000_000 // len(b))
    for start in range(0, len(a), chunk):
        block = a[start:start + chunk]
        mids = (block[:, None, :] + b[None, :, :]) / 2
        if symmetric:
            i = np.arange(start, start + len(block))[:, None]
            j = np.arange(len(b))[None, :]
            mids = mids[np.broadcast_to(i <= j, mids.shape[:2])]
        idx = _cell_index(mids.reshape(-1, 3), m) - offset
        idx = np.clip(idx, 0, top)
        occ[idx[:, 0], idx[:, 1], idx[:, 2]] = True
    upper = ndimage.binary_dilation(np.pad(occ, 1), structure=np.ones((3, 3, 3), dtype=bool))
    return VoxelGrid(float(h), offset, occ, upper)


def voxel_sweep(a, b, hs: Sequence[float], symmetric=False) -> dict:
    """Voxel volume over several resolutions plus linear and log-log fits in ``h``."""
    grids = [midpoint_voxel_cover(a, b, h, unit_cube=False, symmetric=symmetric) for h in hs]
    h_arr = np.array([g.h for g in grids])
    vol = np.array([g.volume for g in grids])
    slope, intercept = np.polyfit(h_arr, vol, 1)
    pred = slope * h_arr + intercept
    ss_res = float(np.sum((vol - pred) ** 2))
    ss_tot = float(np.sum((vol - vol.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    exponent = float(np.polyfit(np.log(h_arr), np.log(np.maximum(vol, 1e-300)), 1)[0])
    return {
        "sweep": [g.report() for g in grids],
        "slope": float(slope),
        "intercept": float(intercept),
        "r2": r2,
        "loglog_exponent": exponent,
    }


# ---------------------------------------------------------------- coverage


def voxel_centers(m: int) -> list[tuple[Fraction, Fraction, Fraction]]:
    ticks = [Fraction(2 * i + 1, 2 * m) for i in range(m)]
    return [(x, y, z) for x in ticks for y in ticks for z in ticks]


def coverage_certificate(depth: int, m: int, table: Optional[PatternTable] = None) -> dict:
    """Largest witness-midpoint deviation over the ``m^3`` voxel centres.

    Every centre ``y`` is split into two curve points at depth ``depth``;
    the exact squared deviation of their midpoint from ``y`` is compared
    with ``(2 sqrt(3) 3^-depth)^2``.
    """
    table = table or default_table()
    bound_sq = witness_bound_sq(depth)
    worst = Fraction(0)
    failures = 0
    for y in voxel_centers(m):
        dev = witness_deviation_sq(y, depth, table)
        worst = max(worst, dev)
        failures += dev > bound_sq
    return {
        "depth": depth,
        "grid": m,
        "points": m ** 3,
        "max_deviation": math.sqrt(worst),
        "max_deviation_sq": [worst.numerator, worst.denominator],
        "bound": math.sqrt(bound_sq),
        "failures": failures,
        "ok": failures == 0,
    }


# ---------------------------------------------------------------- Minkowski averages


def sample_convex_hull(points, spacing: float) -> np.ndarray:
    """Points of the convex hull: a lattice inside it plus the input points.

    Works in the affine hull of the input, so flat (planar, collinear)
    sets are handled.
    """
    pts = as_points(points)
    center = pts.mean(axis=0)
    _, sing, vt = np.linalg.svd(pts - center, full_matrices=False)
    scale = float(sing[0]) if len(sing) else 0.0
    rank = int(np.sum(sing > 1e-9 * max(scale, 1.0)))
    if rank == 0:
        return pts[:1].copy()
    basis = vt[:rank]
    proj = (pts - center) @ basis.T
    lo, hi = proj.min(axis=0), proj.max(axis=0)
    axes = [np.arange(l, h + spacing / 2, spacing) for l, h in zip(lo, hi)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, rank)
    if rank == 1:
        inside = grid
    else:
        tri = Delaunay(proj)
        inside = grid[tri.find_simplex(grid, tol=1e-9) >= 0]
    lifted = center + inside @ basis
    return np.vstack([lifted, pts])


def _dedup(points: np.ndarray, quantum: float) -> np.ndarray:
    cells = np.round(points / quantum).astype(np.int64)
    cells -= cells.min(axis=0)
    span = cells.max(axis=0) + 1
    keys = (cells[:, 0] * span[1] + cells[:, 1]) * span[2] + cells[:, 2]
    _, first = np.unique(keys, return_index=True)
    return points[np.sort(first)]


def sf_sequence(points, k_max: int, grid: int = 200, hull_spacing: Optional[float] = None):
    """Hausdorff distance from ``(1/k)(G + ... + G)`` to the sampled hull of ``G``.

    Sum sets are built incrementally as running averages and thinned to one
    representative per cell of a ``1/grid`` lattice (relative to the extent
    of ``G``), which caps the cost at about ``grid^dim * |G|`` per step.
    """
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    pts = as_points(points)
    extent = float(np.max(pts.max(axis=0) - pts.min(axis=0)))
    scale = extent if extent > 0 else 1.0
    quantum = scale / grid
    hull = sample_convex_hull(pts, hull_spacing or scale / 50)
    out = []
    avg = _dedup(pts, quantum)
    for k in range(1, k_max + 1):
        if k > 1:
            parts = []
            chunk = max(1, 1_000_000 // len(pts))
            for start in range(0, len(avg), chunk):
                block = avg[start:start + chunk]
                new = ((k - 1) * block[:, None, :] + pts[None, :, :]) / k
                parts.append(_dedup(new.reshape(-1, 3), quantum))
            avg = _dedup(np.vstack(parts), quantum)
        out.append({"k": k, "hausdorff": hausdorff(avg, hull), "points": int(len(avg))})
    return out
