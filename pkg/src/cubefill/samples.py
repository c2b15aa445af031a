"""Sampled test curves for the rectifiable-curve and Minkowski-average experiments."""
from __future__ import annotations

import csv
from pathlib import Path
from typing import Optional

import numpy as np

BUILTIN = ("circle", "square", "helix", "L-polyline")


def _params(n: int, seed: Optional[int]) -> np.ndarray:
    # a seeded phase shift; the default keeps t = 0 as the first sample
    phase = 0.0 if seed is None else float(np.random.default_rng(seed).random())
    return (np.arange(n) + phase) / n


def circle(n: int = 2000, radius: float = 1.0, seed: Optional[int] = None) -> np.ndarray:
    """Closed unit circle in the plane z = 0 (length 2*pi*radius)."""
    th = 2 * np.pi * _params(n, seed)
    return np.c_[radius * np.cos(th), radius * np.sin(th), np.zeros(n)]


def square(n: int = 400, seed: Optional[int] = None) -> np.ndarray:
    """Closed boundary of the unit square in the plane z = 0."""
    s = 4 * _params(n, seed)
    x = np.select([s < 1, s < 2, s < 3], [s, 1.0, 3 - s], 0.0)
    y = np.select([s < 1, s < 2, s < 3], [0.0, s - 1, 1.0], 4 - s)
    return np.c_[x, y, np.zeros(n)]


def helix(n: int = 2000, turns: float = 2.0, radius: float = 0.5, rise: float = 1.0,
          seed: Optional[int] = None) -> np.ndarray:
    """Open helix around the z axis."""
    t = _params(n, seed)
    th = 2 * np.pi * turns * t
    return np.c_[radius * np.cos(th), radius * np.sin(th), rise * t]


def l_polyline(n: int = 200, seed: Optional[int] = None) -> np.ndarray:
    """Open L: from (1, 0, 0) to the origin, then up to (0, 1, 0)."""
    s = np.linspace(0.0, 2.0, n) if seed is None else np.sort(2 * _params(n, seed))
    return np.c_[np.where(s < 1, 1 - s, 0.0), np.where(s < 1, 0.0, s - 1), np.zeros(n)]


def load_points(path) -> np.ndarray:
    """Points from ``.npy`` or CSV (columns x, y, z; a header row is skipped)."""
    path = Path(path)
    if path.suffix == ".npy":
        pts = np.load(path)
    else:
        rows = []
        with path.open(newline="") as fh:
            for row in csv.reader(fh):
                try:
                    rows.append([float(v) for v in row[-3:]])
                except ValueError:
                    if rows:
                        raise
        pts = np.array(rows)
    pts = np.asarray(pts, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3 or len(pts) == 0:
        raise ValueError(f"{path}: expected rows of x, y, z")
    return pts


def named_curve(spec: str, n: Optional[int] = None, seed: Optional[int] = None):
    """``(points, closed)`` for a built-in name or ``file:PATH``."""
    if spec.startswith("file:"):
        return load_points(spec[5:]), False
    if spec == "circle":
        return circle(n or 2000, seed=seed), True
    if spec == "square":
        return square(n or 400, seed=seed), True
    if spec == "helix":
        return helix(n or 2000, seed=seed), False
    if spec == "L-polyline":
        return l_polyline(n or 200, seed=seed), False
    raise KeyError(spec)
