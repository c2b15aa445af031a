"""The closed curve: exact evaluation, polyline approximations and finite-depth diagnostics.

The circle is the half-open interval ``[0, 2*pi)`` with the wrap-around
metric.  ``[0, 1]`` carries the fractal part (gaps map affinely onto
connections, limit points onto limit points of the cube nest); ``(1, 2*pi)``
carries the return segment from the root exit back to the root entry.  The
return part is addressed by a normalised ``u`` in ``(0, 1)`` so that pi never
enters exact arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np

from . import param
from .cantor import cantor3_split
from .pattern import (
    PatternTable,
    children,
    default_table,
    descend_corner_word,
    locate,
    node_connections,
    root_node,
)

TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class Fractal:
    """Parameter ``t`` in [0, 1]."""

    t: Fraction

    def __post_init__(self):
        t = self.t.value if isinstance(self.t, param.ParamValue) else Fraction(self.t)
        if not 0 <= t <= 1:
            raise ValueError(f"fractal parameter {t} outside [0, 1]")
        object.__setattr__(self, "t", t)

    def angle(self) -> float:
        return float(self.t)


@dataclass(frozen=True)
class Return:
    """Normalised position ``u`` along the return interval (1, 2*pi)."""

    u: Fraction

    def __post_init__(self):
        u = Fraction(self.u)
        if not 0 < u < 1:
            raise ValueError(f"return position {u} outside (0, 1)")
        object.__setattr__(self, "u", u)

    def angle(self) -> float:
        return 1 + float(self.u) * (TWO_PI - 1)


CirclePos = Union[Fractal, Return]


def circle_distance(a: CirclePos, b: CirclePos) -> float:
    """Wrap-around distance on [0, 2*pi), in binary64 (reporting only)."""
    d = abs(a.angle() - b.angle())
    return min(d, TWO_PI - d)


class CurvePoint(NamedTuple):
    point: tuple
    error_sq: Fraction  # squared l2 radius around ``point`` containing the true value

    @property
    def error(self) -> float:
        return math.sqrt(self.error_sq)


def _lerp(a, b, s):
    return tuple(x + s * (y - x) for x, y in zip(a, b))


# gap coordinate of a chain waypoint; a multiple of 1/15 keeps parameters 15-adic
CHAIN_SPLIT = Fraction(7, 15)


def along_chain(chain: Sequence, local: Fraction):
    """Point at ``local`` in [0, 1] along a 2- or 3-point connection."""
    if len(chain) == 2:
        return _lerp(chain[0], chain[1], local)
    a, w, b = chain
    if local <= CHAIN_SPLIT:
        return _lerp(a, w, local / CHAIN_SPLIT)
    return _lerp(w, b, (local - CHAIN_SPLIT) / (1 - CHAIN_SPLIT))


def limit_error_sq(depth: int) -> Fraction:
    """Squared diameter of a depth-``depth`` cube: 3 * 9**-depth."""
    return Fraction(3, 9 ** depth)


def evaluate(pos: CirclePos, depth: int, table: Optional[PatternTable] = None) -> CurvePoint:
    """Curve value at ``pos`` resolved to ``depth`` levels.

    Gap and return positions are exact.  A limit position is represented by
    the entry vertex of its depth-``depth`` cube, or exactly by the entry or
    exit vertex when ``t`` is that cube's own endpoint.
    """
    table = table or default_table()
    if isinstance(pos, Return):
        return CurvePoint(_lerp(table.root_exit, table.root_entry, pos.u), Fraction(0))
    found = param.classify_param(pos.t, depth)
    if isinstance(found, param.Gap):
        node = locate(table, found.address)
        chain = node_connections(table, node)[found.j]
        return CurvePoint(along_chain(chain, found.local), Fraction(0))
    node = locate(table, found.address)
    seg = param.segment(found.address)
    if pos.t == seg.lo.value:
        return CurvePoint(node.entry, Fraction(0))
    if pos.t == seg.hi.value:
        return CurvePoint(node.exit, Fraction(0))
    return CurvePoint(node.entry, limit_error_sq(depth))


@dataclass
class PolyCurve:
    """Ordered exact vertices tagged with their circle positions.

    ``kinds[i]`` describes the edge from vertex ``i`` to vertex ``i + 1``:
    ``"chord"`` (inside one finest cube), ``"connection"`` (exact curve
    piece) or ``"return"`` (closing edge).
    """

    positions: list
    points: list
    kinds: list
    closed: bool = True

    def __len__(self):
        return len(self.points)

    def as_array(self) -> np.ndarray:
        return np.array([[float(c) for c in p] for p in self.points], dtype=float)

    def edges(self):
        n = len(self.points)
        stop = n if self.closed else n - 1
        for i in range(stop):
            yield self.points[i], self.points[(i + 1) % n]

    def squared_edge_lengths(self) -> list[Fraction]:
        return [sum((x - y) ** 2 for x, y in zip(a, b)) for a, b in self.edges()]

    def length(self) -> float:
        return math.fsum(math.sqrt(q) for q in self.squared_edge_lengths())


def build_polyline(depth: int, table: Optional[PatternTable] = None) -> PolyCurve:
    """Closed polygon through all depth-``depth`` entry/exit vertices in parameter order.

    Each depth-``depth`` cube contributes the chord from its entry to its
    exit vertex; consecutive chords are joined by the exact connections
    (with their waypoints, if any), and the polygon closes along the return
    segment.
    """
    table = table or default_table()
    positions: list = []
    points: list = []
    kinds: list = []

    def rec(node):
        if len(node.address) == depth:
            seg = param.segment(node.address)
            positions.extend((Fractal(seg.lo), Fractal(seg.hi)))
            points.extend((node.entry, node.exit))
            kinds.extend(("chord", "connection"))
            return
        kids = children(table, node)
        conns = node_connections(table, node)
        for i, kid in enumerate(kids):
            rec(kid)
            if i < 7 and len(conns[i]) == 3:
                gap = param.gap_interval(node.address, i)
                positions.append(Fractal(gap.lo.value + CHAIN_SPLIT * gap.length))
                points.append(conns[i][1])
                kinds.append("connection")

    rec(root_node(table))
    kinds[-1] = "return"
    return PolyCurve(positions, points, kinds, closed=True)


def witness_pair(y: Sequence, depth: int, table: Optional[PatternTable] = None):
    """Two curve positions whose midpoint is within 2*sqrt(3)*3**-depth of ``y``."""
    table = table or default_table()
    return tuple(
        Fractal(param.address_to_param(node.address, param.ZERO))
        for node in _witness_nodes(y, depth, table)
    )


def _witness_nodes(y, depth, table):
    return [descend_corner_word(table, w) for w in cantor3_split(y, depth)]


def witness_deviation_sq(y: Sequence, depth: int, table: Optional[PatternTable] = None) -> Fraction:
    """Exact squared distance between ``y`` and the midpoint of its witness pair."""
    table = table or default_table()
    y = tuple(Fraction(c) for c in y)
    # the entry vertex of a node is the exact curve value at its in-parameter
    a, b = (node.entry for node in _witness_nodes(y, depth, table))
    return sum(((u + v) / 2 - w) ** 2 for u, v, w in zip(a, b, y))


def witness_bound_sq(depth: int) -> Fraction:
    """(2 * sqrt(3) * 3**-depth) ** 2."""
    return Fraction(12, 9 ** depth)


class LengthStats(NamedTuple):
    depth: int
    polyline_length: float
    lower_bound: Fraction

    def to_dict(self) -> dict:
        return {
            "depth": self.depth,
            "polyline_length": self.polyline_length,
            "lower_bound": [self.lower_bound.numerator, self.lower_bound.denominator],
            "lower_bound_float": float(self.lower_bound),
        }


def connection_lower_bound(depth: int) -> Fraction:
    """Sum over levels k < depth of 7 * 8**k * 3**-(k+1).

    Every level-k connection joins two disjoint sibling cubes whose
    l-infinity distance is at least 3**-(k+1).
    """
    return sum((Fraction(7 * 8 ** k, 3 ** (k + 1)) for k in range(depth)), Fraction(0))


def length_stats(depth: int, table: Optional[PatternTable] = None) -> LengthStats:
    poly = build_polyline(depth, table)
    return LengthStats(depth, poly.length(), connection_lower_bound(depth))


def modulus_check(depth: int, samples_per_gap: int, table: Optional[PatternTable] = None) -> dict:
    """Largest jump between adjacent samples of the curve at resolution ``depth``.

    Samples: every depth-``depth`` entry/exit vertex (exact curve values)
    plus ``samples_per_gap - 1`` interior points on every connection of
    level ``< depth`` and on the return segment.  Adjacent samples inside a
    depth-``depth`` cube are at most its diameter apart; inside a
    connection they are a ``1/samples_per_gap`` fraction of it.  This is an
    empirical certificate that the jumps shrink with depth, not a proof.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    m = samples_per_gap
    if m < 1:
        raise ValueError("samples_per_gap must be positive")
    table = table or default_table()
    poly = build_polyline(depth, table)
    n_pts = len(poly)

    max_chord_sq = Fraction(0)
    max_chunk_sq = Fraction(0)
    max_circle = 0.0
    samples = n_pts
    for i, ((a, b), kind) in enumerate(zip(poly.edges(), poly.kinds)):
        d_sq = sum((x - y) ** 2 for x, y in zip(a, b))
        if kind == "chord":
            max_chord_sq = max(max_chord_sq, d_sq)
            step = circle_distance(poly.positions[i], poly.positions[i + 1])
        else:
            samples += m - 1
            max_chunk_sq = max(max_chunk_sq, d_sq / m ** 2)
            if kind == "return":
                step = (TWO_PI - 1) / m
            else:
                step = circle_distance(poly.positions[i], poly.positions[i + 1]) / m
        max_circle = max(max_circle, step)
    wrap_sq = sum((x - y) ** 2 for x, y in zip(table.root_exit, table.root_entry)) / m ** 2
    max_dist = math.sqrt(max(max_chord_sq, max_chunk_sq))
    bound = math.sqrt(3) * 3.0 ** -(depth // 2) + math.sqrt(max_chunk_sq)
    return {
        "depth": depth,
        "samples_per_gap": m,
        "samples": samples,
        "max_adjacent_distance": max_dist,
        "max_chord": math.sqrt(max_chord_sq),
        "max_connection_chunk": math.sqrt(max_chunk_sq),
        "max_circle_step": max_circle,
        "wrap_distance": math.sqrt(wrap_sq),
        "bound": bound,
        "within_bound": max_dist <= bound,
    }
