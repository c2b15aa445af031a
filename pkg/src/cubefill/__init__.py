"""Exact finite-depth construction of a simple closed curve in the unit cube
whose midpoint set is the whole cube, plus the rectifiable-curve bounds."""

from . import analysis, cantor, curve, param, pattern
from .curve import Fractal, Return, build_polyline, evaluate, witness_pair
from .pattern import NotFound, default_table, pattern_closure, validate_tree

__version__ = "0.1.0"

__all__ = [
    "analysis",
    "cantor",
    "curve",
    "param",
    "pattern",
    "Fractal",
    "Return",
    "NotFound",
    "build_polyline",
    "default_table",
    "evaluate",
    "pattern_closure",
    "validate_tree",
    "witness_pair",
]
