"""File formats: polyline CSV/OBJ, canonical JSON, atomic writes."""
from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path

from .curve import Fractal, PolyCurve


def encode15(t) -> tuple[int, int]:
    """``(numerator, e)`` with ``t = numerator / 15**e`` and ``e`` minimal."""
    t = Fraction(t)
    den, e = t.denominator, 0
    for p in (3, 5):
        k = 0
        while den % p == 0:
            den //= p
            k += 1
        e = max(e, k)
    if den != 1:
        raise ValueError(f"{t} has no power-of-15 denominator")
    return t.numerator * 15 ** e // t.denominator, e


def polyline_csv(poly: PolyCurve) -> str:
    lines = ["t_numerator,t_denom_exp15,x,y,z"]
    for pos, p in zip(poly.positions, poly.points):
        if not isinstance(pos, Fractal):
            raise ValueError("polyline vertices must carry fractal parameters")
        num, e = encode15(pos.t)
        lines.append(f"{num},{e},{float(p[0])!r},{float(p[1])!r},{float(p[2])!r}")
    return "\n".join(lines) + "\n"


def polyline_obj(poly: PolyCurve) -> str:
    lines = [f"v {float(p[0])!r} {float(p[1])!r} {float(p[2])!r}" for p in poly.points]
    idx = list(range(1, len(poly.points) + 1))
    if poly.closed:
        idx.append(1)
    lines.append("l " + " ".join(map(str, idx)))
    return "\n".join(lines) + "\n"


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_atomic(path, text: str) -> None:
    """Write via a temporary sibling so a failed run never leaves a partial file."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise
