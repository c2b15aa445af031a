"""Parameter scaffold on [0, 1].

Every address ``s`` (a finite word over ``0..7``) owns a closed segment
``K_s = [in_s, out_s]`` of length ``15**-len(s)``.  The segment is cut into
15 equal pieces: eight closed children ``K_{s+i}`` at even positions and
seven open gaps ``I_s(j)`` at odd positions.  All values are exact; a
parameter produced at depth ``n`` is stored as ``numerator / 15**n``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence, Union

Address = tuple[int, ...]

CLOSED = "closed"
GAP = "gap"
ZERO = "zero"
SEVEN = "seven"


def as_address(digits: Sequence[int]) -> Address:
    """Validate and freeze a digit sequence."""
    address = tuple(int(d) for d in digits)
    for d in address:
        if not 0 <= d <= 7:
            raise ValueError(f"address digit {d} outside 0..7")
    return address


@dataclass(frozen=True)
class ParamValue:
    """Exact parameter ``num / 15**exp``."""

    num: int
    exp: int

    def __post_init__(self):
        if self.exp < 0:
            raise ValueError("negative exponent")
        if not 0 <= self.num <= 15 ** self.exp:
            raise ValueError("parameter outside [0, 1]")

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, 15 ** self.exp)

    def __float__(self):
        return self.num / 15 ** self.exp

    def __eq__(self, other):
        if isinstance(other, ParamValue):
            return self.num * 15 ** other.exp == other.num * 15 ** self.exp
        if isinstance(other, (int, Fraction)):
            return self.value == other
        return NotImplemented

    def __lt__(self, other):
        return self.value < _fraction(other)

    def __le__(self, other):
        return self.value <= _fraction(other)

    def __gt__(self, other):
        return self.value > _fraction(other)

    def __ge__(self, other):
        return self.value >= _fraction(other)

    def __hash__(self):
        return hash(self.value)


def _fraction(x) -> Fraction:
    return x.value if isinstance(x, ParamValue) else Fraction(x)


@dataclass(frozen=True)
class ParamInterval:
    lo: ParamValue
    hi: ParamValue
    kind: str

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("empty interval")

    @property
    def length(self) -> Fraction:
        return self.hi.value - self.lo.value

    def contains(self, t) -> bool:
        t = _fraction(t)
        if self.kind == CLOSED:
            return self.lo.value <= t <= self.hi.value
        return self.lo.value < t < self.hi.value


def _in_numerator(s: Address) -> int:
    # in_s * 15**len(s); each digit i shifts by 2i/15 of the parent length
    num = 0
    for d in s:
        num = 15 * num + 2 * d
    return num


def segment(s: Sequence[int]) -> ParamInterval:
    """The closed segment ``K_s``."""
    s = as_address(s)
    num = _in_numerator(s)
    n = len(s)
    return ParamInterval(ParamValue(num, n), ParamValue(num + 1, n), CLOSED)


def child_segment(s: Sequence[int], i: int) -> ParamInterval:
    """``K_{s+i}``: the (2i)-th of the 15 equal pieces of ``K_s``."""
    if not 0 <= i <= 7:
        raise ValueError(f"child index {i} outside 0..7")
    return segment(tuple(s) + (i,))


def gap_interval(s: Sequence[int], j: int) -> ParamInterval:
    """Open gap ``I_s(j) = (out_{s+j}, in_{s+j+1})`` for ``0 <= j <= 6``."""
    if not 0 <= j <= 6:
        raise ValueError(f"gap index {j} outside 0..6")
    s = as_address(s)
    left = child_segment(s, j)
    right = child_segment(s, j + 1)
    return ParamInterval(left.hi, right.lo, GAP)


def address_to_param(x: Sequence[int], pad: str = ZERO) -> ParamValue:
    """Parameter of the limit point ``x`` followed by all 0s (``in_x``) or all 7s (``out_x``)."""
    seg = segment(x)
    if pad == ZERO:
        return seg.lo
    if pad == SEVEN:
        return seg.hi
    raise ValueError(f"unknown pad {pad!r}")


def boundary_points(s: Sequence[int]) -> list[ParamValue]:
    """The 16 points in_{s+0} < out_{s+0} < ... < out_{s+7} cutting ``K_s``."""
    pts = []
    for i in range(8):
        k = child_segment(s, i)
        pts.extend((k.lo, k.hi))
    return pts


class Gap(NamedTuple):
    address: Address
    j: int
    local: Fraction


class LimitPrefix(NamedTuple):
    address: Address


Classified = Union[Gap, LimitPrefix]


def classify_param(t, max_depth: int) -> Classified:
    """Locate ``t`` in the scaffold down to ``max_depth`` levels.

    Returns ``Gap(s, j, local)`` when ``t`` lies in an open gap ``I_s(j)``
    with ``len(s) < max_depth`` (``local`` is the affine coordinate in
    ``(0, 1)``), otherwise ``LimitPrefix(s)`` with ``len(s) == max_depth``
    and ``t`` in ``K_s``.  Endpoints shared by a closed segment and a gap
    belong to the closed segment.
    """
    t = _fraction(t)
    if not 0 <= t <= 1:
        raise ValueError(f"parameter {t} outside [0, 1]")
    if max_depth < 0:
        raise ValueError("negative depth")
    s: list[int] = []
    lo_num = 0
    for depth in range(max_depth):
        # position inside K_s measured in units of |K_s| / 15
        r = (t * 15 ** (depth + 1)) - 15 * lo_num
        k = r.numerator // r.denominator
        if k % 2 == 1 and r.denominator != 1:
            return Gap(tuple(s), (k - 1) // 2, r - k)
        i = min(k // 2, 7)
        s.append(i)
        lo_num = 15 * lo_num + 2 * i
    return LimitPrefix(tuple(s))


def addresses(depth: int):
    """All addresses of the given length in lexicographic (= parameter) order."""
    if depth == 0:
        yield ()
        return
    for head in addresses(depth - 1):
        for d in range(8):
            yield head + (d,)
