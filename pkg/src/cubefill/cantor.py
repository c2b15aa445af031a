"""Ternary digits, Cantor-set digit words and the midpoint splitting of [0, 1]^3.

Every ``y`` in [0, 1] has ternary digits ``d_k`` in {0, 1, 2}.  Writing each
``d_k = b_k + c_k`` with ``b_k, c_k`` in {0, 1} gives two numbers with digits
``2 b_k`` and ``2 c_k`` in the Cantor set whose average is ``y``.  Doing this
per axis splits a point of the cube into the midpoint of two points of C^3.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

Corner = tuple[int, int, int]
CornerWord = tuple[Corner, ...]


def ternary_expand(y, n: int) -> tuple[int, ...]:
    """Greedy ternary digits ``d_0 .. d_{n-1}`` of ``y``.

    ``0 <= y - sum(d_k 3**-(k+1)) < 3**-n``; ``y = 1`` yields all 2s.
    """
    y = Fraction(y)
    if not 0 <= y <= 1:
        raise ValueError(f"{y} outside [0, 1]")
    if y == 1:
        return (2,) * n
    digits = []
    r = y
    for _ in range(n):
        r *= 3
        d = r.numerator // r.denominator
        digits.append(d)
        r -= d
    return tuple(digits)


def ternary_value(digits: Sequence[int]) -> Fraction:
    num = 0
    for d in digits:
        num = 3 * num + d
    return Fraction(num, 3 ** len(digits))


def midpoint_split(digits: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split ternary digits into two {0, 2} words averaging to the input.

    A digit 1 goes to the first word (b=1, c=0).
    """
    a, b = [], []
    for d in digits:
        if d == 0:
            a.append(0)
            b.append(0)
        elif d == 1:
            a.append(2)
            b.append(0)
        elif d == 2:
            a.append(2)
            b.append(2)
        else:
            raise ValueError(f"ternary digit {d} outside 0..2")
    return tuple(a), tuple(b)


def cantor3_split(y: Sequence, n: int) -> tuple[CornerWord, CornerWord]:
    """Split a point of [0, 1]^3 into two depth-``n`` corner words.

    The words select, level by level and axis by axis, the low (0) or high (1)
    corner cube.  Their values average to ``y`` truncated to ``n`` ternary
    digits per axis.
    """
    if len(y) != 3:
        raise ValueError("expected a 3D point")
    per_axis = [midpoint_split(ternary_expand(c, n)) for c in y]
    p = tuple(tuple(per_axis[ax][0][k] // 2 for ax in range(3)) for k in range(n))
    q = tuple(tuple(per_axis[ax][1][k] // 2 for ax in range(3)) for k in range(n))
    return p, q


def corner_word_value(word: Sequence[Corner]) -> tuple[Fraction, Fraction, Fraction]:
    """Per axis ``sum_k 2 h_k 3**-(k+1)``: the low corner of the selected cube."""
    n = len(word)
    nums = [0, 0, 0]
    for h in word:
        for ax in range(3):
            if h[ax] not in (0, 1):
                raise ValueError(f"corner selector {h} not in {{0,1}}^3")
            nums[ax] = 3 * nums[ax] + 2 * h[ax]
    return tuple(Fraction(v, 3 ** n) for v in nums)


def cantor_level(n: int) -> list[Fraction]:
    """Left endpoints of the 2**n intervals of the depth-``n`` Cantor approximation."""
    return [ternary_value(w) for w in itertools.product((0, 2), repeat=n)]
