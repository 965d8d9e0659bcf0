"""Exact square counts in W, by direct membership and by the character-sum identity."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .digit_space import DigitSpec, iter_w_blocks
from .errors import ParityViolation
from .field_core import ENUM_CAP, codes_of, quadratic_char_many


@dataclass(frozen=True)
class CountReport:
    w_size: int
    squares: int
    squares_with_zero: int
    nonsquares: int
    char_sum: int
    zero_in_w: bool

    @property
    def deviation(self) -> Fraction:
        """| |W cap Q| - |W|/2 | as an exact rational."""
        return abs(Fraction(2 * self.squares - self.w_size, 2))

    def to_json(self) -> dict:
        return {
            "w_size": str(self.w_size),
            "squares": str(self.squares),
            "squares_with_zero": str(self.squares_with_zero),
            "nonsquares": str(self.nonsquares),
            "char_sum": str(self.char_sum),
            "zero_in_w": self.zero_in_w,
            "deviation": str(self.deviation),
        }


def count_squares_enum(spec: DigitSpec, cap: int = ENUM_CAP) -> CountReport:
    """Stream W and test each element against the table of nonzero squares {y^2}."""
    ctx = spec.ctx
    if ctx.q <= ctx.table_cap:
        flags = ctx.square_flags

        def is_square(blk):
            return flags[codes_of(ctx, blk)]
    else:  # no room for a table of size q: fall back to the character
        def is_square(blk):
            return quadratic_char_many(ctx, blk) == 1

    squares = zeros = 0
    for blk in iter_w_blocks(spec, cap):
        squares += int(np.count_nonzero(is_square(blk)))
        zeros += int(np.count_nonzero(~blk.any(axis=1)))
    n = spec.w_size
    nonsquares = n - squares - zeros
    return CountReport(n, squares, squares + zeros, nonsquares, squares - nonsquares, zeros == 1)


def character_sum(spec: DigitSpec, cap: int = ENUM_CAP) -> int:
    """sum_{x in W} chi(x), exact."""
    total = 0
    for blk in iter_w_blocks(spec, cap):
        total += int(quadratic_char_many(spec.ctx, blk).sum(dtype=np.int64))
    return total


def count_squares_identity(spec: DigitSpec, cap: int = ENUM_CAP) -> CountReport:
    """|W cap Q| = (|W| - [0 in W])/2 + S/2 with S the character sum over W."""
    n = spec.w_size
    zero = spec.zero_in_w
    s = character_sum(spec, cap)
    twice = n - int(zero) + s
    if twice % 2:
        raise ParityViolation(f"|W| - [0 in W] + S = {twice} is odd")
    squares = twice // 2
    nonsquares = n - int(zero) - squares
    if not 0 <= squares <= n or nonsquares < 0:
        raise ParityViolation(f"identity produced an impossible count {squares}")
    return CountReport(n, squares, squares + int(zero), nonsquares, s, zero)
