"""
Exact arithmetic in the real quartic field Q(beta), beta = 2cos(pi/10).

Elements are stored as four integer numerators over one positive common
denominator in the power basis {1, beta, beta^2, beta^3}; products are reduced
with beta^4 = 5 beta^2 - 5.
"""

import logging
import re
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Tuple, Union

import mpmath

from src.errors import PreconditionError
from src.utils import fmt_rat

logger = logging.getLogger(__name__)

Number = Union[int, Fraction, "KElem"]


def _reduce(nums: Tuple[int, int, int, int], den: int) -> Tuple[Tuple[int, int, int, int], int]:
    if den < 0:
        nums, den = tuple(-n for n in nums), -den
    g = den
    for n in nums:
        g = gcd(g, n)
        if g == 1:
            return nums, den
    if g == 0:
        return (0, 0, 0, 0), 1
    return tuple(n // g for n in nums), den // g


class KElem:
    """Immutable element c0 + c1 b + c2 b^2 + c3 b^3 of Q(b)."""

    __slots__ = ("_nums", "_den", "_hash")

    def __init__(self, c0=0, c1=0, c2=0, c3=0):
        coords = [Fraction(c) for c in (c0, c1, c2, c3)]
        den = 1
        for c in coords:
            den = den * c.denominator // gcd(den, c.denominator)
        nums = tuple(c.numerator * (den // c.denominator) for c in coords)
        self._nums, self._den = _reduce(nums, den)
        self._hash = None

    @classmethod
    def _raw(cls, nums, den) -> "KElem":
        obj = cls.__new__(cls)
        obj._nums, obj._den = _reduce(tuple(nums), den)
        obj._hash = None
        return obj

    @classmethod
    def coerce(cls, value: Number) -> "KElem":
        if isinstance(value, KElem):
            return value
        if isinstance(value, int):
            return cls._raw((value, 0, 0, 0), 1)
        if isinstance(value, Fraction):
            return cls._raw((value.numerator, 0, 0, 0), value.denominator)
        raise TypeError(f"cannot coerce {type(value).__name__} into Q(beta)")

    @property
    def coords(self) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
        return tuple(Fraction(n, self._den) for n in self._nums)

    def is_zero(self) -> bool:
        return not any(self._nums)

    def is_rational(self) -> bool:
        return not any(self._nums[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise PreconditionError(f"{self!r} is not rational")
        return Fraction(self._nums[0], self._den)

    # arithmetic

    def __add__(self, other):
        try:
            o = KElem.coerce(other)
        except TypeError:
            return NotImplemented
        d = self._den * o._den
        return KElem._raw((a * o._den + b * self._den for a, b in zip(self._nums, o._nums)), d)

    __radd__ = __add__

    def __neg__(self):
        return KElem._raw((-n for n in self._nums), self._den)

    def __sub__(self, other):
        try:
            o = KElem.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        try:
            o = KElem.coerce(other)
        except TypeError:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            return KElem._raw((n * other for n in self._nums), self._den)
        try:
            o = KElem.coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self._nums, o._nums
        p = [0] * 7
        for i in range(4):
            if a[i]:
                for j in range(4):
                    p[i + j] += a[i] * b[j]
        nums = (
            p[0] - 5 * p[4] - 25 * p[6],
            p[1] - 5 * p[5],
            p[2] + 5 * p[4] + 20 * p[6],
            p[3] + 5 * p[5],
        )
        return KElem._raw(nums, self._den * o._den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = KElem.coerce(other)
        except TypeError:
            return NotImplemented
        return self * k_inv(o)

    def __rtruediv__(self, other):
        return KElem.coerce(other) * k_inv(self)

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else k_inv(self)
        result = KElem._raw((1, 0, 0, 0), 1)
        e = abs(exponent)
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # comparison and hashing

    def __eq__(self, other):
        try:
            o = KElem.coerce(other)
        except TypeError:
            return NotImplemented
        return self._nums == o._nums and self._den == o._den

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(Fraction(self._nums[0], self._den))
            else:
                self._hash = hash((self._nums, self._den))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    def to_mpf(self):
        """Value at the current mpmath precision."""
        b = 2 * mpmath.cos(mpmath.pi / 10)
        c0, c1, c2, c3 = self._nums
        return (c0 + b * (c1 + b * (c2 + b * c3))) / self._den

    def __float__(self):
        with mpmath.workdps(30):
            return float(self.to_mpf())

    def __repr__(self):
        return "KElem(" + ", ".join(fmt_rat(c) for c in self.coords) + ")"

    def __str__(self):
        if self.is_rational():
            return fmt_rat(self.rational())
        return "(" + ", ".join(fmt_rat(c) for c in self.coords) + ")"


ZERO = KElem._raw((0, 0, 0, 0), 1)
ONE = KElem._raw((1, 0, 0, 0), 1)
BETA = KElem._raw((0, 1, 0, 0), 1)


def k_add(a: Number, b: Number) -> KElem:
    return KElem.coerce(a) + b


def k_mul(a: Number, b: Number) -> KElem:
    return KElem.coerce(a) * b


def k_inv(a: Number) -> KElem:
    """Inverse by solving the 4x4 multiplication system over Q."""
    a = KElem.coerce(a)
    if a.is_zero():
        raise ZeroDivisionError("inverse of zero in Q(beta)")
    if a.is_rational():
        return KElem.coerce(1 / a.rational())
    # columns are the coordinates of a * beta^j
    cols = []
    col = a
    for _ in range(4):
        cols.append(col.coords)
        col = col * BETA
    rows = [[cols[j][i] for j in range(4)] + [Fraction(int(i == 0))] for i in range(4)]
    for c in range(4):
        pivot = next(r for r in range(c, 4) if rows[r][c] != 0)
        rows[c], rows[pivot] = rows[pivot], rows[c]
        pv = rows[c][c]
        rows[c] = [x / pv for x in rows[c]]
        for r in range(4):
            if r != c and rows[r][c] != 0:
                factor = rows[r][c]
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[c])]
    return KElem(*(rows[i][4] for i in range(4)))


def k_embed(a: Number, digits: int) -> str:
    """Decimal approximation of a, correctly rounded to `digits` significant digits."""
    if digits < 1:
        raise PreconditionError("digits must be at least 1")
    a = KElem.coerce(a)
    if a.is_zero():
        return "0." + "0" * digits
    with mpmath.workdps(digits + 10):
        return mpmath.nstr(a.to_mpf(), digits, strip_zeros=False,
                           min_fixed=-mpmath.inf, max_fixed=mpmath.inf)


@lru_cache(maxsize=None)
def _cos_pi_tenths(m: int) -> KElem:
    prev, cur = KElem.coerce(2), BETA
    for _ in range(m - 1):
        prev, cur = cur, BETA * cur - prev
    return cur if m >= 1 else prev


def cos_pi_tenths(m: int) -> KElem:
    """2cos(m pi/10) exactly, for any integer m."""
    m = abs(m) % 20
    return _cos_pi_tenths(m)


def alpha(k: int) -> KElem:
    """alpha_k = -2cos(k pi/10)."""
    return -cos_pi_tenths(k)


class ConstName(Enum):
    SQRT5 = "SQRT5"
    SQRT_10P2S5 = "SQRT_10P2S5"
    SQRT_10M2S5 = "SQRT_10M2S5"
    SQRT_50M10S5 = "SQRT_50M10S5"
    GOLDEN_P = "GOLDEN_P"
    GOLDEN_M = "GOLDEN_M"
    BETA = "BETA"
    ALPHA_1 = "ALPHA(1)"
    ALPHA_2 = "ALPHA(2)"
    ALPHA_3 = "ALPHA(3)"
    ALPHA_4 = "ALPHA(4)"
    ALPHA_5 = "ALPHA(5)"
    ALPHA_6 = "ALPHA(6)"
    ALPHA_7 = "ALPHA(7)"
    ALPHA_8 = "ALPHA(8)"
    ALPHA_9 = "ALPHA(9)"

    @classmethod
    def alpha(cls, k: int) -> "ConstName":
        if not 1 <= k <= 9:
            raise PreconditionError(f"ALPHA index must be in 1..9, got {k}")
        return cls(f"ALPHA({k})")


_ALPHA_RE = re.compile(r"^ALPHA\((\d+)\)$")

SQRT5 = KElem(-5, 0, 2, 0)
SQRT_10P2S5 = KElem(0, 2, 0, 0)
SQRT_10M2S5 = KElem(0, -6, 0, 2)
SQRT_50M10S5 = SQRT5 * SQRT_10M2S5
GOLDEN_P = KElem(-2, 0, 1, 0)
GOLDEN_M = KElem(-3, 0, 1, 0)

_NAMED = {
    ConstName.SQRT5: SQRT5,
    ConstName.SQRT_10P2S5: SQRT_10P2S5,
    ConstName.SQRT_10M2S5: SQRT_10M2S5,
    ConstName.SQRT_50M10S5: SQRT_50M10S5,
    ConstName.GOLDEN_P: GOLDEN_P,
    ConstName.GOLDEN_M: GOLDEN_M,
    ConstName.BETA: BETA,
}


def const_lookup(name: Union[ConstName, str]) -> KElem:
    if isinstance(name, str):
        try:
            name = ConstName(name.strip().upper())
        except ValueError:
            raise PreconditionError(f"unknown constant name: {name!r}") from None
    if name in _NAMED:
        return _NAMED[name]
    m = _ALPHA_RE.match(name.value)
    return alpha(int(m.group(1)))
