import re
import time
from contextlib import contextmanager
from fractions import Fraction
from math import gcd
from typing import Union

from src.errors import PreconditionError

RatLike = Union[int, Fraction, str]

_RAT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rat(text: RatLike) -> Fraction:
    """Parse '3', '-7/40' or an int/Fraction into a Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    m = _RAT_RE.match(str(text))
    if not m:
        raise PreconditionError(f"not a rational number: {text!r}")
    num, den = int(m.group(1)), int(m.group(2) or 1)
    if den == 0:
        raise PreconditionError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def fmt_rat(x) -> str:
    """Render a rational as 'p/q' (or 'p' for integers)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def rat_gcd(x: Fraction, y: Fraction) -> Fraction:
    """Largest positive rational g with x/g and y/g both integers."""
    x, y = Fraction(x), Fraction(y)
    if x == 0:
        return abs(y)
    if y == 0:
        return abs(x)
    num = gcd(x.numerator * y.denominator, y.numerator * x.denominator)
    return Fraction(num, x.denominator * y.denominator)


def ceil_div(a: Fraction, b: Fraction) -> int:
    """ceil(a / b) for rationals, b > 0."""
    q = Fraction(a) / Fraction(b)
    return -((-q.numerator) // q.denominator)


def normalize_coeff(c):
    """Collapse integral Fractions to int so the inner loops stay on ints."""
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _fmt_ms(seconds: float) -> int:
    return int(round(seconds * 1000))


@contextmanager
def stopwatch():
    """Yield a dict whose 'ms' key is filled when the block exits."""
    box = {"ms": 0}
    start = time.perf_counter()
    try:
        yield box
    finally:
        box["ms"] = _fmt_ms(time.perf_counter() - start)


def fmt_duration(seconds: float) -> str:
    if seconds < 60:
        return f"{seconds:.1f}s"
    m, s = divmod(int(seconds), 60)
    return f"{m:d}m{s:02d}s"
