"""
The continued fractions R, S1, S2, T1, T2: exact series through their theta
quotients and numeric evaluation of the displayed fractions.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Tuple, Union

import mpmath

from src.errors import PreconditionError
from src.field import KElem
from src.qfunctions import theta_f
from src.series import QSeries, s_mul, s_nth_root, s_shift, s_substitute, s_unit_inv, zero
from src.utils import fmt_rat, parse_rat

logger = logging.getLogger(__name__)

DEFAULT_DIGITS = 40


class CFName(Enum):
    R = "R"
    S1 = "S1"
    S2 = "S2"
    T1 = "T1"
    T2 = "T2"

    @classmethod
    def parse(cls, value: Union[str, "CFName"]) -> "CFName":
        if isinstance(value, CFName):
            return value
        try:
            return cls(str(value).strip().upper())
        except ValueError:
            raise PreconditionError(f"unknown continued fraction {value!r} (expected R, S1, S2, T1 or T2)") from None


# offset, numerator f(-q^a, -q^b), denominator f(-q^c, -q^d)
THETA_FORMS = {
    CFName.R: (Fraction(1, 5), (1, 4), (2, 3)),
    CFName.S1: (Fraction(3, 4), (1, 9), (4, 6)),
    CFName.S2: (Fraction(1, 4), (2, 8), (3, 7)),
    CFName.T1: (Fraction(1), (3, 17), (7, 13)),
    CFName.T2: (Fraction(2), (1, 19), (9, 11)),
}


def cf_offset(name) -> Fraction:
    return THETA_FORMS[CFName.parse(name)][0]


def cf_series(name, scale, order) -> QSeries:
    """CF(q^scale) as an exact series known below q^order."""
    name = CFName.parse(name)
    scale, order = parse_rat(scale), parse_rat(order)
    if scale <= 0:
        raise PreconditionError(f"scale must be positive, got {fmt_rat(scale)}")
    offset, (a, b), (c, d) = THETA_FORMS[name]
    rel = order / scale - offset
    if rel <= 0:
        return zero(order)
    num = theta_f((-1, a), (-1, b), rel)
    den = theta_f((-1, c), (-1, d), rel)
    unit = s_mul(num, s_unit_inv(den))
    logger.debug("cf_series %s scale %s order %s", name.value, fmt_rat(scale), fmt_rat(order))
    return s_substitute(s_shift(unit, offset), scale)


def cf_root(name, n: int, scale, order) -> QSeries:
    """n-th root of CF(q^scale), exact below q^order."""
    name = CFName.parse(name)
    if n < 1:
        raise PreconditionError(f"root index must be positive, got {n}")
    scale, order = parse_rat(scale), parse_rat(order)
    e0 = cf_offset(name) * scale
    inner = order - e0 / n + e0
    return s_nth_root(cf_series(name, scale, inner), n)


@dataclass(frozen=True)
class CFDisplay:
    """
    Partial quotients of a displayed fraction:
    leading / (D_0 + N_1/(D_1 + N_2/(D_2 + ...))).
    """

    name: CFName
    leading: Callable
    denominator: Callable
    numerator: Callable


def _one(k, q):
    return mpmath.mpf(1)


def _r_numerator(k, q):
    return q ** k


def _s_denominator(k, q):
    h = q ** mpmath.mpf(2.5)
    return 1 - h if k == 0 else (1 - h) * (1 + q ** (5 * k))


def _s_numerator(lo, hi):
    def num(k, q):
        return q ** mpmath.mpf(2.5) * (1 - q ** (5 * k - lo)) * (1 - q ** (5 * k - hi))
    return num


def _t_denominator(k, q):
    return 1 - q ** 5 if k == 0 else (1 - q ** 5) * (1 + q ** (10 * k))


def _t_numerator(lo, hi):
    def num(k, q):
        return q ** 5 * (1 - q ** (10 * k - lo)) * (1 - q ** (10 * k - hi))
    return num


DISPLAYS = {
    CFName.R: CFDisplay(CFName.R, lambda q: q ** (mpmath.mpf(1) / 5), _one, _r_numerator),
    CFName.S1: CFDisplay(CFName.S1, lambda q: q ** (mpmath.mpf(3) / 4) * (1 - q), _s_denominator,
                         _s_numerator(mpmath.mpf(7) / 2, mpmath.mpf(3) / 2)),
    CFName.S2: CFDisplay(CFName.S2, lambda q: q ** (mpmath.mpf(1) / 4) * (1 - q ** 2), _s_denominator,
                         _s_numerator(mpmath.mpf(9) / 2, mpmath.mpf(1) / 2)),
    CFName.T1: CFDisplay(CFName.T1, lambda q: q * (1 - q ** 3), _t_denominator, _t_numerator(8, 2)),
    CFName.T2: CFDisplay(CFName.T2, lambda q: q ** 2 * (1 - q), _t_denominator, _t_numerator(6, 4)),
}


def cf_numeric(name, q, depth: int, digits: int = DEFAULT_DIGITS):
    """Backward evaluation of the displayed fraction cut after `depth` levels."""
    name = CFName.parse(name)
    if depth < 1:
        raise PreconditionError(f"depth must be at least 1, got {depth}")
    display = DISPLAYS[name]
    with mpmath.workdps(digits):
        q = mpmath.mpf(q)
        if not 0 < q < 1:
            raise PreconditionError(f"q must lie in (0, 1), got {q}")
        tail = display.denominator(depth, q)
        for k in range(depth - 1, -1, -1):
            if tail == 0:
                raise ZeroDivisionError(f"{name.value} tail vanishes at depth {k + 1}; retry at depth {depth + 1}")
            tail = display.denominator(k, q) + display.numerator(k + 1, q) / tail
        if tail == 0:
            raise ZeroDivisionError(f"{name.value} denominator vanishes; retry at depth {depth + 1}")
        return +(display.leading(q) / tail)


def cf_numeric_converged(name, q, tol=1e-30, start_depth: int = 8, max_depth: int = 4096,
                         digits: int = DEFAULT_DIGITS) -> Tuple[object, int]:
    """Double the depth until two successive evaluations agree within tol."""
    depth = start_depth
    prev = cf_numeric(name, q, depth, digits)
    while depth < max_depth:
        depth *= 2
        cur = cf_numeric(name, q, depth, digits)
        with mpmath.workdps(digits):
            if abs(cur - prev) <= tol:
                return cur, depth
        prev = cur
    logger.warning("%s at q=%s did not settle within depth %d", CFName.parse(name).value, q, max_depth)
    return prev, depth


def coeff_mpf(c):
    if isinstance(c, KElem):
        return c.to_mpf()
    c = Fraction(c)
    return mpmath.mpf(c.numerator) / c.denominator


def series_numeric(f: QSeries, q, digits: int = DEFAULT_DIGITS, with_bound: bool = False):
    """
    Evaluate a truncated series at a real q in (0, 1).

    With with_bound=True, also return |q|^order/(1-|q|) times the largest
    coefficient magnitude as a tail estimate.
    """
    with mpmath.workdps(digits + 5):
        q = mpmath.mpf(q)
        if not 0 < q < 1:
            raise PreconditionError(f"q must lie in (0, 1), got {q}")
        total = mpmath.mpf(0)
        biggest = mpmath.mpf(0)
        for exponent, c in f.terms():
            value = coeff_mpf(c)
            total += value * mpmath.power(q, coeff_mpf(exponent))
            biggest = max(biggest, abs(value))
        if not with_bound:
            return +total
        bound = mpmath.power(q, coeff_mpf(f.order)) / (1 - q) * max(biggest, 1)
        return +total, +bound
