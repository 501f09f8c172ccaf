"""
Truncated formal series in q with rational exponents.

A QSeries holds coefficients on the lattice e0 + i*step and is exact for every
exponent below its truncation order. Coefficients are int, Fraction or KElem.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, Iterator, List, Optional, Tuple, Union

from src.errors import InsufficientOrderError, PreconditionError
from src.field import KElem, k_embed
from src.utils import ceil_div, fmt_rat, normalize_coeff, parse_rat, rat_gcd

logger = logging.getLogger(__name__)

Coeff = Union[int, Fraction, KElem]


def _div(x: Coeff, d: Coeff) -> Coeff:
    if isinstance(x, KElem) or isinstance(d, KElem):
        return KElem.coerce(x) / d
    return normalize_coeff(Fraction(x) / d)


@dataclass(frozen=True)
class Lattice:
    e0: Fraction
    step: Fraction

    def refine(self, other: "Lattice") -> "Lattice":
        """Coarsest lattice containing both."""
        step = rat_gcd(rat_gcd(self.step, other.step), self.e0 - other.e0)
        return Lattice(min(self.e0, other.e0), step)

    def contains(self, exponent) -> bool:
        return ((Fraction(exponent) - self.e0) / self.step).denominator == 1


@dataclass(frozen=True)
class QSeries:
    """sum_i coeffs[i] q^(e0 + i*step) + O(q^order), kept in canonical form."""

    e0: Fraction
    step: Fraction
    coeffs: Tuple[Coeff, ...]
    order: Fraction

    def __post_init__(self):
        e0, step, order = Fraction(self.e0), Fraction(self.step), Fraction(self.order)
        if step <= 0:
            raise PreconditionError(f"series step must be positive, got {step}")
        coeffs = [normalize_coeff(c) for c in self.coeffs]
        n_max = max(ceil_div(order - e0, step), 0)
        del coeffs[n_max:]
        first = next((i for i, c in enumerate(coeffs) if c), None)
        if first is None:
            coeffs, e0 = [], order
        else:
            last = max(i for i, c in enumerate(coeffs) if c)
            coeffs = coeffs[first:last + 1]
            e0 += first * step
            # coarsen the lattice while the step keeps the form 1/s
            if step.numerator == 1 and len(coeffs) > 1:
                g = step.denominator
                for i, c in enumerate(coeffs):
                    if c and i:
                        g = gcd(g, i)
                        if g == 1:
                            break
                if g > 1:
                    coeffs = coeffs[::g]
                    step *= g
        object.__setattr__(self, "e0", e0)
        object.__setattr__(self, "step", step)
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "order", order)

    @property
    def lattice(self) -> Lattice:
        return Lattice(self.e0, self.step)

    @property
    def valuation(self) -> Fraction:
        """Exponent of the leading term (the order itself for an empty series)."""
        return self.e0

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading_coefficient(self) -> Coeff:
        if not self.coeffs:
            raise PreconditionError("empty series has no leading coefficient")
        return self.coeffs[0]

    def terms(self) -> Iterator[Tuple[Fraction, Coeff]]:
        for i, c in enumerate(self.coeffs):
            if c:
                yield self.e0 + i * self.step, c

    def coefficient(self, exponent) -> Coeff:
        exponent = Fraction(exponent)
        if exponent >= self.order:
            raise InsufficientOrderError(
                f"coefficient of q^{fmt_rat(exponent)} requested from a series known below q^{fmt_rat(self.order)}")
        if not self.coeffs or exponent < self.e0:
            return 0
        idx = (exponent - self.e0) / self.step
        if idx.denominator != 1 or idx.numerator >= len(self.coeffs):
            return 0
        return self.coeffs[idx.numerator]

    def is_rational(self) -> bool:
        return all(not isinstance(c, KElem) or c.is_rational() for c in self.coeffs)

    # operators

    def __add__(self, other):
        return s_add(self, _as_series(other, self.order))

    __radd__ = __add__

    def __neg__(self):
        return s_neg(self)

    def __sub__(self, other):
        return s_add(self, s_neg(_as_series(other, self.order)))

    def __rsub__(self, other):
        return s_add(_as_series(other, self.order), s_neg(self))

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return s_mul(self, other)
        if isinstance(other, (int, Fraction, KElem)):
            return s_scale(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return s_mul(self, s_unit_inv(other))
        if isinstance(other, (int, Fraction, KElem)):
            return s_scale(self, _div(1, other))
        return NotImplemented

    def __rtruediv__(self, other):
        return s_scale(s_unit_inv(self), other)

    def __pow__(self, exponent):
        return s_pow(self, exponent)

    def __str__(self):
        return render_series(self)


@dataclass(frozen=True)
class EqualityResult:
    equal: bool
    exponent: Optional[Fraction] = None
    delta: Optional[KElem] = None

    def __bool__(self):
        return self.equal


def _as_series(value, order) -> QSeries:
    if isinstance(value, QSeries):
        return value
    if isinstance(value, (int, Fraction, KElem)):
        return constant(value, order)
    raise TypeError(f"cannot combine QSeries with {type(value).__name__}")


# constructors

def zero(order) -> QSeries:
    return QSeries(Fraction(order), Fraction(1), (), Fraction(order))


def monomial(exponent, coeff: Coeff = 1, order=None) -> QSeries:
    """coeff * q^exponent; order defaults to exponent + 1."""
    exponent = parse_rat(exponent)
    order = exponent + 1 if order is None else parse_rat(order)
    return QSeries(exponent, Fraction(1), (coeff,), order)


def constant(c: Coeff, order) -> QSeries:
    return monomial(0, c, order)


def polynomial(terms: Dict, order) -> QSeries:
    """Finite sum of coeff * q^exp given as {exp: coeff}, truncated at order."""
    order = parse_rat(order)
    items = {parse_rat(e): c for e, c in terms.items() if c}
    if not items:
        return zero(order)
    exps = sorted(items)
    step = Fraction(1)
    for e in exps[1:]:
        step = rat_gcd(step, e - exps[0])
    coeffs = [0] * (int((exps[-1] - exps[0]) / step) + 1)
    for e, c in items.items():
        coeffs[int((e - exps[0]) / step)] += c
    return QSeries(exps[0], step, tuple(coeffs), order)


# ring operations

def s_add(f: QSeries, g: QSeries) -> QSeries:
    order = min(f.order, g.order)
    if g.is_zero():
        return s_truncate(f, order)
    if f.is_zero():
        return s_truncate(g, order)
    lat = f.lattice.refine(g.lattice)
    n = max(ceil_div(order - lat.e0, lat.step), 0)
    acc: List[Coeff] = [0] * n
    for s in (f, g):
        base = int((s.e0 - lat.e0) / lat.step)
        ratio = int(s.step / lat.step)
        for i, c in enumerate(s.coeffs):
            k = base + i * ratio
            if k >= n:
                break
            if c:
                acc[k] = acc[k] + c
    return QSeries(lat.e0, lat.step, tuple(acc), order)


def s_neg(f: QSeries) -> QSeries:
    return QSeries(f.e0, f.step, tuple(-c for c in f.coeffs), f.order)


def s_sub(f: QSeries, g: QSeries) -> QSeries:
    return s_add(f, s_neg(g))


def s_scale(f: QSeries, c: Coeff) -> QSeries:
    if not c:
        return zero(f.order)
    return QSeries(f.e0, f.step, tuple(x * c for x in f.coeffs), f.order)


def s_shift(f: QSeries, exponent) -> QSeries:
    """Exact multiplication by q^exponent."""
    exponent = parse_rat(exponent)
    return QSeries(f.e0 + exponent, f.step, f.coeffs, f.order + exponent)


def s_truncate(f: QSeries, order) -> QSeries:
    """Lower the truncation order; raising it is an error."""
    order = Fraction(order)
    if order > f.order:
        raise InsufficientOrderError(
            f"cannot extend a series known below q^{fmt_rat(f.order)} to q^{fmt_rat(order)}")
    if order == f.order:
        return f
    return QSeries(f.e0, f.step, f.coeffs, order)


def s_mul(f: QSeries, g: QSeries) -> QSeries:
    """Cauchy product with sharp truncation order min(f.order + v(g), g.order + v(f))."""
    order = min(f.order + g.valuation, g.order + f.valuation)
    if f.is_zero() or g.is_zero():
        return zero(order)
    step = rat_gcd(f.step, g.step)
    e0 = f.e0 + g.e0
    n = max(ceil_div(order - e0, step), 0)
    rf, rg = int(f.step / step), int(g.step / step)
    fs = [(i * rf, c) for i, c in enumerate(f.coeffs) if c]
    gs = [(j * rg, c) for j, c in enumerate(g.coeffs) if c]
    acc: List[Coeff] = [0] * n
    for i, a in fs:
        if i >= n:
            break
        for j, b in gs:
            k = i + j
            if k >= n:
                break
            acc[k] = acc[k] + a * b
    return QSeries(e0, step, tuple(acc), order)


def _unit_power(f: QSeries, alpha: Fraction, lead) -> List[Coeff]:
    """Coefficients of (f/q^e0)^alpha on f's lattice, leading coefficient `lead`."""
    n = ceil_div(f.order - f.e0, f.step)
    u = f.coeffs
    u0 = u[0]
    nz = [(j, c) for j, c in enumerate(u) if c and j]
    out: List[Coeff] = [lead] + [0] * (n - 1)
    for k in range(1, n):
        acc: Coeff = 0
        for j, c in nz:
            if j > k:
                break
            gk = out[k - j]
            if gk:
                acc = acc + (alpha * j - (k - j)) * c * gk
        if acc:
            out[k] = _div(acc, k * u0)
    return out


def s_unit_inv(f: QSeries) -> QSeries:
    """Reciprocal of a series with nonzero leading coefficient."""
    if f.is_zero():
        raise PreconditionError("cannot invert an empty series")
    n = ceil_div(f.order - f.e0, f.step)
    u = f.coeffs
    inv0 = _div(1, u[0])
    nz = [(j, c) for j, c in enumerate(u) if c and j]
    out: List[Coeff] = [inv0] + [0] * (n - 1)
    for k in range(1, n):
        acc: Coeff = 0
        for j, c in nz:
            if j > k:
                break
            gk = out[k - j]
            if gk:
                acc = acc + c * gk
        if acc:
            out[k] = -acc * inv0
    return QSeries(-f.e0, f.step, tuple(out), f.order - 2 * f.e0)


def s_pow(f: QSeries, exponent) -> QSeries:
    """
    Rational power of a series.

    Integer powers accept any nonzero leading coefficient; fractional powers
    need the leading coefficient to be 1. The result is exact below
    e0*exponent + (order - e0).
    """
    alpha = parse_rat(exponent)
    if f.is_zero():
        if alpha > 0:
            return zero(f.order * alpha)
        raise PreconditionError("nonpositive power of an empty series")
    if alpha == 0:
        return constant(1, f.order - f.e0)
    u0 = f.coeffs[0]
    if alpha.denominator == 1:
        lead = KElem.coerce(u0) ** alpha.numerator if isinstance(u0, KElem) else normalize_coeff(Fraction(u0) ** alpha.numerator)
    elif u0 == 1:
        lead = 1
    else:
        raise PreconditionError(
            f"fractional power {fmt_rat(alpha)} needs leading coefficient 1, got {u0}")
    coeffs = _unit_power(f, alpha, lead)
    return QSeries(f.e0 * alpha, f.step, tuple(coeffs), f.e0 * alpha + (f.order - f.e0))


def s_nth_root(f: QSeries, n: int) -> QSeries:
    if n < 1:
        raise PreconditionError(f"root index must be positive, got {n}")
    return s_pow(f, Fraction(1, n))


def s_substitute(f: QSeries, m) -> QSeries:
    """q -> q^m."""
    m = parse_rat(m)
    if m <= 0:
        raise PreconditionError(f"substitution exponent must be positive, got {m}")
    return QSeries(f.e0 * m, f.step * m, f.coeffs, f.order * m)


def s_equal_to_order(f: QSeries, g: QSeries, E) -> EqualityResult:
    """Compare every coefficient below q^E; report the first mismatch."""
    E = Fraction(E)
    if E > f.order or E > g.order:
        raise InsufficientOrderError(
            f"comparison below q^{fmt_rat(E)} but series are known below "
            f"q^{fmt_rat(f.order)} and q^{fmt_rat(g.order)}")
    diff = s_sub(s_truncate(f, E), s_truncate(g, E))
    for exponent, c in diff.terms():
        return EqualityResult(False, exponent, KElem.coerce(c))
    return EqualityResult(True)


def render_coeff(c: Coeff, digits: int = 6) -> str:
    if isinstance(c, KElem):
        if c.is_rational():
            return fmt_rat(c.rational())
        return f"{c}~{k_embed(c, digits)}"
    return fmt_rat(c)


def render_series(f: QSeries, digits: int = 6) -> str:
    """Terms 'c * q^(a/b)' in increasing exponent, then the O-term."""
    parts = [f"{render_coeff(c, digits)} * q^({fmt_rat(e)})" for e, c in f.terms()]
    parts.append(f"O(q^({fmt_rat(f.order)}))")
    return " + ".join(parts)
