"""
Builders for q-Pochhammer products, Ramanujan's theta function, eta quotients
and the Omega_k products as truncated QSeries.

Convention: pochhammer(a, m) is prod_{k>=0} (1 + a q^{mk}) for a signed monomial
a, so pochhammer(-q, 1) is (q;q)_inf and pochhammer(+q^2, 2) is (-q^2;q^2)_inf.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

from src.errors import PreconditionError
from src.field import KElem, alpha, cos_pi_tenths
from src.series import (Coeff, QSeries, constant, polynomial, s_mul, s_pow, s_scale,
                        s_shift, s_truncate, s_unit_inv, zero)
from src.utils import ceil_div, fmt_rat, parse_rat, rat_gcd

logger = logging.getLogger(__name__)

TRIPLE_PRODUCT = "triple_product"
BILATERAL_SUM = "bilateral_sum"
THETA_METHODS = (TRIPLE_PRODUCT, BILATERAL_SUM)


@dataclass(frozen=True)
class MonomialArg:
    """The signed monomial sign * q^exp."""

    sign: int
    exp: Fraction

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise PreconditionError(f"monomial sign must be +1 or -1, got {self.sign}")
        object.__setattr__(self, "exp", parse_rat(self.exp))

    @classmethod
    def of(cls, value) -> "MonomialArg":
        """Accept a MonomialArg, a (sign, exp) pair or a signed rational (-3 means -q^3)."""
        if isinstance(value, MonomialArg):
            return value
        if isinstance(value, tuple):
            return cls(*value)
        r = parse_rat(value)
        if r == 0:
            raise PreconditionError("signed exponent 0 is ambiguous; pass (sign, 0)")
        return cls(1 if r > 0 else -1, abs(r))

    def __mul__(self, other: "MonomialArg") -> "MonomialArg":
        return MonomialArg(self.sign * other.sign, self.exp + other.exp)

    def __pow__(self, n: int) -> "MonomialArg":
        return MonomialArg(self.sign ** n, self.exp * n)

    def __truediv__(self, other: "MonomialArg") -> "MonomialArg":
        return MonomialArg(self.sign * other.sign, self.exp - other.exp)

    def __str__(self):
        return f"{'-' if self.sign < 0 else ''}q^{fmt_rat(self.exp)}"


@dataclass(frozen=True)
class EtaSpec:
    """prod_j eta(t_j tau)^{e_j}."""

    factors: Tuple[Tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        factors = tuple((parse_rat(t), parse_rat(e)) for t, e in self.factors)
        if not factors:
            raise PreconditionError("eta quotient needs at least one factor")
        if any(t <= 0 for t, _ in factors):
            raise PreconditionError("eta multipliers must be positive")
        object.__setattr__(self, "factors", factors)

    @property
    def offset(self) -> Fraction:
        return sum((t * e for t, e in self.factors), Fraction(0)) / 24


def product_of_polys(factors: Iterable[Dict[Fraction, Coeff]], order) -> QSeries:
    """
    prod (1 + sum_t c_t q^{d_t}) over factors with positive exponents,
    truncated at order. Factors whose smallest exponent reaches order drop out.
    """
    order = Fraction(order)
    factors = [{Fraction(d): c for d, c in f.items() if c} for f in factors]
    factors = [f for f in factors if f and min(f) < order]
    if order <= 0:
        return zero(order)
    step = Fraction(1)
    for f in factors:
        for d in f:
            if d <= 0:
                raise PreconditionError(f"factor exponent must be positive, got {fmt_rat(d)}")
            step = rat_gcd(step, d)
    n = ceil_div(order, step)
    acc: List[Coeff] = [1] + [0] * (n - 1)
    for f in factors:
        terms = sorted((int(d / step), c) for d, c in f.items())
        terms = [(d, c) for d, c in terms if d < n]
        dmin = terms[0][0]
        for i in range(n - 1, dmin - 1, -1):
            s = acc[i]
            for d, c in terms:
                if d > i:
                    break
                prev = acc[i - d]
                if prev:
                    s = s + c * prev
            acc[i] = s
    return QSeries(Fraction(0), step, tuple(acc), order)


def pochhammer(a, m, order) -> QSeries:
    """prod_{k>=0} (1 + a q^{mk}) for the signed monomial a with a.exp > 0."""
    a = MonomialArg.of(a)
    m = parse_rat(m)
    order = parse_rat(order)
    if a.exp <= 0:
        raise PreconditionError(f"pochhammer needs a positive exponent, got {fmt_rat(a.exp)}")
    if m <= 0:
        raise PreconditionError(f"pochhammer base exponent must be positive, got {fmt_rat(m)}")
    factors = []
    e = a.exp
    while e < order:
        factors.append({e: a.sign})
        e += m
    return product_of_polys(factors, order)


def pochhammer_product(args: Sequence, m, order) -> QSeries:
    """Product of several pochhammer symbols with the same base, e.g. (q^8,q^12;q^20)."""
    m = parse_rat(m)
    order = parse_rat(order)
    factors = []
    for a in map(MonomialArg.of, args):
        if a.exp <= 0:
            raise PreconditionError(f"pochhammer needs a positive exponent, got {fmt_rat(a.exp)}")
        e = a.exp
        while e < order:
            factors.append({e: a.sign})
            e += m
    return product_of_polys(factors, order)


def _theta_bilateral(a: MonomialArg, b: MonomialArg, order: Fraction) -> QSeries:
    A, B = a.exp, b.exp
    S = A + B

    def exponent(n):
        return (S * n * n + (A - B) * n) / 2

    def sign(n):
        s = 1
        if a.sign < 0 and (n * (n + 1) // 2) % 2:
            s = -s
        if b.sign < 0 and (n * (n - 1) // 2) % 2:
            s = -s
        return s

    # exponent(n) is convex in n; walk outward from the vertex
    start = math.ceil(-(A - B) / (2 * S))
    terms: Dict[Fraction, int] = {}
    for n_range in (itertools.count(start), itertools.count(start - 1, -1)):
        for n in n_range:
            e = exponent(n)
            if e >= order:
                break
            terms[e] = terms.get(e, 0) + sign(n)
    return polynomial(terms, order)


def _theta_triple(a: MonomialArg, b: MonomialArg, order: Fraction) -> QSeries:
    """(-a;ab)(-b;ab)(ab;ab), factors with nonpositive exponent peeled off exactly."""
    ab = a * b
    c = ab.exp
    shift = _peeled_shift(a, b)
    limit = order + shift
    factors: List[Tuple[Fraction, int]] = []
    k = 0
    while min(a.exp, b.exp) + c * k < limit or c * (k + 1) < limit:
        s_ab = ab.sign ** k
        factors += [(a.exp + c * k, a.sign * s_ab), (b.exp + c * k, b.sign * s_ab),
                    (c * (k + 1), -s_ab * ab.sign)]
        k += 1
    exact_order = order + 2 * shift + 1
    peeled = constant(1, exact_order)
    for e, s in factors:
        if e > 0:
            continue
        if e == 0:
            if s == -1:
                return zero(order)
            peeled = s_scale(peeled, 2)
        else:
            peeled = s_mul(peeled, polynomial({0: 1, e: s}, exact_order))
    regular = [{e: s} for e, s in factors if 0 < e < limit]
    return s_truncate(s_mul(peeled, product_of_polys(regular, limit)), order)


def _peeled_shift(a: MonomialArg, b: MonomialArg) -> Fraction:
    """Minus the total negative exponent of the peeled factors."""
    c = a.exp + b.exp
    total = Fraction(0)
    for e in (a.exp, b.exp):
        while e <= 0:
            total -= e
            e += c
    return total


def theta_f(a, b, order, method: str = TRIPLE_PRODUCT) -> QSeries:
    """
    Ramanujan's f(a, b) = sum_n a^{n(n+1)/2} b^{n(n-1)/2} at signed monomials.

    Args:
        a, b: signed monomials with a.exp + b.exp > 0
        order: truncation order
        method: "triple_product" or "bilateral_sum"; both must agree
    """
    a, b = MonomialArg.of(a), MonomialArg.of(b)
    order = parse_rat(order)
    if a.exp + b.exp <= 0:
        raise PreconditionError(
            f"f({a}, {b}) needs a.exp + b.exp > 0, got {fmt_rat(a.exp + b.exp)}")
    if method == TRIPLE_PRODUCT:
        return _theta_triple(a, b, order)
    if method == BILATERAL_SUM:
        return _theta_bilateral(a, b, order)
    raise PreconditionError(f"unknown theta method {method!r} (expected one of {THETA_METHODS})")


def f_minus(exp, order) -> QSeries:
    """f(-q^exp) = f(-q^exp, -q^{2 exp}) = (q^exp; q^exp)_inf."""
    exp = parse_rat(exp)
    return pochhammer((-1, exp), exp, order)


def psi(a, order) -> QSeries:
    """psi(a) = f(a, a^3)."""
    a = MonomialArg.of(a)
    return theta_f(a, a ** 3, order)


def eta_quotient(spec, order) -> QSeries:
    """q^{sum t e/24} prod (q^t;q^t)_inf^e, fractional powers through s_pow."""
    if not isinstance(spec, EtaSpec):
        spec = EtaSpec(tuple(spec))
    order = parse_rat(order)
    offset = spec.offset
    rel = order - offset
    if rel <= 0:
        return zero(order)
    combined: Dict[Fraction, Fraction] = {}
    for t, e in spec.factors:
        combined[t] = combined.get(t, Fraction(0)) + e
    unit = constant(1, rel)
    for t, e in sorted(combined.items()):
        if e == 0 or t >= rel:
            continue
        base = f_minus(t, rel)
        unit = s_mul(unit, s_pow(base, e))
    logger.debug("eta quotient %s built to order %s", spec.factors, fmt_rat(order))
    return s_shift(unit, offset)


def omega(k: int, scale, order) -> QSeries:
    """Omega_k(q^scale) = prod_{n>=1} (1 + alpha_k q^{scale n} + q^{2 scale n})."""
    if not 1 <= k <= 9:
        raise PreconditionError(f"omega index must be in 1..9, got {k}")
    scale = parse_rat(scale)
    order = parse_rat(order)
    if scale <= 0:
        raise PreconditionError(f"omega scale must be positive, got {fmt_rat(scale)}")
    a = alpha(k)
    factors = []
    e = scale
    while e < order:
        factors.append({e: a, 2 * e: 1})
        e += scale
    return product_of_polys(factors, order)


def x20_factorization() -> Tuple[QSeries, QSeries]:
    """(1-x)(1+x) prod_{k=1}^{9} (1 + alpha_k x + x^2) and 1 - x^20, as exact polynomials."""
    order = 21
    lhs = polynomial({0: 1, 2: -1}, order)
    for k in range(1, 10):
        lhs = s_mul(lhs, polynomial({0: 1, 1: alpha(k), 2: 1}, order))
    return lhs, polynomial({0: 1, 20: -1}, order)


def dirichlet_ratio(n: int, k: int) -> KElem:
    """sin((2n+1) k pi/20) / sin(k pi/20) = 1 + sum_{j=1}^{n} 2cos(jk pi/10)."""
    if k % 20 == 0:
        raise PreconditionError("dirichlet ratio undefined for k divisible by 20")
    total = KElem.coerce(1)
    for j in range(1, n + 1):
        total = total + cos_pi_tenths(j * k)
    return total


def omega_theta_series(coeffs: Dict[int, Coeff], order) -> QSeries:
    """
    Theta-side form of sum_k c_k Omega_k(q):
    (1/(q;q)_inf) sum_{n>=0} (-1)^n (sum_k c_k D_n(k)) q^{n(n+1)/2}.
    """
    order = parse_rat(order)
    terms: Dict[int, Coeff] = {}
    n = 0
    while n * (n + 1) // 2 < order:
        c = sum((ck * dirichlet_ratio(n, k) for k, ck in coeffs.items()), KElem.coerce(0))
        terms[n * (n + 1) // 2] = c if n % 2 == 0 else -c
        n += 1
    numerator = polynomial(terms, order)
    return s_mul(numerator, s_unit_inv(f_minus(1, order)))
