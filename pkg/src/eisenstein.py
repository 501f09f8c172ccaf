"""Lambert-series builders and the monomial 1psi1 specialisations."""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Sequence, Tuple

from src.errors import PreconditionError
from src.qfunctions import pochhammer_product
from src.series import QSeries, polynomial, s_mul, s_unit_inv, zero
from src.utils import parse_rat

logger = logging.getLogger(__name__)


class Weight(Enum):
    NONE = "none"
    N = "n"
    LEGENDRE3 = "legendre3"


class Parity(Enum):
    ALL = "all"
    ODD = "odd"


def legendre3(n: int) -> int:
    """Legendre symbol (n/3)."""
    if n < 1:
        raise PreconditionError(f"legendre3 expects a positive integer, got {n}")
    return (0, 1, -1)[n % 3]


@dataclass(frozen=True)
class LambertSpec:
    """sum_n weight(n) sum_terms sign q^{a n}/(1 - q^{b n}) over n of the given parity."""

    modulus: int
    terms: Tuple[Tuple[int, int], ...]
    weight: Weight = Weight.NONE
    parity: Parity = Parity.ALL

    def __post_init__(self):
        if self.modulus <= 0:
            raise PreconditionError(f"Lambert modulus must be positive, got {self.modulus}")
        terms = tuple((int(s), int(a)) for s, a in self.terms)
        if not terms:
            raise PreconditionError("Lambert series needs at least one term")
        for s, a in terms:
            if s not in (1, -1) or a <= 0:
                raise PreconditionError(f"bad Lambert term ({s}, {a})")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "weight", Weight(self.weight))
        object.__setattr__(self, "parity", Parity(self.parity))

    def weight_of(self, n: int) -> int:
        if self.weight is Weight.N:
            return n
        if self.weight is Weight.LEGENDRE3:
            return legendre3(n)
        return 1


def lambert_series(spec: LambertSpec, order) -> QSeries:
    order = parse_rat(order)
    coeffs: Dict[int, int] = {}
    a_min = min(a for _, a in spec.terms)
    n = 1
    step = 2 if spec.parity is Parity.ODD else 1
    while a_min * n < order:
        w = spec.weight_of(n)
        if w:
            for sign, a in spec.terms:
                e = a * n
                while e < order:
                    coeffs[e] = coeffs.get(e, 0) + w * sign
                    e += spec.modulus * n
        n += step
    return polynomial(coeffs, order)


def _check_onepsione(a_exp: int, z_exp: int, base: int):
    if base <= 0:
        raise PreconditionError(f"1psi1 base must be positive, got {base}")
    if not (0 < a_exp < base and 0 < z_exp < base):
        raise PreconditionError(f"1psi1 needs 0 < a_exp, z_exp < base; got a={a_exp}, z={z_exp}, base={base}")
    if a_exp + z_exp >= base:
        raise PreconditionError(f"1psi1 needs a_exp + z_exp < base so q/(az) has a positive exponent; "
                                f"got {a_exp} + {z_exp} >= {base}")


def onepsione_sum(a_exp: int, z_exp: int, base: int, order) -> QSeries:
    """sum_{n in Z} z^n/(1 - a q^n) at a = q^a_exp, z = q^z_exp, q -> q^base."""
    _check_onepsione(a_exp, z_exp, base)
    order = parse_rat(order)
    logger.debug("1psi1 sum a=%d z=%d base=%d order %s", a_exp, z_exp, base, order)
    coeffs: Dict[Fraction, int] = {}
    # n >= 0: q^{z n} sum_j q^{j(a + base n)}
    n = 0
    while z_exp * n < order:
        e = z_exp * n
        while e < order:
            coeffs[e] = coeffs.get(e, 0) + 1
            e += a_exp + base * n
        n += 1
    # n = -m: -sum_{j>=1} q^{-z m + j(base m - a)}
    m = 1
    while (base - z_exp) * m - a_exp < order:
        d = base * m - a_exp
        e = -z_exp * m + d
        while e < order:
            coeffs[e] = coeffs.get(e, 0) - 1
            e += d
        m += 1
    return polynomial(coeffs, order) if coeffs else zero(order)


def onepsione_product(a_exp: int, z_exp: int, base: int, order) -> QSeries:
    """(az, q/az, q, q; q)_inf / (a, q/a, z, q/z; q)_inf with the same specialisation."""
    _check_onepsione(a_exp, z_exp, base)
    order = parse_rat(order)
    az = a_exp + z_exp
    num = pochhammer_product([(-1, az), (-1, base - az), (-1, base), (-1, base)], base, order)
    den = pochhammer_product([(-1, a_exp), (-1, base - a_exp), (-1, z_exp), (-1, base - z_exp)], base, order)
    return s_mul(num, s_unit_inv(den))


def onepsione_pair(a_exp: int, z_exp: int, base: int, order) -> Tuple[QSeries, QSeries]:
    """(bilateral sum, product) of the 1psi1 summation, both known below q^order."""
    return onepsione_sum(a_exp, z_exp, base, order), onepsione_product(a_exp, z_exp, base, order)


def lambert(modulus: int, terms: Sequence[Tuple[int, int]], weight="none", parity="all") -> LambertSpec:
    return LambertSpec(modulus, tuple(terms), Weight(weight), Parity(parity))
