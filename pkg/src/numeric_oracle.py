"""
High-precision numeric checks (mpmath) for everything that lives outside the
exact coefficient field: theta1 at generic arguments, the A-tables, the sine
products and the two-variable Lambert/theta1 lemma.

Conventions: q = exp(2 pi i tau), so pi*tau = -i ln(q)/2; theta1(x | m tau) uses
the nome q^m.
"""

import logging
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import mpmath

from src.cfractions import CFName, cf_numeric, cf_series, series_numeric
from src.errors import PreconditionError, SampleRejectedError
from src.field import SQRT5, SQRT_10M2S5, SQRT_10P2S5, SQRT_50M10S5, KElem
from src.qfunctions import omega

logger = logging.getLogger(__name__)

DEFAULT_DIGITS = 40
NEAR_ZERO = mpmath.mpf("1e-10")


@dataclass(frozen=True)
class Sample:
    q: float
    z: float = 0.0
    precision_digits: int = DEFAULT_DIGITS

    def __post_init__(self):
        if not 0 < self.q <= 0.5:
            raise PreconditionError(f"sample q must lie in (0, 0.5], got {self.q}")
        if self.precision_digits < 30:
            raise PreconditionError(f"precision must be at least 30 digits, got {self.precision_digits}")


@dataclass
class NumericResult:
    """Outcome of one numeric check: largest observed error against a tolerance."""

    check: str
    passed: bool
    max_error: str
    tolerance: str
    samples: List[str] = field(default_factory=list)
    details: List[str] = field(default_factory=list)


def _result(check: str, errors: Sequence, tol, samples: Sequence[str], details=None) -> NumericResult:
    worst = max(errors) if errors else mpmath.mpf(0)
    passed = bool(errors) and all(e <= tol for e in errors)
    if not passed:
        logger.warning("%s: max error %s exceeds %s", check, mpmath.nstr(worst, 5), mpmath.nstr(tol, 3))
    return NumericResult(check, passed, mpmath.nstr(worst, 5), mpmath.nstr(tol, 3),
                         list(samples), list(details or []))


def euler(q):
    """(q;q)_inf."""
    return mpmath.qp(q, q)


def eta(q, m=1):
    """eta(m tau) = q^{m/24} (q^m; q^m)_inf."""
    qm = mpmath.power(q, m)
    return mpmath.power(q, mpmath.mpf(m) / 24) * euler(qm)


def tau_shift(z, c, q):
    """z + c*pi*tau."""
    return z - 1j * c * mpmath.log(q) / 2


def theta1_numeric(z, q, terms: Optional[int] = None, with_bound: bool = False):
    """
    theta1(z|tau) = 2 sum_{n>=0} (-1)^n q^{(2n+1)^2/8} sin((2n+1) z).

    z may be complex. Without `terms` the sum runs until the next term drops
    below the working precision; `with_bound` also returns that next term.
    """
    q = mpmath.mpf(q)
    if not 0 < q < 1:
        raise PreconditionError(f"q must lie in (0, 1), got {q}")
    z = mpmath.mpmathify(z)
    eps = mpmath.eps * mpmath.mpf(10) ** -5
    total = 0
    n = 0
    while True:
        k = 2 * n + 1
        term = mpmath.power(q, mpmath.mpf(k * k) / 8) * mpmath.sin(k * z)
        if terms is None:
            if n > 2 and abs(term) < eps * max(abs(total), 1):
                break
        elif n >= terms:
            break
        total += term if n % 2 == 0 else -term
        n += 1
    if with_bound:
        return 2 * total, 2 * abs(term)
    return 2 * total


def theta1_product(z, q, terms: Optional[int] = None):
    """2 q^{1/8} sin z prod_{n>=1} (1 - q^n)(1 - 2 q^n cos 2z + q^{2n})."""
    q = mpmath.mpf(q)
    z = mpmath.mpmathify(z)
    result = 2 * mpmath.power(q, mpmath.mpf(1) / 8) * mpmath.sin(z)
    c2 = 2 * mpmath.cos(2 * z)
    n = 1
    while True:
        qn = mpmath.power(q, n)
        if terms is None:
            if qn < mpmath.eps * mpmath.mpf(10) ** -5:
                break
        elif n > terms:
            break
        result *= (1 - qn) * (1 - c2 * qn + qn * qn)
        n += 1
    return result


def theta1_prime0(q):
    """theta1'(0|tau) = 2 q^{1/8} (q;q)_inf^3."""
    q = mpmath.mpf(q)
    return 2 * mpmath.power(q, mpmath.mpf(1) / 8) * euler(q) ** 3


def dirichlet_numeric(n: int, k: int):
    return mpmath.sin((2 * n + 1) * k * mpmath.pi / 20) / mpmath.sin(k * mpmath.pi / 20)


def _alpha_numeric(k: int):
    return -2 * mpmath.cos(k * mpmath.pi / 10)


def a_value(i: int, n: int):
    """A_i(n) from its sine-ratio definition."""
    d1, d9 = dirichlet_numeric(n, 1), dirichlet_numeric(n, 9)
    if i == 1:
        return d1 - d9
    if i == 2:
        return (1 + _alpha_numeric(9)) * d9 + (1 + _alpha_numeric(1)) * d1
    if i == 3:
        return _alpha_numeric(9) * d9 - _alpha_numeric(1) * d1
    raise PreconditionError(f"A-table index must be 1, 2 or 3, got {i}")


_C_A1 = (SQRT_50M10S5 + 3 * SQRT_10M2S5) / 2
_HALF_TABLES: Dict[int, List[KElem]] = {
    1: [KElem.coerce(0), SQRT_10P2S5, SQRT_10P2S5, _C_A1, _C_A1, _C_A1, _C_A1,
        SQRT_10P2S5, SQRT_10P2S5, KElem.coerce(0)],
    2: [KElem.coerce(2), -(3 + SQRT5), KElem.coerce(-2), -2 * (SQRT5 + 1), -(3 + SQRT5),
        -(3 + SQRT5), -2 * (SQRT5 + 1), KElem.coerce(-2), -(3 + SQRT5), KElem.coerce(2)],
    3: [SQRT_10P2S5, SQRT_10P2S5, SQRT_10M2S5 + 2 * SQRT_10P2S5, SQRT_10M2S5 + 2 * SQRT_10P2S5,
        2 * SQRT_10M2S5 + 2 * SQRT_10P2S5, 2 * SQRT_10M2S5 + 2 * SQRT_10P2S5,
        SQRT_10M2S5 + 2 * SQRT_10P2S5, SQRT_10M2S5 + 2 * SQRT_10P2S5, SQRT_10P2S5, SQRT_10P2S5],
}


def a_table_value(i: int, n: int) -> KElem:
    """Tabulated closed form of A_i(n); period 20, second half negated."""
    if i not in _HALF_TABLES:
        raise PreconditionError(f"A-table index must be 1, 2 or 3, got {i}")
    r = n % 20
    value = _HALF_TABLES[i][r % 10]
    return value if r < 10 else -value


def a_table_check(i: int, n_range=(0, 120), digits: int = DEFAULT_DIGITS, tol=None) -> NumericResult:
    lo, hi = n_range
    with mpmath.workdps(digits):
        tol = mpmath.mpf(tol) if tol is not None else mpmath.mpf(10) ** (15 - digits)
        errors, details = [], []
        for n in range(lo, hi):
            computed = a_value(i, n)
            err = abs(computed - a_table_value(i, n).to_mpf())
            errors.append(err)
            if err > tol:
                details.append(f"A_{i}({n}) = {mpmath.nstr(computed, 15)} disagrees with the table")
            # period 20
            errors.append(abs(computed - a_value(i, n + 20)))
        return _result(f"atable-A{i}", errors, tol, [f"n in [{lo}, {hi})"], details)


def sine_product_check(digits: int = DEFAULT_DIGITS) -> NumericResult:
    """prod_{k=1}^{9} sin(k pi/20) = sqrt(10)/512."""
    with mpmath.workdps(digits):
        prod = mpmath.fprod(mpmath.sin(k * mpmath.pi / 20) for k in range(1, 10))
        err = abs(prod - mpmath.sqrt(10) / 512)
        pairing = max(abs(mpmath.sin(k * mpmath.pi / 20) - mpmath.cos((10 - k) * mpmath.pi / 20))
                      for k in range(1, 10))
        return _result("prodsine", [err, pairing], mpmath.mpf(10) ** (5 - digits),
                       [f"product={mpmath.nstr(prod, 12)}"])


def tm_check(q=0.1, digits: int = DEFAULT_DIGITS, tol="1e-20") -> NumericResult:
    """prod_{k=1}^{9} theta1(k pi/20|tau) = sqrt(10) eta^9(tau) eta(20 tau)/eta(2 tau)."""
    with mpmath.workdps(digits):
        q = mpmath.mpf(q)
        lhs = mpmath.fprod(theta1_numeric(k * mpmath.pi / 20, q) for k in range(1, 10))
        rhs = mpmath.sqrt(10) * eta(q) ** 9 * eta(q, 20) / eta(q, 2)
        return _result("tm", [abs(lhs - rhs)], mpmath.mpf(tol), [f"q={mpmath.nstr(q, 6)}"])


def tk_check(q=0.1, digits: int = DEFAULT_DIGITS, order: int = 60, tol="1e-20") -> NumericResult:
    """theta1(k pi/20|tau) = 2 q^{1/12} eta(tau) sin(k pi/20) Omega_k(q), k = 1..9."""
    errors, details = [], []
    for k in range(1, 10):
        om = series_numeric(omega(k, 1, order), q, digits)
        with mpmath.workdps(digits):
            qq = mpmath.mpf(q)
            lhs = theta1_numeric(k * mpmath.pi / 20, qq)
            rhs = 2 * mpmath.power(qq, mpmath.mpf(1) / 12) * eta(qq) * mpmath.sin(k * mpmath.pi / 20) * om
            errors.append(abs(lhs - rhs))
            details.append(f"k={k}: {mpmath.nstr(lhs, 15)}")
    with mpmath.workdps(digits):
        return _result("tk", errors, mpmath.mpf(tol), [f"q={q}"], details)


def random_samples(count: int, seed: int, digits: int = DEFAULT_DIGITS) -> List[Sample]:
    rng = random.Random(seed)
    return [Sample(round(rng.uniform(0.01, 0.5), 6), round(rng.uniform(0.1, 3.0), 6), digits)
            for _ in range(count)]


def theta1_forms_check(samples: Sequence[Sample], tol="1e-25") -> NumericResult:
    """Sine series against the product form."""
    errors, labels = [], []
    for s in samples:
        with mpmath.workdps(s.precision_digits):
            errors.append(abs(theta1_numeric(s.z, s.q) - theta1_product(s.z, s.q)))
            labels.append(f"q={s.q}, z={s.z}")
    with mpmath.workdps(DEFAULT_DIGITS):
        return _result("theta1-forms", errors, mpmath.mpf(tol), labels)


def theta1_prime_check(qs: Sequence = (0.1, 0.2, 0.3), digits: int = DEFAULT_DIGITS, tol="1e-15") -> NumericResult:
    """Numerical derivative of the sine series at 0 against 2 q^{1/8} (q;q)^3."""
    errors = []
    with mpmath.workdps(digits):
        for q in qs:
            q = mpmath.mpf(q)
            d = mpmath.diff(lambda z: theta1_numeric(z, q), 0)
            errors.append(abs(d - theta1_prime0(q)))
        return _result("theta1-prime", errors, mpmath.mpf(tol), [f"q={q}" for q in qs])


def liu_check(samples: Sequence[Sample], tol="1e-20") -> NumericResult:
    """theta1(pi/3 - z) theta1(pi/3 + z) = (q;q)^3 theta1(3z|3tau) / ((q^3;q^3) theta1(z|tau))."""
    errors, labels = [], []
    for s in samples:
        with mpmath.workdps(s.precision_digits):
            q, z = mpmath.mpf(s.q), mpmath.mpf(s.z)
            den = euler(q ** 3) * theta1_numeric(z, q)
            if abs(den) < NEAR_ZERO:
                raise SampleRejectedError(f"theta1(z) vanishes near z={s.z}")
            lhs = theta1_numeric(mpmath.pi / 3 - z, q) * theta1_numeric(mpmath.pi / 3 + z, q)
            rhs = euler(q) ** 3 * theta1_numeric(3 * z, q ** 3) / den
            errors.append(abs(lhs - rhs))
            labels.append(f"q={s.q}, z={s.z}")
    with mpmath.workdps(DEFAULT_DIGITS):
        return _result("liu", errors, mpmath.mpf(tol), labels)


# residues of the Lambert numerator, shifts in the denominator, and the numerator shift
ES_LEMMAS = {
    "es1": ((1, 9, 11, 19), (1, 9), 8),
    "es2": ((3, 7, 13, 17), (3, 7), 4),
}


def _es_sides(which: str, q, z):
    residues, (c1, c2), c_num = ES_LEMMAS[which]
    q20 = q ** 20
    lhs = mpmath.mpf(0)
    n = 1
    signs = (1, -1, -1, 1)
    while True:
        coeff = sum(s * q ** (r * n) for s, r in zip(signs, residues)) / (1 - q20 ** n)
        term = coeff * mpmath.sin(2 * n * z)
        lhs += term
        if q ** (residues[0] * n) < mpmath.eps * mpmath.mpf(10) ** -5:
            break
        n += 1

    def th(x):
        return theta1_numeric(x, q20)

    denominators = [th(tau_shift(z, -c1, q)), th(tau_shift(z, c1, q)),
                    th(tau_shift(z, -c2, q)), th(tau_shift(z, c2, q))]
    if min(abs(d) for d in denominators) < NEAR_ZERO:
        raise SampleRejectedError(f"a denominator theta1 vanishes near z={mpmath.nstr(z, 8)}")
    num = theta1_prime0(q20) * th(2 * z) * th(tau_shift(0, 10, q)) * th(tau_shift(0, c_num, q))
    rhs = -num / (4 * mpmath.fprod(denominators))
    return lhs, rhs


def es_lemma_check(which: str, samples: Sequence[Sample], tol=None) -> NumericResult:
    """
    The Lambert-sine sums against their theta1 quotients, with theta1'(0|20tau)
    in the numerator.
    """
    which = which.lower()
    if which not in ES_LEMMAS:
        raise PreconditionError(f"unknown lemma {which!r} (expected es1 or es2)")
    errors, labels = [], []
    for s in samples:
        with mpmath.workdps(s.precision_digits):
            lhs, rhs = _es_sides(which, mpmath.mpf(s.q), mpmath.mpf(s.z))
            errors.append(abs(lhs - rhs))
            labels.append(f"q={s.q}, z={s.z}")
    digits = min((s.precision_digits for s in samples), default=DEFAULT_DIGITS)
    with mpmath.workdps(digits):
        tol = mpmath.mpf(tol) if tol is not None else mpmath.mpf(10) ** (10 - digits)
        return _result(which, errors, tol, labels)


def cf_display_check(name, qs: Sequence = (0.05, 0.1, 0.2), depth: int = 30, series_order: int = 40,
                     digits: int = DEFAULT_DIGITS, tol="1e-8") -> NumericResult:
    """Displayed fraction at finite depth against the theta-quotient series."""
    name = CFName.parse(name)
    series = cf_series(name, 1, series_order)
    errors, labels = [], []
    for q in qs:
        cf = cf_numeric(name, q, depth, digits)
        value = series_numeric(series, q, digits)
        with mpmath.workdps(digits):
            errors.append(abs(cf - value))
        labels.append(f"q={q}")
    with mpmath.workdps(digits):
        return _result(f"cf-{name.value}", errors, mpmath.mpf(tol), labels)
