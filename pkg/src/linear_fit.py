"""Exact recovery of coefficients c_j with lhs = sum_j c_j basis_j over Q(beta)."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from src.errors import InsufficientOrderError, PreconditionError
from src.field import ZERO, KElem
from src.series import EqualityResult, QSeries, s_add, s_equal_to_order, s_scale, s_truncate, zero
from src.utils import fmt_rat, parse_rat

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FitResult:
    coefficients: Tuple[KElem, ...]
    rank: int
    consistent: bool
    check: EqualityResult

    @property
    def passed(self) -> bool:
        return self.consistent and self.check.equal


def _exponents_below(series: Sequence[QSeries], bound: Fraction) -> List[Fraction]:
    exps = set()
    for s in series:
        for e, _ in s.terms():
            if e < bound:
                exps.add(e)
    return sorted(exps)


def _row_reduce(rows: List[List[KElem]], ncols: int) -> Tuple[List[List[KElem]], List[int]]:
    """Reduced row echelon form of the augmented matrix; returns (rows, pivot columns)."""
    pivots = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = KElem.coerce(1) / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                factor = rows[i][col]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def combine(coefficients: Sequence, basis: Sequence[QSeries], order) -> QSeries:
    order = parse_rat(order)
    out = zero(order)
    for c, b in zip(coefficients, basis):
        if c:
            out = s_add(out, s_scale(s_truncate(b, min(order, b.order)), c))
    return out


def fit_combination(lhs: QSeries, basis: Sequence[QSeries], fit_order, check_order) -> FitResult:
    """
    Solve lhs = sum c_j basis_j from the coefficients below fit_order, then
    compare both sides below check_order. Free columns get coefficient 0.
    """
    if not basis:
        raise PreconditionError("fit needs at least one basis series")
    fit_order, check_order = parse_rat(fit_order), parse_rat(check_order)
    if fit_order > check_order:
        raise PreconditionError(
            f"fit order {fmt_rat(fit_order)} exceeds check order {fmt_rat(check_order)}")
    known = min([lhs.order] + [b.order for b in basis])
    if check_order > known:
        raise InsufficientOrderError(
            f"fit checked below q^{fmt_rat(check_order)} but inputs are known below q^{fmt_rat(known)}")

    exps = _exponents_below([lhs, *basis], fit_order)
    n = len(basis)
    rows = [[KElem.coerce(b.coefficient(e)) for b in basis] + [KElem.coerce(lhs.coefficient(e))]
            for e in exps]
    rows, pivots = _row_reduce(rows, n)
    consistent = all(any(row[:n]) or not row[n] for row in rows)
    coeffs = [ZERO] * n
    for i, col in enumerate(pivots):
        coeffs[col] = rows[i][n]
    logger.debug("fit over %d exponents below q^%s: rank %d of %d", len(exps), fmt_rat(fit_order), len(pivots), n)
    if not consistent:
        logger.warning("no combination of %d basis series matches below q^%s", n, fmt_rat(fit_order))
    check = s_equal_to_order(lhs, combine(coeffs, basis, check_order), check_order)
    return FitResult(tuple(coeffs), len(pivots), consistent, check)
