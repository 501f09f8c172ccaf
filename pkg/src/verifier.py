"""
Verification driver: builds both sides of a registry entry, compares them and
turns the outcome into a Report.
"""

import copy
import json
import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional

from tqdm import tqdm

from src.config import DEFAULTS, apply_profile
from src.errors import PreconditionError, RingError
from src.field import KElem, k_embed
from src.linear_fit import FitResult, fit_combination
from src.registry import Expected, IdentitySpec, Mode, get_identity, identity_ids
from src.series import EqualityResult, s_equal_to_order
from src.series_cache import DEFAULT_CACHE_SIZE, SeriesCache
from src.utils import fmt_rat, parse_rat, stopwatch

logger = logging.getLogger(__name__)

PASS, FAIL, ERROR = "pass", "fail", "error"
RING_HINTS = ("auto", "rational", "field")


@dataclass(frozen=True)
class Mismatch:
    exponent: Fraction
    delta: KElem

    def to_dict(self) -> Dict:
        return {
            "exponent": fmt_rat(self.exponent),
            "delta_exact": [fmt_rat(c) for c in self.delta.coords],
            "delta_numeric": k_embed(self.delta, 20),
        }


@dataclass
class Report:
    id: str
    status: str
    mode: str
    order: Optional[Fraction] = None
    samples: Optional[List[str]] = None
    first_mismatch: Optional[Mismatch] = None
    wall_ms: int = 0
    expected: str = Expected.PASS.value
    message: str = ""
    details: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict:
        """JSON form with the documented field order."""
        out = {"id": self.id, "status": self.status, "mode": self.mode}
        if self.mode == Mode.EXACT.value:
            out["order"] = fmt_rat(self.order) if self.order is not None else None
        else:
            out["samples"] = list(self.samples or [])
        out["first_mismatch"] = self.first_mismatch.to_dict() if self.first_mismatch else None
        out["wall_ms"] = self.wall_ms
        return out

    @property
    def ok(self) -> bool:
        return self.status == PASS or self.expected != Expected.PASS.value


def _mismatch(result: EqualityResult) -> Optional[Mismatch]:
    if result.equal:
        return None
    return Mismatch(result.exponent, result.delta)


def _order_for(spec: IdentitySpec, config: Dict) -> Fraction:
    orders = config["verification"]["orders"]
    if spec.family not in orders:
        raise PreconditionError(f"no default order configured for family {spec.family!r}")
    return parse_rat(orders[spec.family])


def _check_ring(spec: IdentitySpec, ring_hint: str):
    if ring_hint not in RING_HINTS:
        raise PreconditionError(f"unknown ring hint {ring_hint!r} (expected one of {RING_HINTS})")
    if ring_hint != "rational":
        return
    sides = [spec.lhs, spec.rhs, *(spec.basis or ())]
    if any(s is not None and s.needs_field() for s in sides):
        raise RingError(f"{spec.id} needs Q(beta) coefficients but a rational-only run was requested")


def fit_identity(spec: IdentitySpec, order: Fraction, config: Dict) -> FitResult:
    """Fit the left side of `spec` on its basis and check below q^order."""
    if not spec.fitted:
        raise PreconditionError(f"{spec.id} has no basis to fit against")
    basis = spec.basis
    fit_order = min(parse_rat(config["verification"]["orders"]["theorem3_fit"]), order)
    lhs = spec.lhs.build(order)
    built = [b.build(order) for b in basis]
    return fit_combination(lhs, built, fit_order, order)


def _verify_exact(spec: IdentitySpec, order: Fraction, config: Dict, report: Report):
    if spec.fitted:
        fit = fit_identity(spec, order, config)
        report.details = [str(c) for c in fit.coefficients]
        if not fit.consistent:
            report.message = "no exact combination of the basis matches"
        result = fit.check
    else:
        lhs = spec.lhs.build(order)
        rhs = spec.rhs.build(order)
        result = s_equal_to_order(lhs, rhs, order)
    report.status = PASS if result.equal else FAIL
    report.first_mismatch = _mismatch(result)


def verify(identity_id: str, order=None, ring_hint: Optional[str] = None, config: Optional[Dict] = None,
           deterministic: Optional[bool] = None) -> Report:
    """
    Verify one registry entry.

    Unknown ids raise UnknownIdentityError; anything raised while building or
    comparing becomes an "error" report. wall_ms stays 0 unless timing is
    requested here or verify_all.deterministic_timing is off.
    """
    spec = get_identity(identity_id)
    config = config or copy.deepcopy(DEFAULTS)
    ring_hint = ring_hint or config["verification"].get("ring_hint", "auto")
    if deterministic is None:
        deterministic = bool(config["verify_all"].get("deterministic_timing", True))
    SeriesCache().resize(config["verification"].get("cache_size", DEFAULT_CACHE_SIZE))
    report = Report(spec.id, ERROR, spec.mode.value, expected=spec.expected.value)

    with stopwatch() as sw:
        try:
            if spec.mode is Mode.EXACT:
                report.order = parse_rat(order) if order is not None else _order_for(spec, config)
                _check_ring(spec, ring_hint)
                _verify_exact(spec, report.order, config, report)
            else:
                result = spec.check(config["numeric"])
                report.samples = result.samples
                report.status = PASS if result.passed else FAIL
                report.message = f"max error {result.max_error} (tolerance {result.tolerance})"
                report.details = result.details
        except Exception as e:
            report.status = ERROR
            report.message = f"{type(e).__name__}: {e}"
            logger.error("%s: %s", spec.id, report.message)

    report.wall_ms = 0 if deterministic else sw["ms"]
    if report.status == PASS:
        logger.info("%s: pass (%d ms)", spec.id, report.wall_ms)
    elif report.status == FAIL:
        where = f" at q^{fmt_rat(report.first_mismatch.exponent)}" if report.first_mismatch else ""
        logger.warning("%s: fail%s [expected %s]", spec.id, where, spec.expected.value)
    return report


def _verify_worker(identity_id: str, config: Dict, deterministic: bool) -> Report:
    return verify(identity_id, config=config, deterministic=deterministic)


def verify_all(config: Optional[Dict] = None, profile: Optional[str] = None, jobs: Optional[int] = None,
               ids: Optional[Iterable[str]] = None, deterministic: Optional[bool] = None,
               progress: bool = True, on_progress: Optional[Callable[[int, int], None]] = None) -> List[Report]:
    """Run every entry (or `ids`) at its family's order; results come back in registry order."""
    config = config or copy.deepcopy(DEFAULTS)
    profile = profile or config["verify_all"].get("profile", "full")
    config = apply_profile(config, profile)
    jobs = jobs or config["verify_all"].get("jobs", 1)
    if deterministic is None:
        deterministic = bool(config["verify_all"].get("deterministic_timing", True))
    ids = list(ids) if ids is not None else identity_ids()
    for identity_id in ids:
        get_identity(identity_id)

    logger.info("verifying %d identities (profile %s, %d job(s))", len(ids), profile, jobs)
    results: Dict[str, Report] = {}
    bar = tqdm(total=len(ids), desc="Verifying", unit="identity", disable=not progress)
    if jobs <= 1:
        for identity_id in ids:
            bar.set_postfix_str(identity_id)
            results[identity_id] = verify(identity_id, config=config, deterministic=deterministic)
            bar.update(1)
            if on_progress:
                on_progress(len(results), len(ids))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {pool.submit(_verify_worker, i, config, deterministic): i for i in ids}
            for future in as_completed(futures):
                results[futures[future]] = future.result()
                bar.update(1)
                if on_progress:
                    on_progress(len(results), len(ids))
    bar.close()
    return [results[i] for i in ids]


def exit_code(reports: Iterable[Report]) -> int:
    """0 when every expected-pass entry passed, 1 otherwise."""
    return 0 if all(r.ok for r in reports) else 1


def reports_to_json(reports) -> str:
    if isinstance(reports, Report):
        return json.dumps(reports.to_dict(), indent=2)
    return json.dumps([r.to_dict() for r in reports], indent=2)


def summarize(reports: List[Report]) -> Dict[str, int]:
    counts = {PASS: 0, FAIL: 0, ERROR: 0}
    for r in reports:
        counts[r.status] += 1
    counts["total"] = len(reports)
    counts["expected_failures"] = sum(1 for r in reports if r.status != PASS and r.expected != Expected.PASS.value)
    return counts
