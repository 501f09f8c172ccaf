import argparse
import copy
import logging
import os
import sys
from typing import List, Optional

# Add the parent directory of 'src' to the Python path
sys.path.append(os.path.join(os.path.dirname(os.path.abspath(__file__)), '..'))

from src.cfractions import CFName, cf_numeric, cf_numeric_converged
from src.config import apply_profile, load_config, setup_logging
from src.errors import ConfigError, ExpressionParseError, UnknownIdentityError, VerificationError
from src.expression import expand_expr
from src.performance_monitor import PerformanceMonitor
from src.registry import REGISTRY, get_identity
from src.report_generator import compile_reports_to_csv, compile_reports_to_pdf, write_json_report
from src.series import render_series
from src.utils import fmt_duration, fmt_rat, parse_rat
from src.verifier import (ERROR, FAIL, PASS, Report, exit_code, fit_identity, reports_to_json, summarize,
                          verify, verify_all)

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

NUMERIC_CHECKS = {
    "prodsine": ["num-prodsine"],
    "tm": ["num-tm"],
    "es1": ["num-es1"],
    "es2": ["num-es2"],
    "atables": ["num-atable-A1", "num-atable-A2", "num-atable-A3"],
}

STATUS_ICONS = {PASS: "✅", FAIL: "❌", ERROR: "⚠️ "}


def _print_report(report: Report):
    icon = STATUS_ICONS[report.status]
    where = f"order {fmt_rat(report.order)}" if report.order is not None else f"{len(report.samples or [])} samples"
    note = "" if report.expected == "pass" else f" [{report.expected}]"
    timing = f", {report.wall_ms} ms" if report.wall_ms else ""
    print(f"{icon} {report.id}: {report.status} ({where}{timing}){note}")
    if report.first_mismatch:
        m = report.first_mismatch.to_dict()
        print(f"    first mismatch at q^{m['exponent']}: delta = ({', '.join(m['delta_exact'])}) "
              f"~ {m['delta_numeric']}")
    if report.message:
        print(f"    {report.message}")


def _deterministic(args, config) -> bool:
    """wall_ms is zeroed unless --timing asks for measured times."""
    if args.timing:
        return False
    return args.deterministic or bool(config["verify_all"]["deterministic_timing"])


def cmd_verify(args, config) -> int:
    report = verify(args.id, order=args.order, ring_hint=args.ring, config=config,
                    deterministic=_deterministic(args, config))
    if args.json:
        print(reports_to_json(report))
    else:
        _print_report(report)
    return exit_code([report])


def cmd_verify_all(args, config) -> int:
    profile = args.profile or config["verify_all"]["profile"]
    jobs = args.jobs or config["verify_all"]["jobs"]
    deterministic = _deterministic(args, config)
    config = apply_profile(config, profile)
    ids = args.ids or list(REGISTRY)

    monitor = PerformanceMonitor()
    if not args.json:
        print(f"Verifying {len(ids)} identities (profile {profile}, {jobs} job(s))...")
    monitor.start_monitoring({'profile': profile, 'jobs': jobs, 'total_identities': len(ids)})
    try:
        reports = verify_all(config, profile=profile, jobs=jobs, ids=ids, deterministic=deterministic,
                             progress=not args.json, on_progress=monitor.update_progress)
    finally:
        performance_summary = monitor.stop_monitoring()

    if args.csv:
        compile_reports_to_csv(reports, args.csv, config)
    if args.pdf:
        compile_reports_to_pdf(reports, args.pdf, config)
    if args.json_out is not None:
        write_json_report(reports, args.json_out or None, config)

    if args.json:
        print(reports_to_json(reports))
        return exit_code(reports)

    for report in reports:
        if report.status != PASS:
            _print_report(report)
    counts = summarize(reports)
    print(f"\n{counts[PASS]}/{counts['total']} passed, {counts[FAIL]} failed, {counts[ERROR]} errors "
          f"({counts['expected_failures']} documented readings)")
    if performance_summary:
        print(f"\n📊 Performance Summary:")
        print(f"  Wall time: {fmt_duration(performance_summary['total_time'])}")
        if performance_summary.get('identities_per_minute'):
            print(f"  Rate: {performance_summary['identities_per_minute']:.1f} identities/min")
        print(f"  Peak CPU: {performance_summary['peak_cpu_percent']:.1f}%")
        print(f"  Peak Memory: {performance_summary['peak_memory_percent']:.1f}% "
              f"({performance_summary['peak_process_rss_mb']:.0f} MB resident)")
    return exit_code(reports)


def cmd_list(args, config) -> int:
    for spec in REGISTRY.values():
        if args.family and spec.family != args.family:
            continue
        flags = [spec.mode.value]
        if spec.fitted:
            flags.append("fitted")
        if spec.expected.value != "pass":
            flags.append(spec.expected.value)
        print(f"{spec.id:<28} {spec.family:<11} {','.join(flags):<22} {spec.description}")
    return EXIT_OK


def cmd_expand(args, config) -> int:
    series = expand_expr(args.expr, args.order)
    print(render_series(series, args.digits))
    return EXIT_OK


def cmd_cf_eval(args, config) -> int:
    name = CFName.parse(args.name)
    digits = args.digits or config["numeric"]["precision_digits"]
    if args.depth:
        value, depth = cf_numeric(name, args.q, args.depth, digits), args.depth
    else:
        value, depth = cf_numeric_converged(name, args.q, digits=digits)
    print(f"{name.value}(q={args.q}) at depth {depth}: {value}")
    return EXIT_OK


def cmd_numeric(args, config) -> int:
    if args.digits:
        config["numeric"]["precision_digits"] = args.digits
    reports = [verify(i, config=config) for i in NUMERIC_CHECKS[args.check]]
    for report in reports:
        _print_report(report)
    return exit_code(reports)


def cmd_fit(args, config) -> int:
    spec = get_identity(args.id)
    order = parse_rat(args.order) if args.order else parse_rat(config["verification"]["orders"][spec.family])
    fit = fit_identity(spec, order, config)
    labels = ["P psi", "G inv", "G ts", "G t2s1", "G s1t2"]
    print(f"{spec.id}: rank {fit.rank}, {'consistent' if fit.consistent else 'inconsistent'}")
    for label, c in zip(labels, fit.coefficients):
        print(f"  {label:<7} {c}")
    if fit.check.equal:
        print(f"✅ combination agrees below q^{fmt_rat(order)}")
        return EXIT_OK
    print(f"❌ combination differs at q^{fmt_rat(fit.check.exponent)}")
    return EXIT_FAILED


def _add_timing_options(p: argparse.ArgumentParser):
    group = p.add_mutually_exclusive_group()
    group.add_argument('--deterministic', action='store_true', help="Report wall_ms as 0 (the default).")
    group.add_argument('--timing', action='store_true', help="Report measured wall_ms.")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qseries-verify",
                                     description="Verify q-series identities exactly and numerically.")
    parser.add_argument('--config', type=str, help="Path to a YAML config file (default: config/config.yaml).")
    parser.add_argument('--verbose', '-v', action='store_true', help="DEBUG logging.")
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('verify', help="Verify one identity.")
    p.add_argument('--id', required=True, help="Registry id (see `list`).")
    p.add_argument('--order', type=str, help="Exclusive exponent bound, e.g. 10 or 61/5.")
    p.add_argument('--ring', choices=['auto', 'rational', 'field'], help="Coefficient ring hint.")
    p.add_argument('--json', action='store_true', help="Print the JSON report.")
    _add_timing_options(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser('verify-all', help="Verify every registered identity.")
    p.add_argument('--profile', choices=['quick', 'full'], help="Order profile.")
    p.add_argument('--jobs', type=int, help="Worker processes.")
    p.add_argument('--id', dest='ids', action='append', help="Only this id (repeatable).")
    p.add_argument('--json', action='store_true', help="Print the JSON report array.")
    p.add_argument('--json-out', nargs='?', const='', metavar='PATH',
                   help="Write the JSON report array (default: a timestamped file in the reports directory).")
    p.add_argument('--csv', type=str, help="Write a CSV summary to this path.")
    p.add_argument('--pdf', type=str, help="Write a PDF summary to this path.")
    _add_timing_options(p)
    p.set_defaults(func=cmd_verify_all)

    p = sub.add_parser('list', help="List registered identities.")
    p.add_argument('--family', type=str, help="Only this family.")
    p.set_defaults(func=cmd_list)

    p = sub.add_parser('expand', help="Expand an expression as a truncated series.")
    p.add_argument('--expr', required=True, help="Expression, e.g. 'eta(20)/eta(2)'.")
    p.add_argument('--order', required=True, type=str, help="Exclusive exponent bound.")
    p.add_argument('--digits', type=int, default=6, help="Digits for irrational coefficients.")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser('cf-eval', help="Evaluate a continued fraction numerically.")
    p.add_argument('--name', required=True, choices=[n.value for n in CFName])
    p.add_argument('--q', required=True, type=float, help="Real q in (0, 1).")
    p.add_argument('--depth', type=int, help="Fixed depth; default doubles until converged.")
    p.add_argument('--digits', type=int, help="Working precision.")
    p.set_defaults(func=cmd_cf_eval)

    p = sub.add_parser('numeric', help="Run a numeric check.")
    p.add_argument('--check', required=True, choices=sorted(NUMERIC_CHECKS))
    p.add_argument('--digits', type=int, help="Working precision (at least 30).")
    p.set_defaults(func=cmd_numeric)

    p = sub.add_parser('fit', help="Recover the theorem-basis coefficients of a fitted identity.")
    p.add_argument('--id', required=True, help="A thm3-*-fitted id.")
    p.add_argument('--order', type=str, help="Check order.")
    p.set_defaults(func=cmd_fit)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = copy.deepcopy(load_config(args.config))
        setup_logging(config, args.verbose)
        return args.func(args, config)
    except (UnknownIdentityError, ExpressionParseError, ConfigError) as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except VerificationError as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
