"""Command-line front end.

    betasimplex exact s0 --d 3 --beta -1
    betasimplex exact table --d 4 --beta 0
    betasimplex exact facets --n 5 --d 3 --beta -0.5
    betasimplex mc s0-projection --d 3 --beta -1 --samples 1000000 --seed 42
    betasimplex verify --suite paper --seed 42 [--quick]

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical
failure. ``BETASIMPLEX_WORKERS`` sets the default worker count.
"""

from __future__ import annotations

import argparse
import sys
import time
from decimal import Decimal, InvalidOperation

from . import checks
from .angle_sums import BetaParam, expected_s0_result, table_from_s0
from .beta_polytopes import PolytopeSpec, expected_facets_result
from .core_math import DEFAULT_ABS_TOL, QuadratureError
from .estimators import (
    DEFAULT_DIRS_PER_VERTEX,
    default_workers,
    mc_angle_sum_direct,
    mc_facet_count,
    mc_projection_simplex_prob,
)
from .geometry import DegenerateError
from .report import ResultRow, RunReport

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_beta(text: str) -> float:
    """Decimal string to float; the sphere sentinel -1 is matched exactly."""
    try:
        dec = Decimal(text)
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not dec.is_finite():
        raise argparse.ArgumentTypeError(f"beta must be finite: {text!r}")
    if dec == -1:
        return -1.0
    if dec < -1:
        raise argparse.ArgumentTypeError(f"beta must be >= -1, got {text}")
    return float(dec)


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("human", "json", "csv"), default="human")
    p.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")
    p.add_argument("--timing", action="store_true",
                   help="include wall-clock timings in json/csv output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="betasimplex",
        description="Expected angle-sums of random beta simplices in dimensions 3 and 4.")
    sub = parser.add_subparsers(dest="command", required=True)

    ex = sub.add_parser("exact", help="evaluate the exact formulas by quadrature")
    ex.add_argument("subject", choices=("s0", "table", "facets"))
    ex.add_argument("--d", type=int, required=True)
    ex.add_argument("--beta", type=parse_beta, required=True)
    ex.add_argument("--n", type=int, help="number of points (facets only)")
    ex.add_argument("--tol", type=float, default=DEFAULT_ABS_TOL)
    _add_output(ex)

    mc = sub.add_parser("mc", help="Monte Carlo estimates")
    mc.add_argument("subject", choices=("s0-direct", "s0-projection", "facets"))
    mc.add_argument("--d", type=int, required=True)
    mc.add_argument("--beta", type=parse_beta, required=True)
    mc.add_argument("--n", type=int, help="number of points (facets only)")
    mc.add_argument("--samples", type=_positive_int, default=checks.MC_SAMPLES)
    mc.add_argument("--dirs", type=_positive_int, default=DEFAULT_DIRS_PER_VERTEX,
                    help="directions per vertex (s0-direct, d=4)")
    mc.add_argument("--seed", type=int, default=checks.DEFAULT_SEED)
    mc.add_argument("--workers", type=_positive_int, default=None)
    _add_output(mc)

    ver = sub.add_parser("verify", help="run the verification suite")
    ver.add_argument("--suite", choices=("paper",), default="paper")
    ver.add_argument("--quick", action="store_true", help="quadrature-only checks")
    ver.add_argument("--seed", type=int, default=checks.DEFAULT_SEED)
    ver.add_argument("--workers", type=_positive_int, default=None)
    _add_output(ver)
    return parser


def _check_d(d: int, allowed) -> None:
    if d not in allowed:
        raise UsageError(f"--d must be one of {sorted(allowed)}, got {d}")


def _spec(args) -> PolytopeSpec:
    if args.n is None:
        raise UsageError("facets needs --n")
    try:
        return PolytopeSpec(args.n, args.d, args.beta)
    except ValueError as exc:
        raise UsageError(str(exc))


def cmd_exact(args) -> RunReport:
    params = {"subject": args.subject, "d": args.d, "beta": args.beta, "tol": args.tol}
    rows = []
    if args.subject == "facets":
        spec = _spec(args)
        params["n"] = spec.n
        res = expected_facets_result(spec, args.tol)
        rows.append(ResultRow("E_facets", res.value, res.abs_error_estimate,
                              note=f"{res.evaluations} evaluations"))
    else:
        _check_d(args.d, (3, 4))
        res = expected_s0_result(args.d, BetaParam(args.beta), args.tol)
        if args.subject == "s0":
            rows.append(ResultRow("E_s0", res.value, res.abs_error_estimate,
                                  note=f"{res.evaluations} evaluations"))
        else:
            table = table_from_s0(args.d, args.beta, res.value)
            for k, v in enumerate(table.s):
                # s_{d-1} is exact; the others inherit the s0 error times their coefficient
                coef = (1, 1, 0)[k] if args.d == 3 else (1, 3, 2, 0)[k]
                rows.append(ResultRow(f"E_s{k}", v, coef * res.abs_error_estimate or None))
    return RunReport("", params, rows)


def cmd_mc(args) -> RunReport:
    workers = args.workers or default_workers()
    params = {"subject": args.subject, "d": args.d, "beta": args.beta,
              "samples": args.samples, "workers": workers}
    rows = []
    if args.subject == "facets":
        spec = _spec(args)
        _check_d(spec.d, (2, 3))
        params["n"] = spec.n
        est = mc_facet_count(spec, args.samples, args.seed, workers)
        rows.append(ResultRow("E_facets", est.mean, est.std_error,
                              note=f"rejected={est.rejections}"))
    elif args.subject == "s0-projection":
        _check_d(args.d, (3, 4))
        est = mc_projection_simplex_prob(args.d, args.beta, args.samples, args.seed, workers)
        rows.append(ResultRow("P_simplex_projection", est.mean, est.std_error,
                              note=f"rejected={est.rejections}"))
        half = est.scaled(0.5)
        rows.append(ResultRow("E_s0", half.mean, half.std_error))
    else:
        _check_d(args.d, (3, 4))
        params["dirs_per_vertex"] = args.dirs
        est = mc_angle_sum_direct(args.d, args.beta, args.samples, args.dirs, args.seed, workers)
        rows.append(ResultRow("E_s0", est.mean, est.std_error, note=f"rejected={est.rejections}"))
    return RunReport("", params, rows, seed=args.seed)


def cmd_verify(args) -> RunReport:
    # workers only affect scheduling, never results, so they stay out of the report
    params = {"suite": args.suite, "quick": args.quick}
    rows = checks.run_suite(args.seed, args.quick, args.workers)
    return RunReport("", params, rows, seed=args.seed)


def _render(report: RunReport, fmt: str, timing: bool) -> str:
    if fmt == "human":
        return report.to_text()
    if not timing:
        report = report.without_timings()
    return report.to_json() if fmt == "json" else report.to_csv()


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on bad usage
    handler = {"exact": cmd_exact, "mc": cmd_mc, "verify": cmd_verify}[args.command]
    started = time.perf_counter()
    try:
        report = handler(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (QuadratureError, DegenerateError, ArithmeticError) as exc:
        print(f"betasimplex: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        parser.error(str(exc))
    report.command = " ".join(["betasimplex", *argv])
    report.duration_s = time.perf_counter() - started

    text = _render(report, args.format, args.timing)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    if not report.passed:
        names = ", ".join(r.name for r in report.failures)
        print(f"betasimplex: failed checks: {names}", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
