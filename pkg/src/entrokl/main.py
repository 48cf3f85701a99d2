"""Command-line entry point for entrokl.

Subcommands: estimate, sample, conditions, diagnose, converge. Reports go to
stdout (or --out) as JSON; logs go to stderr.

Exit codes: 0 success, 2 input or flag error, 3 duplicate points, 4 divergent
estimate or failed check, 5 partial experiment failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from enum import IntEnum
from pathlib import Path

import logfire
from pydantic import ValidationError

from entrokl.config import Settings, get_settings
from entrokl.logging_config import setup_logging
from entrokl.models import EstimateSummary, NnMethod, Report
from entrokl.services import (
    AnalyticDensity,
    DuplicatePointsError,
    EntroklError,
    check_condition_A,
    check_condition_B,
    check_condition_C1,
    check_gaussian_minorization,
    conditional_law_report,
    conditional_log_moments,
    convergence_study,
    exact_cdf_agreement,
    functional_K,
    functional_Q,
    functional_T,
    gaussian_probe_points,
    kl_entropy,
    kl_entropy_with_jitter,
    load_density_spec,
    nn_distances,
    read_points_csv,
    render_report,
    verify_log_moment_identities,
    write_points_csv,
    write_records_csv,
)
from entrokl.services.experiments import DEFAULT_N_GRID
from entrokl.services.storage import STDOUT, open_output

logger = logging.getLogger(__name__)

FUNCTIONALS = ("K", "K2", "Q", "T", "A", "minorization", "lemmaG", "B", "C1")
EXIT_CODES_HELP = (
    "exit codes: 0 success, 2 input or flag error, 3 duplicate points, "
    "4 failed check or divergent functional (any report whose check did not pass), "
    "5 partial experiment failure"
)


class ExitCode(IntEnum):
    """Process exit codes."""

    OK = 0
    INPUT_ERROR = 2
    DUPLICATE_POINTS = 3
    CHECK_FAILED = 4
    PARTIAL_FAILURE = 5


class UsageError(EntroklError, ValueError):
    """Flags that parse but do not fit together."""

    pass


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",")]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from e


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",")]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from e


def _emit(report: Report, out: str) -> None:
    with open_output(out) as stream:
        stream.write(render_report(report))


def _require_density(args: argparse.Namespace) -> AnalyticDensity:
    if args.density is None:
        raise UsageError(f"--functional {args.functional} needs a density document")
    return load_density_spec(args.density)


def cmd_estimate(args: argparse.Namespace, settings: Settings) -> ExitCode:
    """Estimate the entropy of a points file."""
    sample = read_points_csv(args.points)
    method = NnMethod(args.backend)
    nn = nn_distances(sample, method=method, workers=settings.threads)

    if args.jitter > 0:
        estimate = kl_entropy_with_jitter(
            sample, args.jitter, args.seed, method=method, workers=settings.threads
        )
    else:
        estimate = kl_entropy(sample, nn)

    summary = EstimateSummary(
        h_n=estimate.h_n,
        n=estimate.n,
        dim=estimate.dim,
        log_rho_bar=estimate.log_rho_bar,
        method=estimate.method,
        duplicates_handled=nn.has_duplicates,
    )
    _emit(summary, args.out)
    return ExitCode.OK


def cmd_sample(args: argparse.Namespace, settings: Settings) -> ExitCode:
    """Draw a sample from a density document and write it as CSV."""
    density = load_density_spec(args.density)
    sample = density.sample(args.n, args.seed)
    with open_output(args.out) as stream:
        write_points_csv(sample.points, stream)
    return ExitCode.OK


def cmd_conditions(args: argparse.Namespace, settings: Settings) -> ExitCode:
    """Evaluate one condition functional or check."""
    workers = settings.threads
    report: Report
    match args.functional:
        case "lemmaG":
            report = verify_log_moment_identities(args.rate, args.quad_tol)
        case "K" | "K2":
            report = functional_K(
                _require_density(args),
                eps0=args.eps,
                n_outer=args.n_outer or 2000,
                n_inner=args.n_inner,
                seed=args.seed,
                squared=args.functional == "K2",
                redraw_cap=settings.redraw_cap,
                workers=workers,
            )
        case "Q" | "T":
            estimate = functional_Q if args.functional == "Q" else functional_T
            report = estimate(
                _require_density(args),
                args.eps,
                args.r,
                n_outer=args.n_outer or 1000,
                grid=args.grid,
                mc_n=args.mc_n,
                seed=args.seed,
                grid_refinements=settings.grid_refinements,
                workers=workers,
            )
        case "A":
            report = check_condition_A(
                _require_density(args), args.p, n_pairs=args.n_outer or 100_000, seed=args.seed
            )
        case "B" | "C1":
            check = check_condition_B if args.functional == "B" else check_condition_C1
            report = check(_require_density(args), n_probe=args.n_outer or 10_000, seed=args.seed)
        case "minorization":
            density = _require_density(args)
            probes = gaussian_probe_points(density, args.probes, args.seed)
            report = check_gaussian_minorization(
                density,
                args.r,
                probes,
                grid=args.grid,
                mc_n=args.mc_n,
                seed=args.seed,
                grid_refinements=settings.grid_refinements,
            )

    _emit(report, args.out)
    if report.is_failure():
        logger.warning(f"Condition {args.functional} failed or diverged")
        return ExitCode.CHECK_FAILED
    return ExitCode.OK


def cmd_diagnose(args: argparse.Namespace, settings: Settings) -> ExitCode:
    """Compare the conditional nearest-neighbor law with its limit."""
    density = load_density_spec(args.density)
    report: Report
    match args.mode:
        case "law":
            report = conditional_law_report(
                density, args.x, args.n, args.reps, args.seed, workers=settings.threads
            )
        case "agreement":
            report = exact_cdf_agreement(
                density, args.x, args.n, args.reps, args.seed,
                mc_n=settings.mc_n, workers=settings.threads,
            )
        case "moments":
            report = conditional_log_moments(
                density, args.x, args.n, args.reps, args.seed, workers=settings.threads
            )

    _emit(report, args.out)
    return ExitCode.CHECK_FAILED if report.is_failure() else ExitCode.OK


def cmd_converge(args: argparse.Namespace, settings: Settings) -> ExitCode:
    """Run a convergence study and write its JSON report and per-rep CSV."""
    density = load_density_spec(args.density)
    report = convergence_study(
        density,
        n_grid=args.n_grid,
        reps=args.reps,
        master_seed=args.seed,
        backend=NnMethod(args.backend),
        workers=settings.threads,
    )
    _emit(report, args.out_json)
    if args.out_csv is not None:
        with open_output(args.out_csv) as stream:
            write_records_csv(report.records, stream)

    if report.failures:
        logger.error(f"{len(report.failures)} convergence cells failed")
        return ExitCode.PARTIAL_FAILURE
    return ExitCode.OK


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser for all subcommands."""
    parser = argparse.ArgumentParser(
        prog="entrokl",
        description="Nearest-neighbor entropy estimation and its conditions.",
        epilog=EXIT_CODES_HELP,
    )
    parser.add_argument("--threads", type=int, default=None, help="worker threads (ENTROKL_THREADS)")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    commands = parser.add_subparsers(dest="command", required=True)

    estimate = commands.add_parser("estimate", help="estimate entropy of a points CSV")
    estimate.add_argument("points", type=Path)
    estimate.add_argument("--backend", choices=[m.value for m in NnMethod], default="tree")
    estimate.add_argument("--jitter", type=float, default=0.0)
    estimate.add_argument("--seed", type=int, default=0)
    estimate.add_argument("--out", default=STDOUT)
    estimate.set_defaults(handler=cmd_estimate)

    sample = commands.add_parser("sample", help="sample a density document to CSV")
    sample.add_argument("density", type=Path)
    sample.add_argument("--n", type=int, default=1000)
    sample.add_argument("--seed", type=int, default=0)
    sample.add_argument("--out", default=STDOUT)
    sample.set_defaults(handler=cmd_sample)

    conditions = commands.add_parser("conditions", help="evaluate a condition functional")
    conditions.add_argument("density", type=Path, nargs="?", default=None)
    conditions.add_argument("--functional", choices=FUNCTIONALS, required=True)
    conditions.add_argument("--eps", type=float, default=0.5)
    conditions.add_argument("--r", type=float, default=1.0)
    conditions.add_argument("--p", type=float, default=2.0)
    conditions.add_argument("--n-outer", type=int, default=None)
    conditions.add_argument("--n-inner", type=int, default=2000)
    conditions.add_argument("--grid", type=int, default=None)
    conditions.add_argument("--mc-n", type=int, default=None)
    conditions.add_argument("--probes", type=int, default=100)
    conditions.add_argument("--rate", type=float, default=1.0)
    conditions.add_argument("--quad-tol", type=float, default=1e-6)
    conditions.add_argument("--seed", type=int, default=0)
    conditions.add_argument("--out", default=STDOUT)
    conditions.set_defaults(handler=cmd_conditions)

    diagnose = commands.add_parser("diagnose", help="check the conditional distance law")
    diagnose.add_argument("density", type=Path)
    diagnose.add_argument("--x", type=_float_list, required=True, help="e.g. --x=0.5,-1")
    diagnose.add_argument("--n", type=int, default=2048)
    diagnose.add_argument("--reps", type=int, default=4096)
    diagnose.add_argument("--seed", type=int, default=0)
    diagnose.add_argument("--mode", choices=["law", "agreement", "moments"], default="law")
    diagnose.add_argument("--out", default=STDOUT)
    diagnose.set_defaults(handler=cmd_diagnose)

    converge = commands.add_parser("converge", help="run a bias/variance/MSE study")
    converge.add_argument("density", type=Path)
    converge.add_argument("--n-grid", type=_int_list, default=list(DEFAULT_N_GRID))
    converge.add_argument("--reps", type=int, default=100)
    converge.add_argument("--seed", type=int, default=0)
    converge.add_argument("--backend", choices=[m.value for m in NnMethod], default="tree")
    converge.add_argument("--out-json", default=STDOUT)
    converge.add_argument("--out-csv", default=None)
    converge.set_defaults(handler=cmd_converge)

    return parser


def run(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, configure logging and dispatch to a subcommand.

    Returns:
        Process exit code
    """
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        settings = get_settings()
    except ValidationError as e:
        parser.error(f"invalid ENTROKL_* environment: {e}")
    updates = {}
    if args.threads is not None:
        updates["threads"] = args.threads
    if args.log_level is not None:
        updates["log_level"] = args.log_level
    settings = settings.model_copy(update=updates)
    if settings.threads < 1:
        parser.error("--threads must be at least 1")
    if getattr(args, "grid", 0) is None:
        args.grid = settings.grid
    if getattr(args, "mc_n", 0) is None:
        args.mc_n = settings.mc_n

    setup_logging(settings.log_level, settings.log_format)
    logfire.configure(
        send_to_logfire="if-token-present" if settings.send_to_logfire else False,
        console=False,
    )

    handler: Callable[[argparse.Namespace, Settings], ExitCode] = args.handler
    logger.info(f"Running {args.command} with {settings.threads} thread(s)")
    try:
        return int(handler(args, settings))
    except DuplicatePointsError as e:
        logger.error(str(e))
        return int(ExitCode.DUPLICATE_POINTS)
    except (EntroklError, ValueError, OSError) as e:
        logger.error(str(e))
        return int(ExitCode.INPUT_ERROR)


def main() -> None:
    """Entry point for the application."""
    sys.exit(run())
