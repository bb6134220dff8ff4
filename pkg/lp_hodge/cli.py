"""Command line interface of the lp-hodge package."""

from __future__ import annotations

import argparse
import csv
import json
import logging
from pathlib import Path
import sys
from typing import Any

from .config import config_hash, load_config
from .const import (
    CONVENTION_ANALYST,
    CONVENTION_POSITIVE,
    EXIT_INPUT_ERROR,
    EXIT_OK,
    EXIT_SOLVER_FAILED,
    EXIT_VERIFICATION_FAILED,
    REPORT_SCHEMA,
    SUITES,
)
from .discrete import SolverConfig, load_cochain, load_complex, pcoclosed_primitive, pharmonic_representative
from .exceptions import LpHodgeError, SolverError
from .pinching import PinchSpec, reduced_thresholds
from .roots import gromov_verdict
from .types import CaseRecord, Report, ReportSummary
from .utils import parse_exponent
from .verification import record, run_suites, table_rows

_LOGGER = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s (%(threadName)s) [%(name)s] %(message)s"


def build_parser() -> argparse.ArgumentParser:
    """Return argument parser with all subcommands."""

    parser = argparse.ArgumentParser(prog="lp-hodge", description="L_p-cohomology thresholds, oracles and solvers.")
    parser.add_argument("--config", type=Path, default=None, help="TOML configuration file")
    parser.add_argument("--verbose", action="store_true", help="Log debug messages to stderr")
    parser.add_argument("--seed", type=int, default=None, help="Override quadrature.seed")
    parser.add_argument("--n-mc", type=int, default=None, help="Override quadrature.n_mc")
    parser.add_argument(
        "--bochner-convention",
        choices=[CONVENTION_POSITIVE, CONVENTION_ANALYST],
        default=None,
        help="Override bochner.convention",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    # vanish symmetric | pinched
    vanish = commands.add_parser("vanish", help="Vanishing verdicts").add_subparsers(dest="target", required=True)
    symmetric = vanish.add_parser("symmetric", help="Symmetric space G/K")
    symmetric.add_argument("--group", required=True, help="Type and rank, e.g. E8")
    symmetric.add_argument("--restricted-cn", type=int, choices=[1, 2, 3, 4], default=None)
    symmetric.add_argument("--nonsplit", action="store_true", help="Use non-split inequality data")
    symmetric.add_argument("--torsion", action="store_true", help="Ask about the torsion part")
    symmetric.add_argument("--k", type=int, required=True)
    symmetric.add_argument("--p", default="2", help="Exponent as decimal or ratio, default 2")

    pinched = vanish.add_parser("pinched", help="Pinched negative curvature")
    pinched.add_argument("--n", type=int, required=True)
    pinched.add_argument("--k", type=int, required=True)
    pinched.add_argument("--delta", type=float, required=True)
    pinched.add_argument("--p", type=float, required=True)
    pinched.add_argument("--q", type=float, default=None, help="Target exponent of the injectivity check")

    # table gromov
    table = commands.add_parser("table", help="Reproduce case tables").add_subparsers(dest="table", required=True)
    gromov = table.add_parser("gromov", help="Root system cases and restricted C_n rows")
    gromov.add_argument("--format", choices=["csv", "json"], default="csv")

    # verify
    verify = commands.add_parser("verify", help="Run verification suites")
    verify.add_argument("suites", nargs="+", choices=[*SUITES, "all"])
    verify.add_argument("--json", type=Path, default=None, help="Write report to this file instead of stdout")
    verify.add_argument("--workers", type=int, default=None, help="Override verify.workers")

    # solve primitive | representative
    solve = commands.add_parser("solve", help="Discrete L_p solvers").add_subparsers(dest="problem", required=True)
    for name, description in (
        ("primitive", "p-coclosed primitive of an exact cochain"),
        ("representative", "p-harmonic representative of a closed cochain"),
    ):
        problem = solve.add_parser(name, help=description)
        problem.add_argument("--complex", type=Path, required=True, help="Complex JSON file")
        problem.add_argument("--z", type=Path, required=True, help="Cochain JSON file")
        problem.add_argument("--p", type=float, required=True)

    return parser


def configure_logging(verbose: bool) -> None:
    """Route log records to stderr, debug level when verbose."""

    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING, format=LOG_FORMAT, stream=sys.stderr)


def overrides_from_args(args: argparse.Namespace) -> dict:
    """Return config overrides given as command line flags."""

    overrides: dict[str, dict[str, Any]] = {}
    if args.seed is not None:
        overrides.setdefault("quadrature", {})["seed"] = args.seed
    if args.n_mc is not None:
        overrides.setdefault("quadrature", {})["n_mc"] = args.n_mc
    if args.bochner_convention is not None:
        overrides["bochner"] = {"convention": args.bochner_convention}
    if getattr(args, "workers", None) is not None:
        overrides["verify"] = {"workers": args.workers}

    return overrides


def summarize(records: list[CaseRecord]) -> ReportSummary:
    """Return counts of passed and failed records."""

    passed = sum(1 for item in records if item["pass"])
    return ReportSummary(total=len(records), passed=passed, failed=len(records) - passed)


def build_report(argv: list[str], config: dict, records: list[CaseRecord]) -> Report:
    """Return versioned report of a command."""

    return Report(
        schema=REPORT_SCHEMA,
        command=list(argv),
        config_hash=config_hash(config),
        records=records,
        summary=summarize(records),
    )


def write_report(report: Report, path: Path | None = None) -> None:
    """Write report as JSON to a file or stdout."""

    text = json.dumps(report, indent=2, sort_keys=False) + "\n"
    if path is None:
        sys.stdout.write(text)
        return

    path.write_text(text, encoding="utf-8")
    _LOGGER.info("Report written to '%s'", path)


def _vanish(args: argparse.Namespace) -> list[CaseRecord]:
    if args.target == "symmetric":
        inputs = {"group": args.group, "k": args.k, "p": args.p, "restricted_cn": args.restricted_cn}
        verdict = gromov_verdict(
            args.group,
            args.k,
            parse_exponent(args.p),
            restricted_cn=args.restricted_cn,
            nonsplit=args.nonsplit,
            query="torsion" if args.torsion else "reduced",
        )
        return [record(f"vanish/symmetric-{verdict.group}-k{args.k}", inputs, verdict.as_dict(), passed=True)]

    spec = PinchSpec(n=args.n, k=args.k, delta=args.delta, p=args.p, q=args.q)
    report = reduced_thresholds(spec)
    return [record(f"vanish/pinched-n{args.n}-k{args.k}", {}, report.as_dict(), passed=True)]


def _table(args: argparse.Namespace, argv: list[str], config: dict) -> None:
    rows = table_rows()
    if args.format == "csv":
        writer = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return

    records = [record(f"table/gromov-{row['case']}", {}, row, passed=True) for row in rows]
    write_report(build_report(argv, config, records))


def _solve(args: argparse.Namespace, config: dict) -> list[CaseRecord]:
    complex_ = load_complex(args.complex)
    z = load_cochain(args.z)
    solver = SolverConfig.from_config(config, args.p)
    _LOGGER.debug("Solving '%s' for degree '%d' cochain with p='%s'", args.problem, z.degree, args.p)

    if args.problem == "primitive":
        result = pcoclosed_primitive(complex_, z, solver)
    else:
        result = pharmonic_representative(complex_, z, solver)
    inputs = {"complex": str(args.complex), "z": str(args.z), "p": args.p}

    return [
        record(f"solve/{args.problem}", inputs, result.as_dict(), result.residual, solver.tol_grad, passed=True)
    ]


def run(args: argparse.Namespace, argv: list[str]) -> int:
    """Execute parsed command and return its exit code."""

    config = load_config(args.config, overrides_from_args(args))

    match args.command:
        case "vanish":
            write_report(build_report(argv, config, _vanish(args)))
        case "table":
            _table(args, argv, config)
        case "solve":
            write_report(build_report(argv, config, _solve(args, config)))
        case "verify":
            report = build_report(argv, config, run_suites(args.suites, config))
            write_report(report, args.json)
            if report["summary"]["failed"]:
                _LOGGER.error("Verification failed on '%d' cases!", report["summary"]["failed"])
                return EXIT_VERIFICATION_FAILED

    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    """Run the command line interface."""

    argv = sys.argv[1:] if argv is None else argv
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as ex:
        return EXIT_OK if ex.code in (None, 0) else EXIT_INPUT_ERROR

    configure_logging(args.verbose)
    try:
        return run(args, argv)
    except SolverError as ex:
        _LOGGER.error("Solver did not converge: %s", ex)
        return EXIT_SOLVER_FAILED
    except LpHodgeError as ex:
        _LOGGER.error("Invalid input: %s", ex)
        return EXIT_INPUT_ERROR
