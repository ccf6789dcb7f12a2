"""
Command line front end.

    oblique [--tol-rank X] [--tol-eq X] [--tol-norm X] [--verbose] <command> ...

The JSON report is the only thing written to standard output. Exit codes:
0 when the principal verdict holds, 2 when the analysis ran but the verdict
is false, 1 on errors and 64 on usage errors.
"""

import argparse
import logging
import sys
from pathlib import Path

from .models import AnalysisCommand, InputDigest, ReportDocument, ToleranceProfile, Verdict
from .services.analysis import run_analysis
from .services.config import get_settings
from .services.errors import ObliqueError, UsageError
from .services.matrix_io import parse_matrix
from .services.numcore import field_of
from .services.suite import run_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FALSE = 2
EXIT_USAGE = 64

OPERANDS = {
    AnalysisCommand.COMPAT: ("A", "S", "Hermitian A and a spanning set of S"),
    AnalysisCommand.PAS: ("A", "S", "P_(A,S) and its norm"),
    AnalysisCommand.SHORTED: ("A", "S", "shorted operator of PSD A by three routes"),
    AnalysisCommand.TWOPROJ: ("Q", "P", "P_(Q,P) for orthogonal projections Q, P"),
    AnalysisCommand.ANGLE: ("S", "T", "cosine of the Friedrichs angle"),
}


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting."""

    def error(self, message: str):
        raise UsageError(message)


def _positive_float(raw: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {raw!r}")
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {raw!r}")
    return value


def _count(minimum: int):
    def parse(raw: str) -> int:
        try:
            value = int(raw)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {raw!r}")
        if value < minimum:
            raise argparse.ArgumentTypeError(f"must be at least {minimum}: {raw!r}")
        return value

    return parse


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol-rank", type=_positive_float, default=argparse.SUPPRESS,
                        help="relative singular-value cutoff")
    common.add_argument("--tol-eq", type=_positive_float, default=argparse.SUPPRESS,
                        help="relative matrix-equality tolerance")
    common.add_argument("--tol-norm", type=_positive_float, default=argparse.SUPPRESS,
                        help="tolerance for scalar comparisons")
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS,
                        help="debug logging and a verdict table on stderr")

    parser = _Parser(
        prog="oblique",
        description="Analyze A-selfadjoint projections and shorted operators.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for command, (first, second, summary) in OPERANDS.items():
        cmd = sub.add_parser(command.value, help=summary, parents=[common])
        cmd.add_argument("first", metavar=first, type=Path, help=f"matrix file for {first}")
        cmd.add_argument("second", metavar=second, type=Path, help=f"matrix file for {second}")

    suite = sub.add_parser("suite", help="seeded property battery", parents=[common])
    suite.add_argument("--seed", type=_count(0), default=None,
                       help="base seed (default: OBLIQUE_SEED or 0)")
    suite.add_argument("--cases", type=_count(1), default=100, help="cases per family")
    suite.add_argument("--dim", type=_count(2), default=8, help="largest ambient dimension")
    suite.add_argument("--workers", type=_count(1), default=1, help="worker threads")
    return parser


def _tolerance(args: argparse.Namespace) -> ToleranceProfile:
    base = get_settings().tolerance
    return ToleranceProfile(
        tol_rank=getattr(args, "tol_rank", base.tol_rank),
        tol_eq=getattr(args, "tol_eq", base.tol_eq),
        tol_norm=getattr(args, "tol_norm", base.tol_norm),
    )


def _execute(args: argparse.Namespace) -> ReportDocument:
    tol = _tolerance(args)
    if args.command == "suite":
        seed = args.seed if args.seed is not None else get_settings().seed
        payload = run_suite(seed, args.cases, args.dim, tol, workers=args.workers)
        return ReportDocument(
            command="suite",
            inputs=[],
            tolerance=tol,
            ok=payload.total_failures == 0,
            result=payload,
            verdicts=[Verdict(name="no_failures", value=payload.total_failures == 0)],
        )

    first = parse_matrix(args.first)
    second = parse_matrix(args.second)
    inputs = [
        InputDigest(name=args.first.name, sha256=first.sha256),
        InputDigest(name=args.second.name, sha256=second.sha256),
    ]
    field = field_of(first.matrix, second.matrix)
    return run_analysis(
        AnalysisCommand(args.command), first.matrix, second.matrix, tol, inputs, field
    )


def _print_verdicts(report: ReportDocument) -> None:
    width = max((len(v.name) for v in report.verdicts), default=0)
    print(f"{report.command}: {'ok' if report.ok else 'FALSE'}", file=sys.stderr)
    for verdict in report.verdicts:
        print(f"  {verdict.name:<{width}}  {verdict.value}", file=sys.stderr)


def run_command(argv: list[str] | None = None) -> int:
    """Parse arguments, run one command and return its exit code."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    verbose = getattr(args, "verbose", False)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        report = _execute(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ObliqueError, OSError, ValueError) as exc:
        logger.debug("command failed", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    print(report.model_dump_json(indent=2))
    if verbose:
        _print_verdicts(report)
    return EXIT_OK if report.ok else EXIT_FALSE


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
