import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pyparsing import ParseException

from . import config
from .catalog import CATALOG_IDS
from .checks import exit_code, run_checks
from .membership import BoundTooLargeForMemory, Witness, growth_table, membership
from .ncpoly import NCPolynomial, NegativeExponentOnNonInvertible, UnknownGenerator
from .parser import ExpressionSyntaxError, format_polynomial, format_value, parse, resolve_algebra
from .reports import summary_text, write_json
from .resources import get_system_info
from .tower import ForeignDenominator, TOWER_IDS
from .util import string_time

# Exit codes
OK, CHECK_FAILED, USAGE_ERROR = 0, 1, 2


def setup_logging(log_dir: Path, level: str = "INFO"):
    """Sends the root logger to a fresh timestamped file in log_dir."""
    log_dir.mkdir(parents=True, exist_ok=True)
    logging.basicConfig(
        format="[%(asctime)s - %(levelname)s - %(name)s] %(message)s",
        level=getattr(logging, level),
        datefmt="%Y-%m-%d %H:%M:%S",
        filename=log_dir / (string_time() + ".log"),
    )
    logging.info(f"ncverify {config.VERSION} starting up\n{get_system_info()}")


def _add_run_options(parser: argparse.ArgumentParser):
    parser.add_argument("--json", type=Path, default=None, help="also write the reports to this JSON file")
    parser.add_argument("--jobs", type=int, default=1, help="how many checks may run at once")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncverify", description="Exact symbolic checks for the Drinfeld double of the Jordan plane.")
    parser.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    parser.add_argument("--log-dir", type=Path, default=config.LOGGING_DIR)
    parser.add_argument("--step-budget", type=int, default=None,
                        help="rewrite step budget for one normal form (default from NCVERIFY_STEP_BUDGET)")
    commands = parser.add_subparsers(dest="command", required=True)

    run_all = commands.add_parser("all", help="run every check")
    _add_run_options(run_all)

    check = commands.add_parser("check", help="run the checks matching a glob (or id prefix)")
    check.add_argument("pattern")
    _add_run_options(check)

    nf = commands.add_parser("nf", help="print the normal form of an expression")
    nf.add_argument("--algebra", default="D", choices=CATALOG_IDS + TOWER_IDS)
    nf.add_argument("expression")

    member = commands.add_parser("member", help="look for a right-cofactor membership witness")
    member.add_argument("--algebra", default="D", choices=CATALOG_IDS)
    member.add_argument("--ideal", required=True, help="comma-separated generators, e.g. q,s")
    member.add_argument("--target", required=True)
    member.add_argument("--bound", type=int, default=2, help="cofactor degree bound")

    growth = commands.add_parser("growth", help="count PBW monomials by degree")
    growth.add_argument("--max", type=int, default=12, dest="max_n")
    return parser


def _run(args) -> int:
    if args.jobs < 1:
        print("--jobs must be at least 1!", file=sys.stderr)
        return USAGE_ERROR
    pattern = "all" if args.command == "all" else args.pattern
    try:
        reports = run_checks(pattern, jobs=args.jobs)
    except ValueError as error:
        print(error, file=sys.stderr)
        return USAGE_ERROR

    print(summary_text(reports))
    if args.json is not None:
        write_json(reports, args.json)
        print(f"\nwrote {args.json}")
    return exit_code(reports)


def _nf(args) -> int:
    value = parse(args.expression, args.algebra)
    algebra = resolve_algebra(args.algebra)
    if isinstance(value, NCPolynomial):
        print(format_polynomial(value, algebra.presentation))
    else:
        print(format_value(value, algebra))
    return OK


def _member(args) -> int:
    entry = resolve_algebra(args.algebra)
    generators = [parse(text.strip(), entry) for text in args.ideal.split(",") if text.strip()]
    target = parse(args.target, entry)
    try:
        result = membership(target, generators, args.bound, entry.presentation)
    except BoundTooLargeForMemory as error:
        print(error, file=sys.stderr)
        return USAGE_ERROR
    print(format_value(result, entry))
    return OK if isinstance(result, Witness) else CHECK_FAILED


def _growth(args) -> int:
    if args.max_n < 0:
        print("--max must be at least 0!", file=sys.stderr)
        return USAGE_ERROR
    print(growth_table(args.max_n).to_string(index=False))
    return OK


COMMANDS = {"all": _run, "check": _run, "nf": _nf, "member": _member, "growth": _growth}


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point for the ncverify command line. Returns the exit code."""
    args = make_parser().parse_args(argv)
    setup_logging(args.log_dir, args.log_level)
    if args.step_budget is not None:
        if args.step_budget < 1:
            print("--step-budget must be at least 1!", file=sys.stderr)
            return USAGE_ERROR
        config.STEP_BUDGET = args.step_budget

    try:
        return COMMANDS[args.command](args)

    # Bad expressions are usage errors, not check failures
    except (ExpressionSyntaxError, ParseException, UnknownGenerator, NegativeExponentOnNonInvertible,
            ForeignDenominator) as error:
        logging.exception(f"could not read an expression for {args.command}")
        print(f"error: {error}", file=sys.stderr)
        return USAGE_ERROR
