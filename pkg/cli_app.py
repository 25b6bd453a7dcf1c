"""
cli_app.py

Main entry point for the command line. Registers one subcommand per
module in functions/:

    python cli_app.py run    --n 2 --phi 0.8pi
    python cli_app.py sweep  --preset fig2 --out results/fig2.csv
    python cli_app.py verify

Exit codes: 0 success, 1 usage or configuration error, 2 verification failure.
"""
import argparse
import logging
import sys
from typing import Optional, Sequence

from dotenv import load_dotenv

load_dotenv()

from functions import run_concentration, sweep, verify
from shared.harness.config import log_level

EXIT_OK = 0
EXIT_USAGE = 1

COMMANDS = (run_concentration, sweep, verify)


class UsageError(Exception):
    pass


class CliParser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; route it through exit code 1 instead."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser() -> CliParser:
    parser = CliParser(
        prog="cli_app.py",
        description="GHZ extraction from weighted graph states: single runs, figure sweeps and self-checks.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)
    for command in COMMANDS:
        command.add_parser(subparsers)
    return parser


def _configure_logging() -> None:
    level = log_level()
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format="%(asctime)s  %(levelname)-8s  %(name)s — %(message)s",
        datefmt="%H:%M:%S",
        stream=sys.stderr,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    try:
        return args.handler(args)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
