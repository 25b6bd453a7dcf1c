"""
functions/verify.py

Command: run the closed-form oracle suite and print pass/fail per check.

Usage:
    python cli_app.py verify
    python cli_app.py verify --section protocol --section properties
"""
import argparse
import logging

from shared.harness.oracles import CHECKS, run_checks

logger = logging.getLogger(__name__)

EXIT_VERIFY_FAILED = 2


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="run the oracle suite (exit 2 on any failure)")
    parser.add_argument(
        "--section",
        action="append",
        choices=sorted({section for section, _, _ in CHECKS}),
        help="only run checks from this section (repeatable)",
    )
    parser.set_defaults(handler=handle)


def _section(title: str):
    print(f"\n{'─'*60}")
    print(f"  {title}")
    print(f"{'─'*60}")


def handle(args: argparse.Namespace) -> int:
    results = run_checks(args.section)

    current = None
    for r in results:
        if r.section != current:
            current = r.section
            _section(f"CHECKS: {current}")
        status = "✅" if r.passed else "❌"
        print(f"\n  {status}  {r.name}")
        print(f"      {r.detail}")

    failed = [r for r in results if not r.passed]
    _section("SUMMARY")
    print(f"\n  {len(results) - len(failed)}/{len(results)} checks passed")
    if failed:
        for r in failed:
            print(f"  ❌  {r.name}")
        return EXIT_VERIFY_FAILED
    return 0
