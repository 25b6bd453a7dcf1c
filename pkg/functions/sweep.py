"""
functions/sweep.py

Command: run a figure preset (or a config file) and write the table.

Flags override the config file's out/svg/xlsx paths. Without --out the
CSV goes to stdout.

Usage:
    python cli_app.py sweep --preset fig2 --out results/fig2.csv
    python cli_app.py sweep --preset fig4a --out results/fig4a.csv --svg results/fig4a.svg
    python cli_app.py sweep --config sweeps/custom.conf --xlsx results/custom.xlsx

Environment:
    WGS_WORKERS   worker-pool size (default: os.cpu_count(); 1 runs inline)
"""
import argparse
import csv
import logging
import sys
from dataclasses import replace
from pathlib import Path

from shared.harness.config import PRESETS, ConfigError, load_config, preset_config
from shared.harness.csv_writer import emit_csv, format_value
from shared.harness.presets import run_preset
from shared.harness.svg_writer import emit_svg_heatmap
from shared.harness.xlsx_writer import emit_xlsx

logger = logging.getLogger(__name__)


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser("sweep", help="run a figure preset and write CSV/SVG/XLSX")
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--preset", choices=[p for p in PRESETS if p != "custom"])
    source.add_argument("--config", help="key = value sweep config file")
    parser.add_argument("--out", help="CSV output path (default: stdout)")
    parser.add_argument("--svg", help="SVG heatmap output path (2-axis presets only)")
    parser.add_argument("--xlsx", help="formatted workbook output path")
    parser.add_argument("--optimize", action="store_true", help="fig4/fig5: optimize the basis at every point")
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    config = load_config(args.config) if args.config else preset_config(args.preset)
    overrides = {k: Path(v) for k, v in (("out", args.out), ("svg", args.svg), ("xlsx", args.xlsx)) if v}
    if args.optimize:
        overrides["optimize"] = True
    if overrides:
        config = replace(config, **overrides)
    if config.svg and len(config.axes) != 2:
        raise ConfigError(f"--svg needs a 2-axis sweep, {config.preset} has {len(config.axes)} axis")

    table = run_preset(config)

    if config.out:
        emit_csv(table, config.out)
        print(f"✅  {table.name}: {len(table)} rows → {config.out}", file=sys.stderr)
    else:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(table.columns)
        writer.writerows([format_value(v) for v in row] for row in table.rows)
    if config.svg:
        emit_svg_heatmap(table, table.value_column, config.svg)
        print(f"✅  heatmap ({table.value_column}) → {config.svg}", file=sys.stderr)
    if config.xlsx:
        emit_xlsx(table, config.xlsx)
        print(f"✅  workbook → {config.xlsx}", file=sys.stderr)
    return 0
