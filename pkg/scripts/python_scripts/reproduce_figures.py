"""
scripts/python_scripts/reproduce_figures.py

Regenerate every figure table locally, one preset at a time, into a
results directory (CSV always, SVG heatmap for 2-axis presets).

Usage:
    python scripts/python_scripts/reproduce_figures.py --step fig2
    python scripts/python_scripts/reproduce_figures.py --step fig4a --step fig4c
    python scripts/python_scripts/reproduce_figures.py --step all --quick

Options:
    --step STEP     Which preset to run, repeatable (default: all)
    --out-dir DIR   Where results go (default: results/)
    --quick         Cut every axis to 11 points (smoke run)
    --workers N     Worker-pool size (default: WGS_WORKERS or cpu count)
"""
import argparse
import logging
import sys
import time
from dataclasses import replace
from pathlib import Path

# ── make shared/ importable regardless of where you run from ──
ROOT = Path(__file__).resolve().parent.parent.parent
sys.path.insert(0, str(ROOT))

from dotenv import load_dotenv
load_dotenv(ROOT / ".env")

from shared.harness.config import PRESETS, Axis, preset_config
from shared.harness.csv_writer import emit_csv
from shared.harness.presets import run_preset
from shared.harness.svg_writer import emit_svg_heatmap

logger = logging.getLogger("reproduce_figures")

FIGURE_PRESETS = [p for p in PRESETS if p != "custom"]
QUICK_POINTS = 11


def _print_section(title: str):
    print(f"\n{'─'*60}")
    print(f"  {title}")
    print(f"{'─'*60}")


def _config_for(preset: str, quick: bool):
    config = preset_config(preset)
    if quick:
        axes = tuple(Axis(a.name, a.start, a.stop, min(a.count, QUICK_POINTS)) for a in config.axes)
        config = replace(config, axes=axes)
    return config


def run_step(preset: str, out_dir: Path, quick: bool = False, workers=None) -> bool:
    _print_section(f"STEP: {preset}")
    config = _config_for(preset, quick)
    started = time.perf_counter()
    try:
        table = run_preset(config, workers=workers)
        csv_path = emit_csv(table, out_dir / f"{preset}.csv")
        print(f"\n  ✅  {len(table)} rows → {csv_path}")
        if len(table.axes) == 2:
            svg_path = emit_svg_heatmap(table, table.value_column, out_dir / f"{preset}.svg")
            print(f"  ✅  heatmap ({table.value_column}) → {svg_path}")
    except Exception as e:
        print(f"\n  ❌  {preset} failed: {e}")
        logger.exception(f"{preset} failed")
        return False
    print(f"      {time.perf_counter() - started:.1f}s")
    return True


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Regenerate figure tables")
    parser.add_argument("--step", action="append", choices=FIGURE_PRESETS + ["all"])
    parser.add_argument("--out-dir", default=str(ROOT / "results"))
    parser.add_argument("--quick", action="store_true")
    parser.add_argument("--workers", type=int)
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.INFO,
        format="%(asctime)s  %(levelname)-8s  %(name)s — %(message)s",
        datefmt="%H:%M:%S",
    )

    steps = args.step or ["all"]
    presets = FIGURE_PRESETS if "all" in steps else steps
    out_dir = Path(args.out_dir)

    results = {p: run_step(p, out_dir, args.quick, args.workers) for p in presets}

    _print_section("SUMMARY")
    for preset, ok in results.items():
        print(f"  {'✅' if ok else '❌'}  {preset}")
    return 0 if all(results.values()) else 1


if __name__ == "__main__":
    sys.exit(main())
