"""
shared/harness/csv_writer.py

Writes a ResultTable as UTF-8 CSV: one header row, values printed with 12
significant digits, '\\n' line endings. The same table always produces the
same bytes.

Usage:
    emit_csv(table, Path("results/fig2.csv"))
"""
import csv
import logging
from pathlib import Path

from shared.harness.table import ResultTable

logger = logging.getLogger(__name__)


def format_value(value: float) -> str:
    text = format(float(value), ".12g")
    return "0" if text == "-0" else text


def emit_csv(table: ResultTable, path: Path) -> Path:
    if not table.rows:
        raise ValueError(f"Table {table.name} is empty, nothing to write")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(table.columns), lineterminator="\n")
        writer.writeheader()
        for row in table.as_dicts():
            writer.writerow({k: format_value(v) for k, v in row.items()})
    logger.info(f"CSV written: {path} [{len(table.rows)} rows]")
    return path
