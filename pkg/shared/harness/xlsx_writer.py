"""
shared/harness/xlsx_writer.py

Writes a ResultTable as a formatted workbook (one sheet, styled header,
frozen header row, column widths fitted to content). The CSV stays the
canonical output; the workbook is a convenience copy.

Usage:
    emit_xlsx(table, Path("results/fig4a.xlsx"))
"""
import logging
from pathlib import Path

import openpyxl
from openpyxl.styles import Alignment, Border, Font, PatternFill, Side

from shared.harness.table import ResultTable

logger = logging.getLogger(__name__)

MAX_COLUMN_WIDTH = 50


def _write_sheet(ws, table: ResultTable):
    hdr_font = Font(bold=True, color="FFFFFF", size=11)
    hdr_fill = PatternFill(start_color="4472C4", end_color="4472C4", fill_type="solid")
    hdr_align = Alignment(horizontal="center", vertical="center")
    border = Border(*(Side(style="thin"),) * 4)

    for ci, name in enumerate(table.columns, 1):
        c = ws.cell(row=1, column=ci, value=name)
        c.font, c.fill, c.alignment, c.border = hdr_font, hdr_fill, hdr_align, border

    for ri, row in enumerate(table.rows, 2):
        for ci, value in enumerate(row, 1):
            c = ws.cell(row=ri, column=ci, value=float(value))
            c.number_format = "0.000000000000"
            c.border = border

    for ci, name in enumerate(table.columns, 1):
        width = max(len(name), len("0.000000000000"))
        ws.column_dimensions[openpyxl.utils.get_column_letter(ci)].width = min(width, MAX_COLUMN_WIDTH) + 3

    ws.freeze_panes = "A2"


def emit_xlsx(table: ResultTable, path: Path) -> Path:
    if not table.rows:
        raise ValueError(f"Table {table.name} is empty, nothing to write")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    wb = openpyxl.Workbook()
    ws = wb.active
    ws.title = table.name[:31]
    _write_sheet(ws, table)
    wb.save(path)
    logger.info(f"Workbook written: {path} [{len(table.rows)} rows]")
    return path
