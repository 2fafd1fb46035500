"""
Excel handler – writes reproduced tables and scan windows to .xlsx workbooks.

Each table gets its own worksheet (``Table 17``, ``Scan 1-1000000``, ...).
Row 1 is always a styled header row; notes follow the data after one
blank row.  Writing a sheet replaces any sheet of the same name and
leaves the rest of the workbook alone.
"""

from __future__ import annotations

import hashlib
import logging
from pathlib import Path
from typing import Any, Iterable

from openpyxl import Workbook, load_workbook
from openpyxl.styles import Alignment, Font, PatternFill
from openpyxl.worksheet.worksheet import Worksheet

from .config import EXCEL_FILE_PATH
from .stopping_forms import BlockSummary, ScanWindowStats, WindowSummary
from .tables import Table

logger = logging.getLogger(__name__)

# ── styling constants ────────────────────────────────────────────────
_HEADER_FONT = Font(bold=True, color="FFFFFF", size=11)
_HEADER_FILL = PatternFill(start_color="4472C4", end_color="4472C4", fill_type="solid")
_HEADER_ALIGN = Alignment(horizontal="center", vertical="center")
_NOTE_FONT = Font(italic=True)

# Excel stores numbers as doubles; anything wider is written as text
_MAX_EXACT_INT = 2**53


# ── workbook helpers ─────────────────────────────────────────────────


def _ensure_workbook(path: str | Path = EXCEL_FILE_PATH) -> Workbook:
    """Open an existing workbook or create a new one."""
    p = Path(path)
    if p.exists():
        return load_workbook(p)
    wb = Workbook()
    # Remove default sheet created by openpyxl
    if "Sheet" in wb.sheetnames:
        del wb["Sheet"]
    return wb


def _fresh_sheet(wb: Workbook, title: str, headers: list[str]) -> Worksheet:
    """Replace the worksheet *title* with an empty one carrying *headers*."""
    if title in wb.sheetnames:
        del wb[title]
    ws = wb.create_sheet(title=title)
    for col_idx, name in enumerate(headers, start=1):
        cell = ws.cell(row=1, column=col_idx, value=name)
        cell.font = _HEADER_FONT
        cell.fill = _HEADER_FILL
        cell.alignment = _HEADER_ALIGN
        ws.column_dimensions[cell.column_letter].width = 22
    ws.freeze_panes = "A2"
    return ws


def _cell_value(value: str) -> Any:
    """Integers go in as numbers when Excel can hold them exactly."""
    if not value:
        return None
    if value.isdigit() and int(value) < _MAX_EXACT_INT:
        return int(value)
    return value


def _append_notes(ws: Worksheet, notes: Iterable[str]) -> None:
    row_idx = ws.max_row + 2
    for note in notes:
        ws.cell(row=row_idx, column=1, value=note).font = _NOTE_FONT
        row_idx += 1


# ── public interface ─────────────────────────────────────────────────


def sheet_name_for_table(table: Table) -> str:
    return f"Table {table.table_id}"


def write_table(table: Table, path: str | Path = EXCEL_FILE_PATH) -> str:
    """(Over)write the worksheet for *table*; returns the sheet name."""
    wb = _ensure_workbook(path)
    title = sheet_name_for_table(table)
    ws = _fresh_sheet(wb, title, table.headers)
    for row_offset, row in enumerate(table.rows):
        for col_idx, value in enumerate(row, start=1):
            ws.cell(row=row_offset + 2, column=col_idx, value=_cell_value(value))
    _append_notes(ws, table.notes)
    wb.save(path)
    logger.info("Wrote %d rows to sheet '%s' in %s", len(table.rows), title, path)
    return title


def scan_sheet_name(lo: int, hi: int) -> str:
    """
    ``Scan lo-hi``, or for bounds too long for Excel's 31-character limit,
    the bit lengths plus a digest of the exact range.
    """
    title = f"Scan {lo}-{hi}"
    if len(title) <= 31:
        return title
    digest = hashlib.sha1(f"{lo}-{hi}".encode()).hexdigest()[:8]
    return f"Scan {lo.bit_length()}b-{hi.bit_length()}b {digest}"


def write_scan(
    lo: int,
    hi: int,
    windows: list[ScanWindowStats],
    summary: WindowSummary | None = None,
    path: str | Path = EXCEL_FILE_PATH,
    blocks: list[BlockSummary] | None = None,
) -> str:
    """(Over)write a worksheet with per-window principal-form counts."""
    wb = _ensure_workbook(path)
    title = scan_sheet_name(lo, hi)
    ws = _fresh_sheet(wb, title, ["window_start", "window_end", "principal_count"])
    for row_idx, w in enumerate(windows, start=2):
        ws.cell(row=row_idx, column=1, value=_cell_value(str(w.window_start)))
        ws.cell(row=row_idx, column=2, value=_cell_value(str(w.window_end)))
        ws.cell(row=row_idx, column=3, value=w.principal_count)
    notes: list[str] = []
    if summary is not None:
        notes += [
            f"windows: {summary.count}",
            f"mean: {summary.mean:.1f}",
            f"max: {summary.maximum}",
            f"min: {summary.minimum}",
            f"std (population): {summary.pstdev:.1f}",
            f"std (sample): {summary.stdev:.1f}",
        ]
    for b in blocks or ():
        s = b.summary
        notes.append(
            f"block {b.index} ({b.start}..{b.end}): mean {s.mean:.1f}, "
            f"max {s.maximum}, min {s.minimum}"
        )
    if title != f"Scan {lo}-{hi}":
        notes.append(f"range: {lo}..{hi}")
    if notes:
        _append_notes(ws, notes)
    wb.save(path)
    logger.info("Wrote %d windows to sheet '%s' in %s", len(windows), title, path)
    return title


def read_sheet(sheet_name: str, path: str | Path = EXCEL_FILE_PATH) -> list[dict[str, Any]]:
    """
    Read the data rows of *sheet_name* as dicts keyed by header.

    Reading stops at the first blank row, so trailing notes are skipped.
    """
    p = Path(path)
    if not p.exists():
        logger.info("Excel file does not exist yet – returning empty list")
        return []

    wb = load_workbook(p, data_only=True)
    if sheet_name not in wb.sheetnames:
        logger.info("Sheet '%s' not found – returning empty list", sheet_name)
        return []

    ws = wb[sheet_name]
    headers = [c.value for c in ws[1]]
    rows: list[dict[str, Any]] = []
    for values in ws.iter_rows(min_row=2, values_only=True):
        if all(v is None for v in values):
            break
        rows.append(dict(zip(headers, values)))
    return rows
