from openpyxl import load_workbook

from scripts.excel_handler import read_sheet, scan_sheet_name, write_scan, write_table
from scripts.stopping_forms import ScanWindowStats, summarize_by_block, summarize_windows
from scripts.tables import build_table


def test_write_and_read_table(tmp_path):
    path = tmp_path / "tables.xlsx"
    assert write_table(build_table(10), path) == "Table 10"
    rows = read_sheet("Table 10", path)
    assert len(rows) == 5
    assert rows[0] == {"i": 1, "Seed": 1, "3K+1": 4, "Power of 2": "2^2", "4-form": None}
    assert rows[-1]["4-form"] == "4(85)+1"


def test_header_styling_and_notes(tmp_path):
    path = tmp_path / "tables.xlsx"
    write_table(build_table(10), path)
    ws = load_workbook(path)["Table 10"]
    assert ws["A1"].font.bold
    assert ws["A1"].fill.fill_type == "solid"
    assert ws.freeze_panes == "A2"
    # one blank row, then the note
    assert ws.cell(row=7, column=1).value is None
    assert ws.cell(row=8, column=1).value == "K(i+1) = 4·K(i) + 1, K(1) = 1"


def test_rewriting_a_table_replaces_its_sheet(tmp_path):
    path = tmp_path / "tables.xlsx"
    write_table(build_table(10), path)
    write_table(build_table(17), path)
    write_table(build_table(10), path)
    wb = load_workbook(path)
    assert sorted(wb.sheetnames) == ["Table 10", "Table 17"]
    assert len(read_sheet("Table 17", path)) == 11


def test_write_scan(tmp_path):
    path = tmp_path / "scan.xlsx"
    windows = [ScanWindowStats(1, 10, 4), ScanWindowStats(11, 20, 2)]
    title = write_scan(1, 20, windows, summarize_windows(windows), path)
    assert title == "Scan 1-20"
    rows = read_sheet(title, path)
    assert rows == [
        {"window_start": 1, "window_end": 10, "principal_count": 4},
        {"window_start": 11, "window_end": 20, "principal_count": 2},
    ]
    ws = load_workbook(path)[title]
    assert ws.cell(row=5, column=1).value == "windows: 2"


def test_write_scan_with_big_bounds(tmp_path):
    path = tmp_path / "scan.xlsx"
    lo = 10**40
    windows = [ScanWindowStats(lo, lo + 9, 0)]
    title = write_scan(lo, lo + 9, windows, path=path)
    assert title.startswith("Scan 133b-133b ")
    assert len(title) <= 31
    rows = read_sheet(title, path)
    assert rows[0]["window_start"] == str(lo)
    ws = load_workbook(path)[title]
    assert ws.cell(row=4, column=1).value == f"range: {lo}..{lo + 9}"


def test_big_scans_with_equal_bit_lengths_keep_separate_sheets(tmp_path):
    path = tmp_path / "scan.xlsx"
    a, b = 10**40, 10**40 + 100
    assert a.bit_length() == b.bit_length()
    first = write_scan(a, a + 9, [ScanWindowStats(a, a + 9, 1)], path=path)
    second = write_scan(b, b + 9, [ScanWindowStats(b, b + 9, 2)], path=path)
    assert first != second
    assert scan_sheet_name(a, a + 9) == first
    assert sorted(load_workbook(path).sheetnames) == sorted([first, second])
    assert read_sheet(first, path)[0]["principal_count"] == 1
    assert read_sheet(second, path)[0]["principal_count"] == 2


def test_write_scan_block_notes(tmp_path):
    path = tmp_path / "scan.xlsx"
    windows = [ScanWindowStats(1, 10, 4), ScanWindowStats(11, 20, 2)]
    blocks = summarize_by_block(windows, block=10)
    title = write_scan(1, 20, windows, summarize_windows(windows), path, blocks=blocks)
    ws = load_workbook(path)[title]
    assert ws.cell(row=11, column=1).value == "block 1 (1..10): mean 4.0, max 4, min 4"
    assert ws.cell(row=12, column=1).value == "block 2 (11..20): mean 2.0, max 2, min 2"


def test_read_missing_file_or_sheet(tmp_path):
    path = tmp_path / "none.xlsx"
    assert read_sheet("Table 10", path) == []
    write_table(build_table(10), path)
    assert read_sheet("Table 99", path) == []
