"""
Reference tables, regenerated from the library on every call.

Each builder returns a :class:`Table` (headers, rows of strings, notes);
:func:`render_text` and :func:`render_csv` turn it into output.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from .cascades import (
    DEFAULT_LEVEL_COLUMNS,
    LevelRow,
    Mix,
    cascade_result_levels,
    cascade_transform,
    classify_form,
    mcs,
    pmcs,
    run_cascade,
    seeds,
)
from .columns import (
    COLUMNS,
    column_form,
    column_step_targets,
    column_transition_rule,
    symbolic_column_trace,
)
from .core_sequence import collatz_sequence, sample_total_stopping_times, total_stopping_time
from .forms import FormDescriptor, SymbolicForm, decompose
from .stopping_forms import (
    Parity,
    Stopped,
    SymbolicTraceStep,
    admissible_stopping_times,
    even_steps_for_stopping,
    scan_principal_forms,
    symbolic_stopping_time,
    symbolic_trace,
)

logger = logging.getLogger(__name__)

# known misprint of the S=21 minimum base
_PRINTED_S21_BASE = 18192

# odd numbers reported to share a single total stopping time
_LARGE_WINDOW = (10**142 - 10**6 + 1, 10**142 - 10**6 + 99_999)


class UnknownTableError(KeyError):
    def __init__(self, table_id: object):
        self.table_id = table_id
        super().__init__(table_id)

    def __str__(self) -> str:
        known = ", ".join(str(t) for t in available_tables())
        return f"unknown table {self.table_id!r} (available: {known})"


@dataclass
class Table:
    table_id: int
    title: str
    headers: list[str]
    rows: list[list[str]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)


_BUILDERS: dict[int, Callable[[], Table]] = {}


def _table(table_id: int) -> Callable[[Callable[[], Table]], Callable[[], Table]]:
    def register(fn: Callable[[], Table]) -> Callable[[], Table]:
        _BUILDERS[table_id] = fn
        return fn

    return register


def available_tables() -> list[int]:
    return sorted(_BUILDERS)


def build_table(table_id: int) -> Table:
    try:
        builder = _BUILDERS[table_id]
    except KeyError:
        raise UnknownTableError(table_id) from None
    logger.debug("building table %d", table_id)
    return builder()


# ── rendering ────────────────────────────────────────────────────────


def render_csv(table: Table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.headers)
    writer.writerows(table.rows)
    return buf.getvalue()


def render_text(table: Table) -> str:
    widths = [len(h) for h in table.headers]
    for row in table.rows:
        widths = [max(w, len(cell)) for w, cell in zip(widths, row)]

    def line(cells: list[str]) -> str:
        return "  ".join(c.rjust(w) for c, w in zip(cells, widths)).rstrip()

    out = [f"Table {table.table_id}: {table.title}", line(table.headers)]
    out.append("  ".join("-" * w for w in widths))
    out.extend(line(row) for row in table.rows)
    for note in table.notes:
        out.append(f"* {note}")
    return "\n".join(out) + "\n"


# ── helpers ──────────────────────────────────────────────────────────


def _cascade_ending(v: int, mcs_form: FormDescriptor) -> str:
    """``v`` as the mixed-form result of the cascade that ends at it."""
    if mcs_form.p == 1:
        return f"{v} = 1({v})"
    t = 3 ** (mcs_form.p - 1)
    return f"{v} = {t}({mcs_form.n})+{(t - 1) // 2}"


def _with_notation(v: int) -> str:
    return f"{v} = {decompose(v).notation()}"


def _parity_note(step: SymbolicTraceStep) -> str:
    if step.parity is Parity.INDETERMINATE:
        return "odd or even, depending on n"
    if step.parity is Parity.EVEN:
        return "even"
    cls = classify_form(step.form)
    return "odd" if isinstance(cls, Mix) else f"odd, {cls}-form"


def _trace_outcome(s: SymbolicForm) -> str:
    outcome = symbolic_stopping_time(s)
    if isinstance(outcome, Stopped):
        return f"{s}: stopping time {outcome.stopping_time}, {outcome.final} is below {s}"
    return f"{s}: indeterminate after {outcome.step} steps at {outcome.form}"


# ── builders ─────────────────────────────────────────────────────────


@_table(1)
def standard_forms_table() -> Table:
    t = Table(1, "Standard Number Forms", ["p", "Base", "Offset", "Standard Form"])
    for p in range(1, 6):
        d = FormDescriptor(p=p, n=0)
        t.rows.append([str(p), str(d.base), str(d.offset), str(SymbolicForm(d.base, d.offset))])
    return t


@_table(3)
def cascade_transforms_table() -> Table:
    t = Table(3, "Cascade Transforms", ["p", "Base", "Standard Form", "Transform"])
    for p in range(1, 8):
        d = FormDescriptor(p=p, n=0)
        f0 = cascade_transform(p, 0)
        transform = SymbolicForm(cascade_transform(p, 1) - f0, f0)
        t.rows.append([str(p), str(d.base), str(SymbolicForm(d.base, d.offset)), str(transform)])
    t.notes.append("2^p·n + 2^(p-1) - 1 transforms to 3^(p-1)·n + (3^(p-1) - 1)/2")
    return t


@_table(4)
def eight_cascade_transforms_table() -> Table:
    t = Table(
        4,
        "Forms of 8-Cascade Transforms",
        ["n", "8n+3", "9n+4", "Standard Form of Transform", "Standard Base of Transform"],
    )
    for n in range(18):
        v = run_cascade(8 * n + 3).result
        d = decompose(v)
        t.rows.append([str(n), str(8 * n + 3), str(v), d.notation(), str(d.base)])
    return t


@_table(7)
def find_mcs_example_table() -> Table:
    target = 31
    ladder = mcs(target)
    t = Table(7, "Finding Maximum Cascade Start Example", ["Step", "Form", "Number", "Index", "Next"])
    t.rows.append(["", decompose(target).notation(), str(target), "", ""])
    last = len(ladder.rungs) - 1
    for i, rung in enumerate(ladder.rungs):
        q, r = divmod(rung.n, 3)
        nxt = "up to next-higher form" if i < last else "end of reverse cascade"
        t.rows.append([str(i + 1), rung.notation(), str(rung.value), f"{rung.n}=3({q})+{r}", nxt])
    t.notes.append(f"{ladder.mcs} is the maximum cascade start of {target}")
    t.notes.extend(_with_notation(v) for v in run_cascade(ladder.mcs).values)
    return t


@_table(8)
def mcs_values_table() -> Table:
    t = Table(
        8,
        "Maximum Cascade Starts for Some Small Numbers",
        ["Cascade Ending Value", "Maximum Cascade Starting Value", "Standard Base"],
    )
    for v in range(28, 44):
        top = mcs(v).mcs_form
        t.rows.append([_cascade_ending(v, top), f"{top.value} = {top.notation()}", str(top.base)])
    return t


@_table(9)
def pmcs_values_table() -> Table:
    t = Table(
        9,
        "Primary Maximum Cascade Starts for Some Small Numbers",
        ["Cascade Ending Value", "Primary Maximum Cascade Starting Value", "Standard Base"],
    )
    for v in range(28, 44):
        ending = _cascade_ending(v, mcs(v).mcs_form)
        if v % 3 == 0:
            t.rows.append([ending, "see note", "see note"])
            continue
        r = pmcs(v)
        d = decompose(r.value)
        t.rows.append([ending, f"{r.value} = {d.notation()}", str(d.base)])
    t.notes.append("Multiples of 3 cannot result from an odd cascade.")
    return t


@_table(10)
def seeds_table() -> Table:
    t = Table(10, "Seeds (Small Values)", ["i", "Seed", "3K+1", "Power of 2", "4-form"])
    values = seeds(5)
    for i, k in enumerate(values, start=1):
        power = 3 * k + 1
        form = "" if i == 1 else f"4({values[i - 2]})+1"
        t.rows.append([str(i), str(k), str(power), f"2^{power.bit_length() - 1}", form])
    t.notes.append("K(i+1) = 4·K(i) + 1, K(1) = 1")
    return t


@_table(11)
def column_analysis_table() -> Table:
    t = Table(
        11,
        "Column Analysis of Collatz Steps",
        ["Column", "Std or Non-Std Form", "Before Step", "After Step", "Resulting Column"],
    )
    for col in COLUMNS:
        form, before, after = column_transition_rule(col)
        targets = " or ".join(str(c) for c in sorted(column_step_targets(col)))
        t.rows.append([str(col), form, before, after, targets])
    return t


def _either(columns: frozenset[int]) -> str:
    cols = [str(c) for c in sorted(columns)]
    if len(cols) <= 2:
        return " or ".join(cols)
    return f"{', '.join(cols[:-1])}, or {cols[-1]}"


@_table(12)
def cascade_column_table() -> Table:
    start = SymbolicForm(64, 31)
    t = Table(
        12,
        f"Column Analysis of a General {start.k}-Cascade",
        ["Step", "Composite Form", "Standard Form", "Column Form", "Column"],
    )
    rows = symbolic_column_trace(start)
    for step, row in enumerate(rows):
        t.rows.append(
            [
                str(step),
                str(row.form),
                row.standard_notation() or "indeterminate",
                row.column_notation() or "indeterminate",
                _either(row.columns),
            ]
        )
    t.notes.append(f"cascade result {rows[-1].form} ends in column {_either(rows[-1].columns)}")
    return t


@_table(13)
def plummet_table() -> Table:
    start = 85
    t = Table(13, "Column Analysis of a Plummet", ["Step", "Value", "Standard Form", "Column Form", "Column"])
    for step, v in enumerate(collatz_sequence(start)):
        cf = column_form(v)
        t.rows.append([str(step), str(v), decompose(v).notation(), cf.notation(), str(cf.column)])
    t.notes.append(f"total stopping time of {start}: {total_stopping_time(start)}")
    return t


@_table(14)
def standard_form_stopping_table() -> Table:
    t = Table(14, "Stopping Times of Standard Forms", ["Start", "Step", "Form", "Parity"])
    for s in (SymbolicForm(2, 0), SymbolicForm(4, 1), SymbolicForm(8, 3), SymbolicForm(32, 15)):
        for step, row in enumerate(symbolic_trace(s)):
            t.rows.append([str(s), str(step), str(row.form), _parity_note(row)])
        t.notes.append(_trace_outcome(s))
    return t


@_table(15)
def composite_sequence_table() -> Table:
    s = SymbolicForm(128, 15)
    t = Table(15, f"Collatz Sequence for Composite Form {s}", ["Step", "Form", "Parity", "Even Steps"])
    evens = 0
    for step, row in enumerate(symbolic_trace(s)):
        counter = ""
        if row.parity is Parity.EVEN:
            evens += 1
            counter = f"#{evens}"
        t.rows.append([str(step), str(row.form), _parity_note(row), counter])
    t.notes.append(_trace_outcome(s))
    return t


@_table(17)
def even_steps_table() -> Table:
    t = Table(
        17,
        "Even Steps Required to Stopping Time",
        ["Stopping Time S", "Even Steps E", "Minimum Base 2^E", "Note"],
    )
    for S in admissible_stopping_times(26):
        e = even_steps_for_stopping(S)
        assert e is not None
        note = ""
        if S == 21 and (1 << e) != _PRINTED_S21_BASE:
            note = f"printed as {_PRINTED_S21_BASE}"
            logger.warning("S=21: minimum base is %d, not %d", 1 << e, _PRINTED_S21_BASE)
        t.rows.append([str(S), str(e), str(1 << e), note])
    t.notes.append("stopping times missing from the first column occur for no number")
    return t


@_table(18)
def principal_forms_table() -> Table:
    t = Table(18, "Principal Forms", ["Principal Form", "Offset", "E", "Stopping Time"])
    forms = scan_principal_forms(1, 100, window=100).forms
    for pf in sorted(forms, key=lambda pf: pf.offset):
        t.rows.append([pf.label(), str(pf.offset), str(pf.even_steps), str(pf.stopping_time)])
    for lo, hi in ((101, 200), (201, 300)):
        extra = len(scan_principal_forms(lo, hi, window=100).forms)
        t.notes.append(f"{extra} additional principal forms between {lo} and {hi}")
    t.notes.append(_large_window_note())
    return t


@lru_cache(maxsize=1)
def _large_window_note() -> str:
    lo, hi = _LARGE_WINDOW
    times = sample_total_stopping_times(lo, hi)
    distinct = sorted({tst for tst in times.values() if isinstance(tst, int)})
    listed = ", ".join(str(tst) for tst in distinct)
    note = (
        f"{len(times)} odd numbers sampled from 10^142-10^6+1..10^142-10^6+99999: "
        f"total stopping times {listed}"
    )
    if len(distinct) != 1:
        logger.warning(
            "10^142 window: %d distinct total stopping times among %d sampled odd numbers, not 1",
            len(distinct), len(times),
        )
        note += " (not one shared value)"
    return note


@lru_cache(maxsize=1)
def _levels() -> tuple[tuple[LevelRow, ...], ...]:
    return tuple(tuple(level) for level in cascade_result_levels(levels=3))


def _level_table(level: int) -> Table:
    columns = [f".{c}" for c in DEFAULT_LEVEL_COLUMNS]
    t = Table(
        19 + level,
        f"Standard Forms of Cascade Results - Level {level}",
        [f"Level {level}", *columns, "Mix"],
    )
    for row in _levels()[level - 1]:
        mix = f"{row.mix_min_base}+" if row.mix_min_base is not None else ""
        t.rows.append([row.label, *(str(e) for e in row.entries), mix])
    if level > 1:
        t.notes.append(f"rows extend the Mix entries of level {level - 1}")
    return t


@_table(20)
def level1_table() -> Table:
    return _level_table(1)


@_table(21)
def level2_table() -> Table:
    return _level_table(2)


@_table(22)
def level3_table() -> Table:
    return _level_table(3)
