"""
Mod-12 column analysis.

Every natural number is written in *column form* 12r + column with the
column in 1..12 (a zero remainder is reported as column 12).  A Collatz
step moves a column to a fixed set of columns:

* odd column c:   3(12r + c) + 1 = 36r + 3c + 1  -> one column
* even column c:  (12r + c) / 2  = 6r + c/2      -> c/2 or c/2 + 6,
  depending on the parity of r

The transition table below is checked against that algebra at import.
Symbolic forms k·n + f get a column form only when 12 divides k;
otherwise the set of columns their members can occupy is reported.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cascades import run_cascade
from .config import SEQUENCE_MAX_STEPS, SYMBOLIC_STEP_LIMIT
from .core_sequence import CollatzDomainError, collatz_sequence, require_natural
from .forms import SymbolicForm, decompose_symbolic, symbolic_notation
from .stopping_forms import Indeterminate, symbolic_step


COLUMNS = range(1, 13)


@dataclass(frozen=True)
class ColumnStep:
    value: int
    row: int
    column: int

    def notation(self) -> str:
        return f"12({self.row})+{self.column}"


def _wrap(x: int) -> int:
    """x mod 12 with 0 reported as 12."""
    return (x - 1) % 12 + 1


def column_of(c: int) -> int:
    require_natural("column_of", c)
    return _wrap(c)


def column_form(c: int) -> ColumnStep:
    col = column_of(c)
    return ColumnStep(value=c, row=(c - col) // 12, column=col)


# ── transition relation ──────────────────────────────────────────────

_COLUMN_TRANSITIONS: dict[int, frozenset[int]] = {
    1: frozenset({4}),
    2: frozenset({1, 7}),
    3: frozenset({10}),
    4: frozenset({2, 8}),
    5: frozenset({4}),
    6: frozenset({3, 9}),
    7: frozenset({10}),
    8: frozenset({4, 10}),
    9: frozenset({4}),
    10: frozenset({5, 11}),
    11: frozenset({10}),
    12: frozenset({6, 12}),
}


def _derive_transitions() -> dict[int, frozenset[int]]:
    derived: dict[int, frozenset[int]] = {}
    for col in COLUMNS:
        if col & 1:
            derived[col] = frozenset({_wrap(3 * col + 1)})
        else:
            derived[col] = frozenset({_wrap(col // 2), _wrap(col // 2 + 6)})
    return derived


def _self_check() -> None:
    derived = _derive_transitions()
    if derived != _COLUMN_TRANSITIONS:
        bad = sorted(c for c in COLUMNS if derived[c] != _COLUMN_TRANSITIONS[c])
        raise RuntimeError(f"column transition table disagrees with 12r+c algebra at {bad}")


_self_check()


def _require_column(col: int) -> None:
    if col not in COLUMNS:
        raise CollatzDomainError("column", col, "columns run from 1 to 12")


def column_step_targets(col: int) -> frozenset[int]:
    _require_column(col)
    return _COLUMN_TRANSITIONS[col]


def column_transition_rule(col: int) -> tuple[str, str, str]:
    """(standard or non-standard form, column form before, column form after)."""
    _require_column(col)
    if col & 1:
        form = "4n+1" if col % 4 == 1 else "4n+3"
        return form, f"12r+{col}", f"36r+{3 * col + 1}"
    return "2n", f"12r+{col}", f"6r+{col // 2}"


# ── traces ───────────────────────────────────────────────────────────


def column_trace(c: int, max_steps: int = SEQUENCE_MAX_STEPS) -> list[ColumnStep]:
    """The sequence of ``c`` (to 1 or ``max_steps``) in column form."""
    return [column_form(v) for v in collatz_sequence(c, max_steps)]


def cascade_column_trace(c: int) -> list[ColumnStep]:
    """The values of the cascade starting at ``c`` in column form."""
    return [column_form(v) for v in run_cascade(c).values]


# ── symbolic forms ───────────────────────────────────────────────────


@dataclass(frozen=True)
class SymbolicColumnStep:
    """
    One form of a symbolic trace with its standard and column forms.

    ``columns`` holds every column a member can sit in; the column form
    ``12(row_k·n + row_f) + column`` exists only when that set has one
    element.
    """

    form: SymbolicForm
    columns: frozenset[int]

    @property
    def column(self) -> int | None:
        return next(iter(self.columns)) if len(self.columns) == 1 else None

    def standard_notation(self) -> str | None:
        d = decompose_symbolic(self.form)
        return None if d is None else symbolic_notation(*d)

    def column_notation(self) -> str | None:
        col = self.column
        if col is None:
            return None
        row_k, row_f = self.form.k // 12, (self.form.f - col) // 12
        row = str(SymbolicForm(row_k, row_f)) if row_f >= 0 else f"{row_k}n{row_f}"
        return f"12({row})+{col}"


def symbolic_columns(s: SymbolicForm) -> frozenset[int]:
    """Columns of the members of ``s``; n modulo 12 decides them all."""
    return frozenset(_wrap(s.at(n)) for n in range(12))


def symbolic_column_trace(
    s: SymbolicForm, limit: int = SYMBOLIC_STEP_LIMIT
) -> list[SymbolicColumnStep]:
    """
    Step ``s`` symbolically until its members differ in parity; the last
    row is that indeterminate form.  For 2^p·n + 2^(p-1) - 1 this is the
    whole cascade, ending at its cascade result.
    """
    rows = [SymbolicColumnStep(s, symbolic_columns(s))]
    cur = s
    for _ in range(limit):
        nxt = symbolic_step(cur)
        if isinstance(nxt, Indeterminate):
            return rows
        cur = nxt.form
        rows.append(SymbolicColumnStep(cur, symbolic_columns(cur)))
    raise CollatzDomainError("symbolic_column_trace", s, f"parity still fixed after {limit} steps")
