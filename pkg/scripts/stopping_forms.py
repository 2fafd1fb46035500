"""
Stopping times of composite forms and principal-form scanning.

A composite form 2^p·n + f can be stepped symbolically: while the
coefficient is even the parity of every member equals the parity of the
offset, so the odd rule gives 3k·n + 3f + 1 and the even rule
(k/2)·n + f/2.  Once the coefficient turns odd the parity depends on n
and the trace is indeterminate.

The form stops (every member reaches a smaller value after the same S
steps) when it is still determinate at the offset's stopping time, which
needs p >= E, the number of halving steps of the offset up to S.  The
smallest such base, 2^E, is fixed by S alone:

    3^S < 6^E <= 2·3^S

An offset c is *principal* when c < 2^E(c): the form 2^E·n + c covers no
number smaller than c.  Counting the numbers that require a new
principal form, window by window, gives the scan statistics.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator

import numpy as np

from .config import SCAN_BLOCK, SCAN_STEP_LIMIT, SCAN_WINDOW, SYMBOLIC_STEP_LIMIT
from .core_sequence import (
    CollatzDomainError,
    NotFoundWithinLimit,
    require_natural,
    require_stop,
    stopping_time,
)
from .forms import SymbolicForm, is_power_of_two

logger = logging.getLogger(__name__)

_LOG6_3 = math.log(3) / math.log(6)
_LOG6_2 = math.log(2) / math.log(6)


# ── symbolic stepping ────────────────────────────────────────────────


class Parity(str, Enum):
    ODD = "odd"
    EVEN = "even"
    INDETERMINATE = "indeterminate"


def parity_of(s: SymbolicForm) -> Parity:
    if s.k & 1:
        return Parity.INDETERMINATE
    return Parity.ODD if s.f & 1 else Parity.EVEN


@dataclass(frozen=True)
class SymbolicTraceStep:
    form: SymbolicForm
    parity: Parity


@dataclass(frozen=True)
class Indeterminate:
    """No common next step: the members of ``form`` differ in parity."""

    form: SymbolicForm


@dataclass(frozen=True)
class Stopped:
    stopping_time: int
    final: SymbolicForm


@dataclass(frozen=True)
class IndeterminateAt:
    step: int
    form: SymbolicForm


def symbolic_step(s: SymbolicForm) -> SymbolicTraceStep | Indeterminate:
    if s.k & 1:
        return Indeterminate(s)
    if s.f & 1:
        nxt = SymbolicForm(k=3 * s.k, f=3 * s.f + 1)
    else:
        nxt = SymbolicForm(k=s.k // 2, f=s.f // 2)
    return SymbolicTraceStep(form=nxt, parity=parity_of(nxt))


def _below(current: SymbolicForm, start: SymbolicForm) -> bool:
    # k'n + f' < kn + f for every n >= 1; equal offsets only occur for 2n and 4n+1
    if current.f < start.f:
        return current.k <= start.k
    return current.f == start.f and current.k < start.k


def _require_composite(operation: str, s: SymbolicForm) -> None:
    if not is_power_of_two(s.k):
        raise CollatzDomainError(operation, s, "coefficient must be a power of 2")


def symbolic_trace(
    s: SymbolicForm, limit: int = SYMBOLIC_STEP_LIMIT
) -> list[SymbolicTraceStep]:
    """
    Rows of a composite-form trace: the starting form, then one row per
    step up to the first form below the start or the first indeterminate
    form, whichever comes first.
    """
    _require_composite("symbolic_trace", s)
    rows = [SymbolicTraceStep(form=s, parity=parity_of(s))]
    cur = s
    for _ in range(limit):
        nxt = symbolic_step(cur)
        if isinstance(nxt, Indeterminate):
            break
        rows.append(nxt)
        cur = nxt.form
        if _below(cur, s):
            break
    return rows


def symbolic_stopping_time(
    s: SymbolicForm, limit: int = SYMBOLIC_STEP_LIMIT
) -> Stopped | IndeterminateAt | NotFoundWithinLimit:
    _require_composite("symbolic_stopping_time", s)
    cur = s
    for step in range(limit):
        nxt = symbolic_step(cur)
        if isinstance(nxt, Indeterminate):
            return IndeterminateAt(step=step, form=cur)
        cur = nxt.form
        if _below(cur, s):
            return Stopped(stopping_time=step + 1, final=cur)
    logger.debug("symbolic_stopping_time(%s) undecided after %d steps", s, limit)
    return NotFoundWithinLimit(start=s.f, limit=limit, last_value=cur.f)


# ── stopping time vs even steps ──────────────────────────────────────


def even_steps_for_stopping(S: int) -> int | None:
    """The E with 3^S < 6^E <= 2·3^S, or None when S cannot be a stopping time."""
    require_natural("even_steps_for_stopping", S)
    t = 3**S
    e = max(1, int(S * _LOG6_3))
    while 6**e <= t:
        e += 1
    while e > 1 and 6 ** (e - 1) > t:
        e -= 1
    return e if 6**e <= 2 * t else None


def float_even_steps(S: int) -> int | None:
    """Floating-point form E = [int(SA+B) - int(SA)]·int(SA+B); 0 means none."""
    upper = int(S * _LOG6_3 + _LOG6_2)
    e = (upper - int(S * _LOG6_3)) * upper
    return e or None


def admissible_stopping_times(max_S: int) -> list[int]:
    return [S for S in range(1, max_S + 1) if even_steps_for_stopping(S) is not None]


@dataclass(frozen=True)
class MinimumBase:
    base: int
    stopping_time: int
    even_steps: int

    @property
    def form(self) -> str:
        return f"{_base_label(self.even_steps)}n"


def min_base_for_offset(
    f: int, max_steps: int = SCAN_STEP_LIMIT
) -> MinimumBase | NotFoundWithinLimit:
    """Smallest base 2^E for which 2^E·n + f has the stopping time of f."""
    require_natural("min_base_for_offset", f, minimum=2)
    r = stopping_time(f, max_steps)
    if isinstance(r, NotFoundWithinLimit):
        return r
    return MinimumBase(base=1 << r.even_steps, stopping_time=r.stopping_time, even_steps=r.even_steps)


def is_principal(c: int, max_steps: int = SCAN_STEP_LIMIT) -> bool:
    """True when ``c`` is the smallest member of its class mod 2^E(c)."""
    require_natural("is_principal", c, minimum=2)
    r = require_stop(stopping_time(c, max_steps))
    return c < (1 << r.even_steps)


# ── principal forms ──────────────────────────────────────────────────


def _base_label(e: int) -> str:
    return str(1 << e) if e <= 16 else f"2^{e}"


@dataclass(frozen=True)
class PrincipalForm:
    offset: int
    even_steps: int
    stopping_time: int
    member: int = field(default=0, compare=False)

    @property
    def base(self) -> int:
        return 1 << self.even_steps

    def label(self) -> str:
        head = f"{_base_label(self.even_steps)}n"
        return head if self.offset == 0 else f"{head}+{self.offset}"


@dataclass(frozen=True)
class ScanWindowStats:
    window_start: int
    window_end: int
    principal_count: int


@dataclass
class ScanResult:
    window: int
    forms: list[PrincipalForm] = field(default_factory=list)
    windows: list[ScanWindowStats] = field(default_factory=list)
    unresolved: list[NotFoundWithinLimit] = field(default_factory=list)


@dataclass(frozen=True)
class WindowSummary:
    count: int
    mean: float
    maximum: int
    minimum: int
    pstdev: float
    stdev: float


@dataclass(frozen=True)
class BlockSummary:
    """Window statistics of the numbers ``start..end`` (block ``index``, from 1)."""

    index: int
    start: int
    end: int
    summary: WindowSummary


def principal_form_at(
    c: int, max_steps: int = SCAN_STEP_LIMIT
) -> PrincipalForm | NotFoundWithinLimit | None:
    """
    The principal form first required at ``c``, if any.

    Besides the principal offsets themselves, 2 and 5 introduce the
    degenerate forms 2n and 4n+1, whose offsets 0 and 1 have no
    stopping time of their own.
    """
    if c < 2:
        return None
    r = stopping_time(c, max_steps)
    if isinstance(r, NotFoundWithinLimit):
        return r
    base = 1 << r.even_steps
    offset = c % base
    if offset == c or (offset < 2 and c == base + offset):
        return PrincipalForm(offset, r.even_steps, r.stopping_time, member=c)
    return None


def window_index(c: int, window: int) -> int:
    return (c - 1) // window


def windows_in(lo: int, hi: int, window: int) -> Iterator[tuple[int, int]]:
    """Windows [k·W + 1, (k+1)·W] meeting [lo, hi], clipped to the range."""
    for k in range(window_index(lo, window), window_index(hi, window) + 1):
        yield max(lo, k * window + 1), min(hi, (k + 1) * window)


def scan_principal_forms(
    lo: int,
    hi: int,
    window: int = SCAN_WINDOW,
    max_steps: int = SCAN_STEP_LIMIT,
) -> ScanResult:
    require_natural("scan_principal_forms", lo)
    if hi < lo:
        raise CollatzDomainError("scan_principal_forms", (lo, hi), "empty range")
    result = ScanResult(window=window)
    for start, end in windows_in(lo, hi, window):
        count = 0
        for c in range(start, end + 1):
            outcome = principal_form_at(c, max_steps)
            if outcome is None:
                continue
            if isinstance(outcome, NotFoundWithinLimit):
                result.unresolved.append(outcome)
                continue
            result.forms.append(outcome)
            count += 1
        result.windows.append(ScanWindowStats(start, end, count))
    if result.unresolved:
        logger.warning(
            "%d numbers in [%d, %d] exceeded %d steps", len(result.unresolved), lo, hi, max_steps
        )
    return result


def merge_scan_results(parts: Iterable[ScanResult]) -> ScanResult:
    """Combine partial scans; the result does not depend on the partitioning."""
    parts = list(parts)
    if not parts:
        raise CollatzDomainError("merge_scan_results", parts, "nothing to merge")
    window = parts[0].window
    by_index: dict[int, ScanWindowStats] = {}
    merged = ScanResult(window=window)
    for part in parts:
        if part.window != window:
            raise CollatzDomainError("merge_scan_results", part.window, "mixed window sizes")
        merged.forms.extend(part.forms)
        merged.unresolved.extend(part.unresolved)
        for w in part.windows:
            k = window_index(w.window_start, window)
            prev = by_index.get(k)
            if prev is not None:
                w = ScanWindowStats(
                    min(prev.window_start, w.window_start),
                    max(prev.window_end, w.window_end),
                    prev.principal_count + w.principal_count,
                )
            by_index[k] = w
    merged.forms.sort(key=lambda pf: pf.member)
    merged.unresolved.sort(key=lambda u: u.start)
    merged.windows = [by_index[k] for k in sorted(by_index)]
    return merged


def summarize_windows(windows: list[ScanWindowStats]) -> WindowSummary:
    if not windows:
        raise CollatzDomainError("summarize_windows", windows, "no windows")
    counts = np.array([w.principal_count for w in windows], dtype=np.int64)
    return WindowSummary(
        count=len(counts),
        mean=float(counts.mean()),
        maximum=int(counts.max()),
        minimum=int(counts.min()),
        pstdev=float(counts.std(ddof=0)),
        stdev=float(counts.std(ddof=1)) if len(counts) > 1 else 0.0,
    )


def summarize_by_block(
    windows: list[ScanWindowStats], block: int = SCAN_BLOCK
) -> list[BlockSummary]:
    """
    One summary per ``block`` numbers: block i covers ((i-1)·block, i·block].
    A window belongs to the block holding its first number.
    """
    require_natural("summarize_by_block", block)
    grouped: dict[int, list[ScanWindowStats]] = {}
    for w in windows:
        grouped.setdefault((w.window_start - 1) // block + 1, []).append(w)
    return [
        BlockSummary(
            index=i,
            start=(i - 1) * block + 1,
            end=i * block,
            summary=summarize_windows(grouped[i]),
        )
        for i in sorted(grouped)
    ]
