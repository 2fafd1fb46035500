"""
Cascades, cascade transforms and reverse cascades (ladders).

An odd number of standard form 2^p·n + 2^(p-1) - 1 is forced through
p - 1 odd cycles (3c+1 then halve), each lowering p by one and mapping
the index n to 3n + 1, and then one final halving.  The whole run,
2p - 1 steps, is a *cascade*; its result has the closed form

    3^(p-1)·n + (3^(p-1) - 1) / 2

Walking the same rule backwards from 2v while the index is 3t + 1
climbs a *ladder* to the maximum cascade start (MCS) of v.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Union

from .config import PMCS_MAX_ITER
from .core_sequence import (
    CollatzDomainError,
    NotFoundWithinLimit,
    collatz_step,
    require_natural,
)
from .forms import (
    FormDescriptor,
    SymbolicForm,
    decompose,
    expand_dotted,
    reconstruct,
    standard_base,
    two_adic_valuation,
)

logger = logging.getLogger(__name__)


class StepKind(str, Enum):
    ODD = "odd"
    EVEN = "even"


@dataclass(frozen=True)
class CascadeStep:
    """One Collatz step of a cascade: the rule applied and the value it produced."""

    value: int
    kind: StepKind


@dataclass(frozen=True)
class CascadeTrace:
    start: int
    steps: tuple[CascadeStep, ...]
    result: int
    peak: int

    @property
    def values(self) -> list[int]:
        return [self.start] + [s.value for s in self.steps]


@dataclass(frozen=True)
class LadderTrace:
    target: int
    rungs: tuple[FormDescriptor, ...]
    mcs: int

    @property
    def mcs_form(self) -> FormDescriptor:
        return self.rungs[-1]


@dataclass(frozen=True)
class PmcsResult:
    value: int
    chain: tuple[int, ...]


# ── forward cascades ─────────────────────────────────────────────────


def odd_cycle(c: int) -> int:
    """(3c + 1) / 2, cross-checked against the form rule (p, n) → (p-1, 3n+1)."""
    require_natural("odd_cycle", c)
    if not c & 1:
        raise CollatzDomainError("odd_cycle", c, "odd cycles start from odd numbers")
    d = decompose(c)
    direct = (3 * c + 1) >> 1
    via_form = reconstruct(FormDescriptor(p=d.p - 1, n=3 * d.n + 1))
    if direct != via_form:
        raise ArithmeticError(f"odd_cycle({c}): {direct} != {via_form}")
    return direct


def run_cascade(c: int) -> CascadeTrace:
    """
    Run the cascade that starts at ``c``.

    Even numbers run the single-halving 2-cascade.
    """
    require_natural("run_cascade", c)
    steps: list[CascadeStep] = []
    v = c
    if c & 1:
        for _ in range(decompose(c).p - 1):
            v = collatz_step(v)
            steps.append(CascadeStep(v, StepKind.ODD))
            v >>= 1
            steps.append(CascadeStep(v, StepKind.EVEN))
    v >>= 1
    steps.append(CascadeStep(v, StepKind.EVEN))
    peak = max([c] + [s.value for s in steps])
    return CascadeTrace(start=c, steps=tuple(steps), result=v, peak=peak)


def cascade_transform(p: int, n: int) -> int:
    """Closed-form cascade result of the standard form (p, n)."""
    if p < 1 or n < 0:
        raise CollatzDomainError("cascade_transform", (p, n), "need p >= 1 and n >= 0")
    t = 3 ** (p - 1)
    return t * n + (t - 1) // 2


def transform_base_pattern(p: int, count: int, start: int = 0) -> list[int]:
    """Standard bases of the cascade results of (p, start), (p, start+1), ..."""
    return [standard_base(cascade_transform(p, n)) for n in range(start, start + count)]


# ── composite-form classification ────────────────────────────────────


@dataclass(frozen=True)
class Fixed:
    """Every member of the form has this standard base."""

    base: int

    def __str__(self) -> str:
        return str(self.base)


@dataclass(frozen=True)
class Mix:
    """Members' standard bases vary with n; ``min_base`` is the smallest one."""

    min_base: int

    def __str__(self) -> str:
        return "Mix"


FormClass = Union[Fixed, Mix]


def classify_form(s: SymbolicForm) -> FormClass:
    vk = two_adic_valuation(s.k)
    if s.f % 2 == 0:
        return Fixed(2) if vk > 0 else Mix(2)
    vf = two_adic_valuation(s.f + 1)
    if vf < vk:
        return Fixed(1 << (vf + 1))
    return Mix(1 << (vk + 1))


def symbolic_cascade_transform(s: SymbolicForm) -> SymbolicForm:
    """
    Cascade result of every member of ``s`` as a single form.

    ``s`` must have a fixed standard base 2^p (p >= 2) that divides its
    coefficient, so every member runs the same 2^p-cascade.
    """
    cls = classify_form(s)
    if not isinstance(cls, Fixed) or cls.base < 4:
        raise CollatzDomainError("symbolic_cascade_transform", s, f"no common odd cascade ({cls})")
    base = cls.base
    if s.k % base:
        raise CollatzDomainError("symbolic_cascade_transform", s, f"{base} does not divide {s.k}")
    p = base.bit_length() - 1
    t = 3 ** (p - 1)
    m0 = (s.f - (base // 2 - 1)) // base
    return SymbolicForm(k=t * (s.k // base), f=t * m0 + (t - 1) // 2)


@dataclass(frozen=True)
class LevelRow:
    """One row of a cascade-result level table."""

    components: tuple[int, ...]
    entries: tuple[FormClass, ...]
    mix_min_base: int | None = None
    mix_column: int | None = None

    @property
    def label(self) -> str:
        return ".".join(str(b) for b in self.components)


DEFAULT_LEVEL_COLUMNS = (2, 4, 8, 16, 32, 64, 128)


def cascade_result_row(
    components: tuple[int, ...], columns: tuple[int, ...] = DEFAULT_LEVEL_COLUMNS
) -> LevelRow:
    entries = tuple(
        classify_form(symbolic_cascade_transform(expand_dotted([*components, col])))
        for col in columns
    )
    for col, entry in zip(columns, entries):
        if isinstance(entry, Mix):
            return LevelRow(components, entries, entry.min_base, col)
    return LevelRow(components, entries)


def cascade_result_levels(
    levels: int = 3,
    rows: int = 20,
    columns: tuple[int, ...] = DEFAULT_LEVEL_COLUMNS,
) -> list[list[LevelRow]]:
    """
    Standard forms of cascade results, level by level.

    Level 1 rows are the bases 4, 8, ..., 2^(rows+1).  Each later level
    extends a row by the column at which it first became Mix; rows that
    never mix have no successor.
    """
    current = [(1 << p,) for p in range(2, rows + 2)]
    out: list[list[LevelRow]] = []
    for level in range(levels):
        table = [cascade_result_row(components, columns) for components in current]
        out.append(table)
        current = [r.components + (r.mix_column,) for r in table if r.mix_column is not None]
        logger.debug("level %d: %d rows, %d carried forward", level + 1, len(table), len(current))
    return out


# ── reverse cascades ─────────────────────────────────────────────────


def mcs(v: int) -> LadderTrace:
    """Climb the ladder from 2v while the index is 3t + 1."""
    require_natural("mcs", v)
    rung = FormDescriptor(p=1, n=v)
    rungs = [rung]
    while rung.n % 3 == 1:
        rung = FormDescriptor(p=rung.p + 1, n=(rung.n - 1) // 3)
        rungs.append(rung)
    return LadderTrace(target=v, rungs=tuple(rungs), mcs=rung.value)


def pmcs(v: int, max_iter: int = PMCS_MAX_ITER) -> PmcsResult | NotFoundWithinLimit:
    """Iterate MCS from ``v`` until an odd multiple of 3 is reached."""
    require_natural("pmcs", v)
    if v % 3 == 0:
        raise CollatzDomainError("pmcs", v, "multiples of 3 cannot result from an odd cascade")
    if v == 1:
        raise CollatzDomainError("pmcs", v, "1 is its own maximum cascade start (trivial cycle)")
    chain = [v]
    cur = v
    for _ in range(max_iter):
        cur = mcs(cur).mcs
        chain.append(cur)
        if cur & 1 and cur % 3 == 0:
            return PmcsResult(value=cur, chain=tuple(chain))
    logger.debug("pmcs(%d) not found within %d iterations", v, max_iter)
    return NotFoundWithinLimit(start=v, limit=max_iter, last_value=cur)


# ── seeds ────────────────────────────────────────────────────────────


def seeds(count: int) -> list[int]:
    """The first ``count`` seeds: K1 = 1, K(i+1) = 4·K(i) + 1."""
    require_natural("seeds", count)
    out = [1]
    while len(out) < count:
        out.append(4 * out[-1] + 1)
    return out


def is_seed(c: int) -> bool:
    if c < 1 or not c & 1:
        return False
    t = 3 * c + 1
    return t & (t - 1) == 0
