"""
Exact Collatz iteration over Python's arbitrary-precision integers.

Three measurements are provided on top of the single step rule:

* the plain sequence (truncated at 1 or at a step budget),
* the *stopping time* S: steps until the first value below the start,
  together with E, the number of halving steps among those S,
* the *total stopping time*: steps until the value 1 is reached.

Searches that run out of budget return a :class:`NotFoundWithinLimit`
instead of raising, so range scanners can record them and move on.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .config import (
    SEQUENCE_MAX_STEPS,
    STOPPING_TIME_MAX_STEPS,
    TOTAL_STOPPING_TIME_MAX_STEPS,
)

logger = logging.getLogger(__name__)


class CollatzDomainError(ValueError):
    """Raised when an argument lies outside an operation's domain."""

    def __init__(self, operation: str, value: object, reason: str):
        self.operation = operation
        self.value = value
        self.reason = reason
        super().__init__(f"{operation}({value}): {reason}")


@dataclass(frozen=True)
class NotFoundWithinLimit:
    """A search that gave up after ``limit`` steps (or iterations)."""

    start: int
    limit: int
    last_value: int


class StepLimitExceeded(RuntimeError):
    """Raised where a :class:`NotFoundWithinLimit` cannot be returned."""

    def __init__(self, outcome: NotFoundWithinLimit):
        self.outcome = outcome
        super().__init__(
            f"no result for {outcome.start} within {outcome.limit} steps"
        )


@dataclass(frozen=True)
class StopResult:
    stopping_time: int
    even_steps: int
    final_value: int

    @property
    def odd_steps(self) -> int:
        return self.stopping_time - self.even_steps


def require_natural(operation: str, c: int, minimum: int = 1) -> None:
    if c < minimum:
        raise CollatzDomainError(operation, c, f"expected a natural number >= {minimum}")


def require_stop(result: StopResult | NotFoundWithinLimit) -> StopResult:
    """Unwrap a stopping-time result, raising on a limit outcome."""
    if isinstance(result, NotFoundWithinLimit):
        raise StepLimitExceeded(result)
    return result


# ── the step rule ────────────────────────────────────────────────────


def collatz_step(c: int) -> int:
    require_natural("collatz_step", c)
    if c & 1:
        return 3 * c + 1
    return c >> 1


def collatz_sequence(c: int, max_steps: int = SEQUENCE_MAX_STEPS) -> list[int]:
    """
    Return ``[c, step(c), step(step(c)), ...]``.

    The list ends at the first 1 or after ``max_steps`` steps, whichever
    comes first, so it holds at most ``max_steps + 1`` values.
    """
    require_natural("collatz_sequence", c)
    values = [c]
    v = c
    for _ in range(max_steps):
        if v == 1:
            break
        v = collatz_step(v)
        values.append(v)
    return values


# ── stopping times ───────────────────────────────────────────────────


def stopping_time(
    c: int, max_steps: int = STOPPING_TIME_MAX_STEPS
) -> StopResult | NotFoundWithinLimit:
    """
    Steps until the sequence of ``c`` first drops below ``c``.

    1 is rejected: its sequence 1 → 4 → 2 → 1 never goes below it.
    """
    require_natural("stopping_time", c, minimum=2)
    v = c
    evens = 0
    for step in range(1, max_steps + 1):
        if v & 1:
            v = 3 * v + 1
        else:
            v >>= 1
            evens += 1
        if v < c:
            return StopResult(stopping_time=step, even_steps=evens, final_value=v)
    logger.debug("stopping_time(%d) not found within %d steps", c, max_steps)
    return NotFoundWithinLimit(start=c, limit=max_steps, last_value=v)


def total_stopping_time(
    c: int, max_steps: int = TOTAL_STOPPING_TIME_MAX_STEPS
) -> int | NotFoundWithinLimit:
    """Steps until the sequence of ``c`` reaches 1."""
    require_natural("total_stopping_time", c)
    v = c
    steps = 0
    while v != 1:
        if steps >= max_steps:
            logger.debug("total_stopping_time(%d) not found within %d steps", c, max_steps)
            return NotFoundWithinLimit(start=c, limit=max_steps, last_value=v)
        v = 3 * v + 1 if v & 1 else v >> 1
        steps += 1
    return steps


def sample_total_stopping_times(
    lo: int,
    hi: int,
    samples: int = 200,
    max_steps: int = TOTAL_STOPPING_TIME_MAX_STEPS,
) -> dict[int, int | NotFoundWithinLimit]:
    """
    Total stopping times of ``samples`` odd numbers spread evenly over
    ``lo..hi``; the first and last odd numbers of the range are always
    included.
    """
    require_natural("sample_total_stopping_times", lo)
    require_natural("sample_total_stopping_times", samples)
    first = lo | 1
    last = hi if hi & 1 else hi - 1
    if last < first:
        raise CollatzDomainError("sample_total_stopping_times", (lo, hi), "no odd number in range")
    span = (last - first) // 2
    if samples == 1:
        picks = [first]
    else:
        picks = sorted({first + 2 * (i * span // (samples - 1)) for i in range(samples)})
    logger.debug("sampling %d odd numbers between %d and %d", len(picks), first, last)
    return {v: total_stopping_time(v, max_steps) for v in picks}
