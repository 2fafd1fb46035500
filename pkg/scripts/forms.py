"""
Number forms.

Every natural number C has exactly one *standard form*

    C = 2^p · n + 2^(p-1) - 1        (p >= 1, n >= 0)

with base 2^p, index n and offset 2^(p-1) - 1.  Even numbers are the
2-forms (p = 1); odd numbers have p >= 2.  The complementary
*non-standard form* 2^p · n + 2^p - 1 is kept for the residue algebra
that splits 2n+1 into 4n+1 / 4n+3, 4n+3 into 8n+3 / 8n+7, and so on.

A :class:`SymbolicForm` ``k·n + f`` (f < k) describes a whole residue
class at once; composite forms have a power-of-2 coefficient, mixed
forms any other coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .core_sequence import CollatzDomainError, require_natural


# ── 2-adic helpers ───────────────────────────────────────────────────


def two_adic_valuation(x: int) -> int:
    """Exponent of the largest power of 2 dividing ``x`` (x > 0)."""
    if x <= 0:
        raise CollatzDomainError("two_adic_valuation", x, "expected a positive integer")
    return (x & -x).bit_length() - 1


def is_power_of_two(x: int) -> bool:
    return x > 0 and x & (x - 1) == 0


# ── descriptors ──────────────────────────────────────────────────────


class FormKind(str, Enum):
    STANDARD = "standard"
    NONSTANDARD = "nonstandard"


@dataclass(frozen=True)
class FormDescriptor:
    p: int
    n: int
    kind: FormKind = FormKind.STANDARD

    def __post_init__(self) -> None:
        if self.p < 1 or self.n < 0:
            raise CollatzDomainError(
                "FormDescriptor", (self.p, self.n), "need p >= 1 and n >= 0"
            )

    @property
    def base(self) -> int:
        return 1 << self.p

    @property
    def offset(self) -> int:
        if self.kind is FormKind.STANDARD:
            return (1 << (self.p - 1)) - 1
        return (1 << self.p) - 1

    @property
    def value(self) -> int:
        return self.base * self.n + self.offset

    def notation(self) -> str:
        """The ``base(index)+offset`` notation, e.g. ``8(3)+3`` or ``2(41)``."""
        if self.offset == 0:
            return f"{self.base}({self.n})"
        return f"{self.base}({self.n})+{self.offset}"


@dataclass(frozen=True)
class SymbolicForm:
    """The residue class ``{k·n + f : n = 0, 1, 2, ...}``."""

    k: int
    f: int

    def __post_init__(self) -> None:
        if self.k < 1 or not 0 <= self.f < self.k:
            raise CollatzDomainError(
                "SymbolicForm", (self.k, self.f), "need k >= 1 and 0 <= f < k"
            )

    @property
    def is_composite(self) -> bool:
        return is_power_of_two(self.k)

    def at(self, n: int) -> int:
        return self.k * n + self.f

    def __str__(self) -> str:
        head = "n" if self.k == 1 else f"{self.k}n"
        return head if self.f == 0 else f"{head}+{self.f}"


# ── decomposition ────────────────────────────────────────────────────


def decompose(c: int) -> FormDescriptor:
    """Standard form of ``c``: p = v2(c+1) + 1, n = (c + 1 - 2^(p-1)) / 2^p."""
    require_natural("decompose", c)
    p = two_adic_valuation(c + 1) + 1
    n = (c + 1 - (1 << (p - 1))) >> p
    return FormDescriptor(p=p, n=n)


def decompose_symbolic(s: SymbolicForm) -> tuple[int, SymbolicForm] | None:
    """
    Standard form shared by every member of ``s``: ``(p, m)`` with
    ``k·n + f = 2^p · m(n) + 2^(p-1) - 1``, or None when the members differ.
    """
    v = two_adic_valuation(s.f + 1)
    if v >= two_adic_valuation(s.k):
        return None
    p = v + 1
    return p, SymbolicForm(k=s.k >> p, f=(s.f + 1 - (1 << v)) >> p)


def symbolic_notation(p: int, m: SymbolicForm) -> str:
    """``2^p(m)+offset`` for a symbolic index, e.g. ``32(3n+1)+15`` or ``64n+31``."""
    base, offset = 1 << p, (1 << (p - 1)) - 1
    head = f"{base}n" if m == SymbolicForm(1, 0) else f"{base}({m})"
    return head if offset == 0 else f"{head}+{offset}"


def reconstruct(d: FormDescriptor) -> int:
    return d.value


def standard_base(c: int) -> int:
    return decompose(c).base


def form_pattern(lo: int, hi: int) -> list[int]:
    """Standard bases of ``lo..hi`` inclusive."""
    require_natural("form_pattern", lo)
    return [standard_base(c) for c in range(lo, hi + 1)]


# ── dotted composite forms ───────────────────────────────────────────


def parse_dotted(text: str) -> list[int]:
    """Parse the dotted notation ``16.4.8`` into ``[16, 4, 8]``."""
    parts = text.strip().split(".")
    if not parts or any(not p.strip().isdigit() for p in parts):
        raise CollatzDomainError("parse_dotted", text, "expected components like 16.4.8")
    return [int(p) for p in parts]


def expand_dotted(components: list[int]) -> SymbolicForm:
    """
    Expand a dotted composite form by nesting standard forms right to left.

    ``[16, 4, 8]`` is 16(4(8n+3)+1)+7 = 512n+215.
    """
    if not components:
        raise CollatzDomainError("expand_dotted", components, "no components")
    for b in components:
        if b < 2 or not is_power_of_two(b):
            raise CollatzDomainError("expand_dotted", components, f"{b} is not a power of 2 >= 2")

    k, f = 1, 0  # the bare index n
    for b in reversed(components):
        k, f = b * k, b * f + (b // 2 - 1)
    return SymbolicForm(k=k, f=f)


def dotted_label(components: list[int]) -> str:
    return ".".join(str(b) for b in components)


# ── pattern matching ─────────────────────────────────────────────────


def find_pattern_shift(a: list[int], b: list[int], window: int) -> int | None:
    """Smallest s with ``a[:window] == b[s:s+window]``, or None."""
    if window > len(a) or window > len(b):
        raise CollatzDomainError("find_pattern_shift", window, "window longer than a pattern")
    needle = a[:window]
    for s in range(len(b) - window + 1):
        if b[s : s + window] == needle:
            return s
    return None
