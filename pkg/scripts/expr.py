"""
Natural-number expressions for command-line arguments.

Grammar: decimal literals, parentheses, binary ``+`` and ``-`` (left
associative) and ``^`` (power, right associative, binds tighter), so
``10^142-10^6+1`` is ((10^142) - (10^6)) + 1 and ``2^3^2`` is 2^9.
Values are exact Python integers and never go negative.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass

from .config import MAX_EXPR_BITS

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r"\s*(?:(?P<num>\d+)|(?P<op>[-+^()]))")

_BINDING = {"+": 10, "-": 10, "^": 30}


class ExprError(ValueError):
    """Raised for malformed or out-of-range expressions."""

    def __init__(self, text: str, pos: int, reason: str):
        self.text = text
        self.pos = pos
        self.reason = reason
        super().__init__(f"{reason} at position {pos} in {text!r}")


@dataclass(frozen=True)
class _Token:
    kind: str  # "num", "op" or "end"
    value: str
    pos: int

    @property
    def lbp(self) -> int:
        return _BINDING.get(self.value, 0) if self.kind == "op" else 0


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        if text[pos:].isspace():
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExprError(text, bad, f"unexpected character {text[bad]!r}")
        kind = "num" if m.group("num") is not None else "op"
        tokens.append(_Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, max_bits: int):
        self.text = text
        self.max_bits = max_bits
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def token(self) -> _Token:
        return self.tokens[self.i]

    def _advance(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def parse(self) -> int:
        value = self.expression()
        if self.token.kind != "end":
            raise ExprError(self.text, self.token.pos, f"unexpected {self.token.value!r}")
        return value

    def expression(self, rbp: int = 0) -> int:
        left = self._nud(self._advance())
        while rbp < self.token.lbp:
            left = self._led(self._advance(), left)
        return left

    def _nud(self, t: _Token) -> int:
        if t.kind == "num":
            try:
                return int(t.value)
            except ValueError:
                raise ExprError(
                    self.text, t.pos, f"literal of {len(t.value)} digits exceeds the conversion limit"
                ) from None
        if t.value == "(":
            value = self.expression()
            if self.token.value != ")":
                raise ExprError(self.text, self.token.pos, "missing ')'")
            self._advance()
            return value
        what = "end of input" if t.kind == "end" else repr(t.value)
        raise ExprError(self.text, t.pos, f"expected a number, got {what}")

    def _led(self, t: _Token, left: int) -> int:
        if t.value == "^":
            # right associative: parse the exponent one level lower
            right = self.expression(t.lbp - 1)
            return self._power(t, left, right)
        right = self.expression(t.lbp)
        if t.value == "+":
            return left + right
        if right > left:
            raise ExprError(self.text, t.pos, "subtraction below zero")
        return left - right

    def _power(self, t: _Token, base: int, exp: int) -> int:
        if base > 1 and exp * (base.bit_length() - 1) > self.max_bits:
            raise ExprError(
                self.text, t.pos, f"result of {base}^{exp} exceeds {self.max_bits} bits"
            )
        return base**exp


def evaluate(text: str, max_bits: int = MAX_EXPR_BITS) -> int:
    """Evaluate ``text`` to a natural number (>= 0)."""
    value = _Parser(text, max_bits).parse()
    logger.debug("evaluated %r to a %d-bit value", text, value.bit_length())
    return value
