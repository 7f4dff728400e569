"""Text syntax for polynomials in z and zbar.

Terms are separated by ``+`` or ``-``.  A term is an optional coefficient
followed by optional ``z^a`` and ``zbar^b`` factors; coefficients are
rationals (``3``, ``-1/2``, ``0.25``) or parenthesised Gaussian rationals
(``(1/2+1/2i)``).  Whitespace is ignored and ``*`` may separate factors.
``sqrt(p/q)`` factors are accepted only when a floating-point result is
requested, since they leave Q(i).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from ..errors import ExponentOverflow, IrrationalCoefficient, NonHolomorphic, PolySyntaxError
from .gaussian import GaussianRational
from .hermpoly import MAX_EXPONENT, HermPoly

_NUMBER = re.compile(r"\d+(?:\.\d*)?|\.\d+")
_INT = re.compile(r"\d+")


@dataclass(frozen=True)
class _Term:
    a: int
    b: int
    coef: GaussianRational
    radical: float | None  # product of sqrt factors, when any
    radical_pos: int | None
    zbar_pos: int | None


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    # -- low level ----------------------------------------------------------------

    def error(self, msg, pos=None, cls=PolySyntaxError):
        raise cls(msg, self.pos if pos is None else pos, self.text)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, s: str) -> bool:
        self.skip()
        return self.text.startswith(s, self.pos)

    def accept(self, s: str) -> bool:
        if self.peek(s):
            self.pos += len(s)
            return True
        return False

    def expect(self, s: str):
        if not self.accept(s):
            self.error(f"expected {s!r}")

    def at_end(self) -> bool:
        self.skip()
        return self.pos >= len(self.text)

    def number(self) -> Fraction | None:
        self.skip()
        m = _NUMBER.match(self.text, self.pos)
        if not m:
            return None
        self.pos = m.end()
        return Fraction(m.group())

    def rational(self) -> Fraction | None:
        """``p`` or ``p/q``; a slash must be followed by a number."""
        start = self.pos
        x = self.number()
        if x is None:
            return None
        if self.accept("/"):
            q = self.number()
            if q is None:
                self.error("expected denominator")
            if q == 0:
                self.error("zero denominator", start)
            x = x / q
        return x

    def integer(self) -> int:
        self.skip()
        m = _INT.match(self.text, self.pos)
        if not m:
            self.error("expected integer exponent")
        self.pos = m.end()
        return int(m.group())

    # -- grammar ------------------------------------------------------------------

    def parse(self) -> list:
        terms = []
        if self.at_end():
            self.error("empty polynomial")
        sign = -1 if self.accept("-") else (self.accept("+") and 1) or 1
        while True:
            terms.append(self.term(sign))
            if self.at_end():
                return terms
            if self.accept("+"):
                sign = 1
            elif self.accept("-"):
                sign = -1
            else:
                self.error("expected '+' or '-'")

    def complex_literal(self) -> GaussianRational:
        start = self.pos
        total = GaussianRational(0)
        first = True
        while not self.peek(")"):
            if self.accept("-"):
                sign = -1
            elif self.accept("+") or first:
                sign = 1
            else:
                self.error("expected '+' or '-' inside coefficient")
            first = False
            x = self.rational()
            if self.accept("i"):
                total = total + GaussianRational(0, sign * (1 if x is None else x))
            elif x is None:
                self.error("expected number")
            else:
                total = total + GaussianRational(sign * x)
        if first:
            self.error("empty coefficient", start)
        self.expect(")")
        return total

    def term(self, sign: int) -> _Term:
        self.skip()
        start = self.pos
        coef = GaussianRational(sign)
        radical = None
        radical_pos = None
        zbar_pos = None
        a = b = 0
        seen = False
        while True:
            self.skip()
            here = self.pos
            if seen and self.accept("*"):
                self.skip()
                here = self.pos
                if self.at_end():
                    self.error("expected factor after '*'")
            if self.accept("zbar"):
                b += self.exponent()
                zbar_pos = here if zbar_pos is None else zbar_pos
            elif self.accept("z"):
                a += self.exponent()
            elif self.accept("sqrt"):
                self.expect("(")
                x = self.rational()
                if x is None:
                    self.error("expected number inside sqrt")
                self.expect(")")
                radical = (1.0 if radical is None else radical) * math.sqrt(x)
                radical_pos = here if radical_pos is None else radical_pos
            elif self.accept("("):
                coef = coef * self.complex_literal()
            elif self.accept("i"):
                coef = coef * GaussianRational(0, 1)
            else:
                x = self.rational()
                if x is None:
                    break
                coef = coef * x
            seen = True
        if not seen:
            self.error("expected term", start)
        if a > MAX_EXPONENT or b > MAX_EXPONENT:
            raise ExponentOverflow(f"exponent exceeds {MAX_EXPONENT} at position {start}")
        return _Term(a, b, coef, radical, radical_pos, zbar_pos)

    def exponent(self) -> int:
        if self.accept("^"):
            return self.integer()
        return 1


def _terms(text: str) -> list:
    if not isinstance(text, str):
        raise TypeError("polynomial text must be a string")
    return _Parser(text).parse()


def parse_poly(text: str) -> HermPoly:
    """Parse an exact polynomial in z and zbar."""
    acc: dict = {}
    for t in _terms(text):
        if t.radical is not None:
            raise IrrationalCoefficient("sqrt needs the float backend", t.radical_pos, text)
        key = (t.a, t.b)
        acc[key] = acc.get(key, GaussianRational(0)) + t.coef
    return HermPoly.from_terms({k: v for k, v in acc.items() if v})


def parse_hol(text: str) -> HermPoly:
    """Parse a polynomial in z alone; any zbar factor is rejected."""
    for t in _terms(text):
        if t.b:
            raise NonHolomorphic("zbar in a holomorphic entry", t.zbar_pos, text)
    return parse_poly(text)


def parse_float_poly(text: str, holomorphic: bool = False) -> dict:
    """Parse into ``{(a, b): complex}``, allowing ``sqrt`` coefficients."""
    acc: dict = {}
    for t in _terms(text):
        if holomorphic and t.b:
            raise NonHolomorphic("zbar in a holomorphic entry", t.zbar_pos, text)
        c = complex(t.coef) * (1.0 if t.radical is None else t.radical)
        acc[(t.a, t.b)] = acc.get((t.a, t.b), 0j) + c
    return {k: v for k, v in acc.items() if v != 0}


def has_radicals(text: str) -> bool:
    return any(t.radical is not None for t in _terms(text))
