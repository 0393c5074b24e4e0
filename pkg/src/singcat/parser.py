"""Polynomial text: recursive-descent parsing and canonical printing.

Grammar::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' natural)?
    base   := rational | 'i' | identifier | '(' expr ')'

Rationals are ``n`` or ``n/d``; ``i`` is the imaginary unit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError
from .ring import IMAGINARY_UNIT, Coefficient, Monomial, Poly, RingContext, imag_part, real_part

TOKEN_RE = re.compile(
    r"(?P<space>[ \t\r\n]+)|(?P<number>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()])"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        match = TOKEN_RE.match(text, pos)
        column = pos - line_start + 1
        if match is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, column)
        kind = match.lastgroup
        value = match.group()
        if kind == "space":
            for offset, char in enumerate(value):
                if char == "\n":
                    line += 1
                    line_start = pos + offset + 1
        else:
            tokens.append(Token(kind, value, line, column))
        pos = match.end()
    tokens.append(Token("end", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: RingContext) -> None:
        self.tokens = tokenize(text)
        self.ring = ring
        self.position = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.position]

    def advance(self) -> Token:
        token = self.current
        self.position += 1
        return token

    def fail(self, message: str, token: Token | None = None) -> ParseError:
        token = token or self.current
        return ParseError(message, token.line, token.column)

    def accept(self, text: str) -> bool:
        if self.current.kind == "op" and self.current.text == text:
            self.position += 1
            return True
        return False

    def parse(self) -> Poly:
        if self.current.kind == "end":
            raise self.fail("empty expression")
        value = self.expr()
        if self.current.kind != "end":
            raise self.fail(f"unexpected {self.current.text!r}")
        return value

    def expr(self) -> Poly:
        negate = False
        if self.accept("-"):
            negate = True
        elif self.accept("+"):
            pass
        value = self.term()
        if negate:
            value = -value
        while True:
            if self.accept("+"):
                value = value + self.term()
            elif self.accept("-"):
                value = value - self.term()
            else:
                return value

    def term(self) -> Poly:
        value = self.factor()
        while self.accept("*"):
            value = value * self.factor()
        return value

    def factor(self) -> Poly:
        value = self.base()
        if self.current.kind == "op" and self.current.text == "^":
            caret = self.advance()
            if self.current.kind != "number":
                raise self.fail("expected a natural exponent after '^'", caret)
            value = value ** int(self.advance().text)
        return value

    def base(self) -> Poly:
        token = self.current
        if token.kind == "number":
            self.advance()
            numerator = int(token.text)
            if self.current.kind == "op" and self.current.text == "/":
                slash = self.advance()
                if self.current.kind != "number":
                    raise self.fail("expected a denominator after '/'", slash)
                denominator = int(self.advance().text)
                if denominator == 0:
                    raise self.fail("zero denominator", slash)
                return self.ring.constant(Fraction(numerator, denominator))
            return self.ring.constant(numerator)
        if token.kind == "name":
            self.advance()
            if token.text == "i":
                return self.ring.constant(IMAGINARY_UNIT)
            if token.text not in self.ring.var_names:
                raise self.fail(f"unknown identifier {token.text!r}", token)
            return self.ring.variable(token.text)
        if self.accept("("):
            value = self.expr()
            if not self.accept(")"):
                raise self.fail("expected ')'")
            return value
        if token.kind == "end":
            raise self.fail("unexpected end of input")
        raise self.fail(f"unexpected {token.text!r}")


def parse_poly(text: str, ring: RingContext) -> Poly:
    """Parse ``text`` into an exact polynomial over ``ring``."""

    return _Parser(text, ring).parse()


def _rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _imaginary(value: Fraction) -> str:
    if value == 1:
        return "i"
    if value == -1:
        return "-i"
    return f"{_rational(value)}*i"


def format_coefficient(value: Coefficient) -> str:
    """Canonical text of a Gaussian rational: ``a``, ``c*i`` or ``a+c*i``."""

    re_part, im_part = real_part(value), imag_part(value)
    if not im_part:
        return _rational(re_part)
    if not re_part:
        return _imaginary(im_part)
    imaginary = _imaginary(im_part)
    sign = "" if imaginary.startswith("-") else "+"
    return f"{_rational(re_part)}{sign}{imaginary}"


def parse_coefficient(text: str) -> Coefficient:
    """Inverse of :func:`format_coefficient`."""

    value = parse_poly(text, RingContext(("x",)))
    if not value.is_constant():
        raise ParseError(f"not a coefficient: {text!r}")
    return value.constant_term()


def format_monomial(monomial: Monomial, ring: RingContext) -> str:
    factors = []
    for name, exponent in zip(ring.var_names, monomial):
        if exponent == 1:
            factors.append(name)
        elif exponent > 1:
            factors.append(f"{name}^{exponent}")
    return "*".join(factors) or "1"


def _term(value: Coefficient, monomial: Monomial, ring: RingContext) -> str:
    constant = not any(monomial)
    text = format_coefficient(value)
    if constant:
        return f"({text})" if real_part(value) and imag_part(value) else text
    mono = format_monomial(monomial, ring)
    if real_part(value) and imag_part(value):
        return f"({text})*{mono}"
    if text == "1":
        return mono
    if text == "-1":
        return f"-{mono}"
    return f"{text}*{mono}"


def format_poly(p: Poly) -> str:
    """Canonical text: terms in descending graded-lexicographic order."""

    if p.is_zero:
        return "0"
    pieces = []
    for index, (monomial, value) in enumerate(p.terms()):
        text = _term(value, monomial, p.ring)
        if index == 0:
            pieces.append(text)
        elif text.startswith("-"):
            pieces.append(f" - {text[1:]}")
        else:
            pieces.append(f" + {text}")
    return "".join(pieces)
