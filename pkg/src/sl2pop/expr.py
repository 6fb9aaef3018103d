"""Polynomial and rational-function expressions in ``x``.

Grammar: integer literals, ``x``, ``+ - * / ^``, parentheses; whitespace is
ignored and a number directly followed by ``x`` or ``(`` multiplies.  Rational
constants are written ``a/b``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .exactalg import Poly, RationalFunction

__all__ = ["ParseError", "NonPolynomial", "parse_poly", "parse_rational", "parse_rationals"]


class ParseError(SyntaxError):
    def __init__(self, msg, text, position):
        super().__init__(f"{msg} at position {position}: {text!r}")
        self.text = text
        self.position = position


class NonPolynomial(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+)|(x)|(\*\*|[-+*/^()]))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = len(text) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", text, start)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("num", int(m.group(1)), start))
        elif m.group(2):
            tokens.append(("x", None, start))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            tokens.append((op, None, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, polynomial: bool):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.polynomial = polynomial

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[0] if tok[1] is None else tok[1])
            raise ParseError(f"expected {kind!r}, found {what}", self.text, tok[2])
        self.i += 1
        return tok

    def error(self, msg):
        raise ParseError(msg, self.text, self.peek()[2])

    def parse(self) -> RationalFunction:
        if self.peek()[0] == "end":
            self.error("empty expression")
        value = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[0]!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while True:
            kind = self.peek()[0]
            if kind == "*":
                self.take()
                value = value * self.unary()
            elif kind == "/":
                pos = self.take()[2]
                rhs = self.unary()
                if rhs.is_zero():
                    raise ParseError("division by zero", self.text, pos)
                if self.polynomial and not (rhs.is_polynomial() and rhs.num.degree == 0):
                    raise NonPolynomial(f"division by a non-constant at position {pos}: {self.text!r}")
                value = value / rhs
            elif kind in ("x", "("):
                value = value * self.power()
            else:
                return value

    def unary(self):
        kind = self.peek()[0]
        if kind == "-":
            self.take()
            return -self.unary()
        if kind == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] != "^":
            return base
        self.take()
        sign = 1
        if self.peek()[0] in ("-", "+"):
            sign = -1 if self.take()[0] == "-" else 1
        if self.peek()[0] != "num":
            self.error("expected an integer exponent")
        tok = self.take()
        n = sign * tok[1]
        if n < 0:
            if self.polynomial:
                raise NonPolynomial(f"negative exponent at position {tok[2]}: {self.text!r}")
            if base.is_zero():
                raise ParseError("zero to a negative power", self.text, tok[2])
        return base ** n

    def atom(self):
        tok = self.peek()
        if tok[0] == "num":
            self.take()
            return RationalFunction(Poly([tok[1]]))
        if tok[0] == "x":
            self.take()
            return RationalFunction(Poly([0, 1]))
        if tok[0] == "(":
            self.take()
            value = self.expr()
            self.take(")")
            return value
        self.error("expected a number, x or '('")


def parse_poly(text: str) -> Poly:
    """Exact polynomial; raises ``ParseError`` (a ``SyntaxError``) with the
    offending position or ``NonPolynomial``."""
    value = _Parser(text, polynomial=True).parse()
    return value.num * (Fraction(1) / value.den.lc)


def parse_rational(text: str) -> RationalFunction:
    return _Parser(text, polynomial=False).parse()


def parse_rationals(text: str) -> list:
    """Comma separated rational constants such as ``0,1/2,-3``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        value = parse_poly(part)
        if value.degree > 0:
            raise ValueError(f"{part!r} is not a constant")
        out.append(value.coeff(0))
    return out
