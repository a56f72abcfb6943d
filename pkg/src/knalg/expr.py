"""Parser for rational-function strings in the affine coordinate z.

Accepts integers and rationals, the variable z, + - * / ( ), and
powers written ^ or **.  Division always happens in the field of
rational functions, so "1/2" and "1/(z-1)" are both exact.
"""
from __future__ import annotations

import re

from .poly import Polynomial
from .ratfun import RationalFunction
from .scalars import Q

_TOKEN = re.compile(r"\s*(\*\*|\d+|[zZ()^*/+-])")


def _tokenize(text):
    out = []
    text = text.rstrip()
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"bad character at position {pos}: {text[pos:]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return None

    def take(self, want=None):
        tok = self.peek()
        if tok is None or (want is not None and tok != want):
            raise ValueError(f"expected {want or 'a token'}, got {tok!r}")
        self.pos += 1
        return tok

    def expr(self):
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.factor()
            value = value * rhs if op == "*" else value / rhs
        return value

    def factor(self):
        tok = self.peek()
        if tok == "+":
            self.take()
            return self.factor()
        if tok == "-":
            self.take()
            return -self.factor()
        value = self.atom()
        while self.peek() in ("^", "**"):
            self.take()
            sign = 1
            while self.peek() in ("+", "-"):
                if self.take() == "-":
                    sign = -sign
            exponent = sign * int(self.take())
            value = value**exponent
        return value

    def atom(self):
        tok = self.peek()
        if tok == "(":
            self.take()
            value = self.expr()
            self.take(")")
            return value
        if tok in ("z", "Z"):
            self.take()
            return RationalFunction.x()
        if tok is not None and tok.isdigit():
            self.take()
            return RationalFunction.const(Q(int(tok)))
        raise ValueError(f"expected a value, got {tok!r}")


def parse_rational(text):
    """Parse a rational-function string to an exact RationalFunction."""
    tokens = _tokenize(str(text))
    if not tokens:
        raise ValueError("empty expression")
    parser = _Parser(tokens)
    value = parser.expr()
    if parser.peek() is not None:
        raise ValueError(f"trailing input: {parser.tokens[parser.pos:]}")
    return value


def poly_string(poly):
    """Render a polynomial as an expression parse_rational accepts."""
    if poly.is_zero():
        return "0"
    parts = []
    for k, c in enumerate(poly.coeffs):
        if not c:
            continue
        if k == 0:
            parts.append(str(c))
            continue
        power = "z" if k == 1 else f"z^{k}"
        if c == 1:
            parts.append(power)
        elif c == -1:
            parts.append(f"-{power}")
        else:
            parts.append(f"{c}*{power}")
    out = " + ".join(parts)
    return out.replace("+ -", "- ")


def rational_string(f):
    """Render a rational function; round-trips through parse_rational."""
    if f.den == Polynomial((1,)):
        return poly_string(f.num)
    return f"({poly_string(f.num)})/({poly_string(f.den)})"
