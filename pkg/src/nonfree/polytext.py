"""Text syntax for polynomials: identifiers, integers, rationals ``3/4``, ``+ - * ^`` and parentheses.

``*`` is optional between factors (``2xy`` is not split, but ``2 x y`` and ``2x`` are read
as products when the pieces are separated or start with a digit).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


class PolynomialSyntaxError(ValueError):
    """Malformed polynomial text; ``pos`` is a 0-based offset into the text."""

    def __init__(self, message: str, pos: int):
        super().__init__(message)
        self.message = message
        self.pos = pos


@dataclass
class _Tok:
    kind: str  # "num", "name", "op", "end"
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    out = []
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(text, i)
        num, name, op = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            out.append(_Tok("num", num, start))
        elif name is not None:
            out.append(_Tok("name", name, start))
        else:
            if op not in "+-*^()/":
                raise PolynomialSyntaxError(f"unexpected character {op!r}", start)
            out.append(_Tok("op", op, start))
        i = m.end()
    out.append(_Tok("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text, ring):
        self.toks = _tokenize(text)
        self.i = 0
        self.ring = ring

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, op):
        t = self.take()
        if t.kind != "op" or t.text != op:
            raise PolynomialSyntaxError(f"expected {op!r}", t.pos)

    def parse(self):
        if self.peek().kind == "end":
            raise PolynomialSyntaxError("empty polynomial", self.peek().pos)
        f = self.sum()
        t = self.peek()
        if t.kind != "end":
            raise PolynomialSyntaxError(f"unexpected {t.text!r}", t.pos)
        return f

    def sum(self):
        t = self.peek()
        neg = False
        if t.kind == "op" and t.text in "+-":
            self.take()
            neg = t.text == "-"
        f = self.product()
        if neg:
            f = -f
        while True:
            t = self.peek()
            if t.kind == "op" and t.text in "+-":
                self.take()
                g = self.product()
                f = f + g if t.text == "+" else f - g
            else:
                return f

    def product(self):
        f = self.power()
        while True:
            t = self.peek()
            if t.kind == "op" and t.text == "*":
                self.take()
                f = f * self.power()
            elif t.kind == "op" and t.text == "/":
                self.take()
                d = self.take()
                if d.kind != "num":
                    raise PolynomialSyntaxError("only division by integer constants is allowed", d.pos)
                if int(d.text) == 0:
                    raise PolynomialSyntaxError("division by zero", d.pos)
                f = f.scale(self.ring.field(Fraction(1, int(d.text))))
            elif t.kind in ("num", "name") or (t.kind == "op" and t.text == "("):
                f = f * self.power()  # implicit multiplication
            else:
                return f

    def power(self):
        base = self.atom()
        t = self.peek()
        if t.kind == "op" and t.text == "^":
            self.take()
            e = self.take()
            if e.kind != "num":
                raise PolynomialSyntaxError("exponent must be a nonnegative integer", e.pos)
            return base ** int(e.text)
        return base

    def atom(self):
        t = self.take()
        if t.kind == "num":
            return self.ring(int(t.text))
        if t.kind == "name":
            if t.text not in self.ring.names:
                raise PolynomialSyntaxError(f"unknown variable {t.text!r}", t.pos)
            return self.ring.gens[self.ring.names.index(t.text)]
        if t.kind == "op" and t.text == "(":
            f = self.sum()
            self.expect(")")
            return f
        if t.kind == "end":
            raise PolynomialSyntaxError("unexpected end of input", t.pos)
        raise PolynomialSyntaxError(f"unexpected {t.text!r}", t.pos)


def parse_polynomial(text: str, ring):
    """Parse ``text`` into a polynomial of ``ring`` (a PolyRing)."""
    return _Parser(text, ring).parse()
