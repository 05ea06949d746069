"""Ring-spec files.

Grammar (one declaration per line; ``#`` starts a comment; a declaration may continue
onto following lines while brackets are unbalanced)::

    char = 0 | p
    vars = x, y, ...
    order = degrevlex | lex            (optional, default degrevlex)
    ideal NAME = f1; f2; ...           (the ideal named I is the defining ideal)
    module NAME = matrix [[a, b], [c, d]]
    module NAME = cyclic f1; f2; ...   (R/(f1, f2, ...))
    element NAME = f

The name ``R`` denotes the free module of rank one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .algebra import GF, QQ, PolyRing, Polynomial
from .groebner import Ideal
from .modules import ModulePresentation, QuotientRing
from .polytext import PolynomialSyntaxError, parse_polynomial

_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*$")


class RingSpecError(ValueError):
    def __init__(self, message: str, line: int, col: int, source: str = "<ring>"):
        super().__init__(f"{source}:{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass
class RingSpec:
    characteristic: int
    variables: list
    order: str
    ring: QuotientRing
    ideals: dict = field(default_factory=dict)
    modules: dict = field(default_factory=dict)
    elements: dict = field(default_factory=dict)
    text: str = ""

    def ideal(self, name: str) -> Ideal:
        if name not in self.ideals:
            raise KeyError(f"unknown ideal {name!r}")
        return self.ideals[name]

    def module(self, name: str) -> ModulePresentation:
        if name == "R":
            return ModulePresentation.free(self.ring, 1)
        if name in self.modules:
            return self.modules[name]
        if name in self.ideals:
            return ModulePresentation.cyclic(self.ring, self.ideals[name].gens)
        raise KeyError(f"unknown module {name!r}")

    def element(self, name: str) -> Polynomial:
        if name in self.elements:
            return self.elements[name]
        return self.ring(name)


def _logical_lines(text: str):
    """(line number, column offset, text) of declarations, joining bracket continuations."""
    buf, start, depth = [], None, 0
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip() and depth == 0:
            continue
        if start is None:
            start = no
        buf.append((no, line))
        depth += line.count("[") - line.count("]")
        if depth <= 0:
            yield start, buf
            buf, start, depth = [], None, 0
    if buf:
        yield start, buf


def _locate(buf, offset):
    """Map an offset into the joined text back to (line, col)."""
    for no, line in buf:
        if offset <= len(line):
            return no, offset + 1
        offset -= len(line) + 1
    no, line = buf[-1]
    return no, len(line) + 1


def _split_top(text: str, sep: str, base: int):
    """Split on ``sep`` outside brackets/parentheses; yields (piece, offset)."""
    depth, cur, off = 0, 0, 0
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == sep and depth == 0:
            yield text[cur:i], base + cur
            cur = i + 1
    yield text[cur:], base + cur


def parse_ring_spec(text: str, source: str = "<ring>") -> RingSpec:
    char = None
    variables = None
    order = "degrevlex"
    pending = []  # (kind, name, body, body offset, buf)
    for start, buf in _logical_lines(text):
        joined = "\n".join(line for _, line in buf)

        def err(msg, off=0):
            line, col = _locate(buf, off)
            raise RingSpecError(msg, line, col, source)

        if "=" not in joined:
            err("expected a declaration of the form 'key = value'", len(joined) - len(joined.lstrip()))
        lhs, rhs = joined.split("=", 1)
        rhs_off = len(lhs) + 1
        words = lhs.split()
        if not words:
            err("missing declaration keyword")
        key = words[0]
        if key == "char":
            if len(words) != 1:
                err("'char' takes no name", lhs.index(words[1]))
            try:
                char = int(rhs.strip())
                if char < 0:
                    raise ValueError
                (QQ if char == 0 else GF(char))
            except ValueError:
                err(f"characteristic must be 0 or a prime, got {rhs.strip()!r}", rhs_off + len(rhs) - len(rhs.lstrip()))
        elif key == "vars":
            names = []
            for piece, off in _split_top(rhs, ",", rhs_off):
                name = piece.strip()
                if not _NAME.match(name):
                    err(f"bad variable name {name!r}", off + len(piece) - len(piece.lstrip()))
                if name in names:
                    err(f"repeated variable {name!r}", off)
                names.append(name)
            variables = names
        elif key == "order":
            order = rhs.strip()
            if order not in ("degrevlex", "lex"):
                err(f"unknown monomial order {order!r}", rhs_off)
        elif key in ("ideal", "module", "element"):
            if len(words) != 2 or not _NAME.match(words[1]):
                err(f"expected '{key} NAME = ...'", len(lhs) - len(lhs.lstrip()))
            pending.append((key, words[1], rhs, rhs_off, buf))
        else:
            err(f"unknown declaration {key!r}", len(lhs) - len(lhs.lstrip()))
    if char is None:
        raise RingSpecError("missing 'char = ...' declaration", 1, 1, source)
    if variables is None:
        raise RingSpecError("missing 'vars = ...' declaration", 1, 1, source)
    field = QQ if char == 0 else GF(char)
    P = PolyRing(field, variables, order)

    def poly(text, off, buf):
        stripped = text.lstrip()
        lead = len(text) - len(stripped)
        try:
            return parse_polynomial(stripped.rstrip(), P)
        except PolynomialSyntaxError as exc:
            line, col = _locate(buf, off + lead + exc.pos)
            raise RingSpecError(exc.message, line, col, source) from None
        except (ValueError, ZeroDivisionError) as exc:
            line, col = _locate(buf, off + lead)
            raise RingSpecError(str(exc), line, col, source) from None

    def poly_list(text, off, buf):
        return [poly(piece, o, buf) for piece, o in _split_top(text, ";", off) if piece.strip()]

    defining = []
    for kind, name, body, off, buf in pending:
        if kind == "ideal" and name == "I":
            defining = poly_list(body, off, buf)
    ring = QuotientRing(P, defining)
    spec = RingSpec(char, variables, order, ring, text=text)
    for kind, name, body, off, buf in pending:
        if kind == "ideal":
            spec.ideals[name] = ring.ideal_of(poly_list(body, off, buf))
        elif kind == "element":
            spec.elements[name] = ring(poly(body, off, buf))
        else:
            stripped = body.lstrip()
            lead = off + len(body) - len(stripped)
            if stripped.startswith("matrix"):
                spec.modules[name] = _parse_matrix(stripped[6:], lead + 6, buf, ring, poly, source)
            elif stripped.startswith("cyclic"):
                gens = poly_list(stripped[6:], lead + 6, buf)
                spec.modules[name] = ModulePresentation.cyclic(ring, gens)
            else:
                line, col = _locate(buf, lead)
                raise RingSpecError("module must be 'matrix [[...]]' or 'cyclic f1; f2'", line, col, source)
    return spec


def _parse_matrix(text, off, buf, ring, poly, source):
    s = text.strip()
    lead = off + len(text) - len(text.lstrip())
    if not (s.startswith("[") and s.endswith("]")):
        line, col = _locate(buf, lead)
        raise RingSpecError("matrix must be written [[...], [...]]", line, col, source)
    inner = s[1:-1]
    rows = []
    for piece, o in _split_top(inner, ",", lead + 1):
        p = piece.strip()
        if not p:
            continue
        po = o + len(piece) - len(piece.lstrip())
        if not (p.startswith("[") and p.endswith("]")):
            line, col = _locate(buf, po)
            raise RingSpecError("matrix row must be bracketed", line, col, source)
        row = [poly(e, eo, buf) for e, eo in _split_top(p[1:-1], ",", po + 1) if e.strip()]
        if rows and len(row) != len(rows[0]):
            line, col = _locate(buf, po)
            raise RingSpecError(f"matrix row has {len(row)} entries, expected {len(rows[0])}",
                                line, col, source)
        rows.append(row)
    ncols = len(rows[0]) if rows else 0
    from .algebra import PolyMatrix

    return ModulePresentation(ring, PolyMatrix(ring, rows, ncols))


def load_ring_spec(path: str) -> RingSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_ring_spec(fh.read(), source=path)
