"""Exact coefficient fields, monomial orders, polynomials and polynomial matrices.

Polynomials store their terms as ``{key: coefficient}`` where ``key`` is the
exponent vector *encoded* for the ring's monomial order: plain tuple comparison
of two keys agrees with the order, and the encoding is linear, so multiplying
monomials is componentwise addition of keys.
"""

from __future__ import annotations

import operator
from fractions import Fraction
from typing import Iterable, Sequence

import gmpy2

_add = operator.add
_sub = operator.sub


class Field:
    """The rationals (``characteristic == 0``) or the prime field of order p.

    Rational coefficients are ``gmpy2.mpq``; prime-field coefficients are plain
    ints in ``range(p)``.
    """

    __slots__ = ("characteristic",)

    def __init__(self, characteristic: int = 0):
        if characteristic < 0 or characteristic == 1:
            raise ValueError(f"invalid characteristic {characteristic}")
        if characteristic and not gmpy2.is_prime(characteristic):
            raise ValueError(f"characteristic {characteristic} is not prime")
        self.characteristic = int(characteristic)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def __call__(self, value):
        p = self.characteristic
        if p == 0:
            if isinstance(value, Fraction):
                return gmpy2.mpq(value.numerator, value.denominator)
            return gmpy2.mpq(value)
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, (Fraction, type(gmpy2.mpq()))):
            num, den = int(value.numerator), int(value.denominator)
            if den % p == 0:
                raise ZeroDivisionError(f"denominator {den} vanishes mod {p}")
            return num * pow(den, -1, p) % p
        return int(value) % p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        p = self.characteristic
        return pow(a, -1, p) if p else 1 / a

    def div(self, a, b):
        if not b:
            raise ZeroDivisionError("division by zero")
        p = self.characteristic
        return a * pow(b, -1, p) % p if p else a / b

    def to_str(self, a) -> str:
        return str(a)

    def __eq__(self, other):
        return isinstance(other, Field) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("Field", self.characteristic))

    def __repr__(self):
        return "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


class MonomialOrder:
    """A monomial order realised as a linear, order-preserving key encoding.

    ``blocks`` is a sequence of ``(kind, variable_indices)`` with ``kind`` in
    ``{"degrevlex", "lex"}``; earlier blocks dominate.  ``"degrevlex"`` and
    ``"lex"`` are single-block orders, ``"elim:k"`` makes the first k variables
    a dominant degrevlex block (an elimination order for them).
    """

    def __init__(self, name: str, nvars: int):
        self.name = name
        self.nvars = nvars
        if name == "degrevlex":
            blocks = [("degrevlex", list(range(nvars)))]
        elif name == "lex":
            blocks = [("lex", list(range(nvars)))]
        elif name.startswith("elim:"):
            k = int(name[5:])
            if not 0 < k <= nvars:
                raise ValueError(f"bad elimination block size in {name!r}")
            blocks = [("degrevlex", list(range(k)))]
            if k < nvars:
                blocks.append(("degrevlex", list(range(k, nvars))))
        else:
            raise ValueError(f"unknown monomial order {name!r}")
        self.blocks = blocks
        plan = []  # per key position: (var index or None for degree, sign, block vars)
        where = [None] * nvars
        for kind, idx in blocks:
            if kind == "degrevlex":
                plan.append((None, 1, tuple(idx)))
                for i in reversed(idx):
                    where[i] = (len(plan), -1)
                    plan.append((i, -1, ()))
            else:
                for i in idx:
                    where[i] = (len(plan), 1)
                    plan.append((i, 1, ()))
        self._plan = plan
        self._where = where
        self._dec = {}
        self.one = self.encode((0,) * nvars)

    def encode(self, exps: Sequence[int]) -> tuple:
        out = []
        for var, sign, block in self._plan:
            if var is None:
                out.append(sum(exps[i] for i in block))
            else:
                out.append(sign * exps[var])
        return tuple(out)

    def decode(self, key: tuple) -> tuple:
        try:
            return self._dec[key]
        except KeyError:
            exps = tuple(sign * key[pos] for pos, sign in self._where)
            self._dec[key] = exps
            return exps

    def mul(self, a: tuple, b: tuple) -> tuple:
        return tuple(map(_add, a, b))

    def quo(self, a: tuple, b: tuple) -> tuple:
        """a / b for b dividing a."""
        return tuple(map(_sub, a, b))

    def divides(self, a: tuple, b: tuple) -> bool:
        return all(map(operator.le, self.decode(a), self.decode(b)))

    def lcm(self, a: tuple, b: tuple) -> tuple:
        return self.encode(tuple(map(max, self.decode(a), self.decode(b))))

    def coprime(self, a: tuple, b: tuple) -> bool:
        return not any(x and y for x, y in zip(self.decode(a), self.decode(b)))

    def degree(self, key: tuple) -> int:
        return sum(self.decode(key))

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.name, self.nvars) == (other.name, other.nvars)

    def __hash__(self):
        return hash((self.name, self.nvars))

    def __repr__(self):
        return f"MonomialOrder({self.name!r}, {self.nvars})"


class PolyRing:
    """k[x_1, ..., x_n] with a fixed monomial order."""

    def __init__(self, field: Field, names: Iterable[str], order: str = "degrevlex"):
        self.field = field
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"repeated variable names in {self.names}")
        self.nvars = len(self.names)
        self.order = MonomialOrder(order, self.nvars)

    # PolyMatrix and the module layer treat PolyRing and QuotientRing alike.
    @property
    def poly_ring(self) -> PolyRing:
        return self

    def reduce(self, f: Polynomial) -> Polynomial:
        return f

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.field == other.field
            and self.names == other.names
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.field, self.names, self.order))

    def __repr__(self):
        return f"{self.field!r}[{', '.join(self.names)}]<{self.order.name}>"

    def __call__(self, value=0) -> Polynomial:
        if isinstance(value, Polynomial):
            if value.ring == self:
                return value
            raise ValueError(f"polynomial from {value.ring!r} is not in {self!r}")
        if isinstance(value, str):
            from .polytext import parse_polynomial

            return parse_polynomial(value, self)
        c = self.field(value)
        return Polynomial(self, {self.order.one: c} if c else {})

    @property
    def zero(self) -> Polynomial:
        return Polynomial(self, {})

    @property
    def one(self) -> Polynomial:
        return self(1)

    @property
    def gens(self) -> tuple[Polynomial, ...]:
        out = []
        for i in range(self.nvars):
            e = [0] * self.nvars
            e[i] = 1
            out.append(self.monomial(e))
        return tuple(out)

    def gen(self, name: str) -> Polynomial:
        return self.gens[self.names.index(name)]

    def monomial(self, exps: Sequence[int], coeff=1) -> Polynomial:
        c = self.field(coeff)
        return Polynomial(self, {self.order.encode(tuple(exps)): c} if c else {})

    def from_dict(self, terms: dict) -> Polynomial:
        """Build from ``{exponent tuple: coefficient}``."""
        out = {}
        enc = self.order.encode
        for e, c in terms.items():
            key = enc(tuple(e))
            v = self.field(c) + out.get(key, 0)
            if self.field.characteristic:
                v %= self.field.characteristic
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        return Polynomial(self, out)

    def with_order(self, order: str) -> PolyRing:
        return PolyRing(self.field, self.names, order)

    def with_field(self, field: Field) -> PolyRing:
        return PolyRing(field, self.names, self.order.name)

    def extend(self, names: Sequence[str], front: bool = True, order: str | None = None) -> PolyRing:
        """Ring with extra variables adjoined (in front by default)."""
        new = tuple(names) + self.names if front else self.names + tuple(names)
        if order is None:
            order = f"elim:{len(names)}" if front else self.order.name
        return PolyRing(self.field, new, order)

    def convert(self, f: Polynomial) -> Polynomial:
        """Map a polynomial of another ring here by matching variable names."""
        if f.ring == self:
            return f
        if f.ring.field != self.field:
            raise ValueError("field mismatch")
        pos = []
        for name in f.ring.names:
            if name not in self.names:
                raise ValueError(f"variable {name!r} not in {self!r}")
            pos.append(self.names.index(name))
        out = {}
        enc = self.order.encode
        for e, c in f.exp_items():
            ne = [0] * self.nvars
            for i, k in zip(pos, e):
                ne[i] = k
            out[enc(tuple(ne))] = c
        return Polynomial(self, out)


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps order keys to nonzero coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- inspection -------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.ring.order.one in self.terms)

    @property
    def lead_key(self) -> tuple:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self.terms)

    @property
    def lead_coeff(self):
        return self.terms[self.lead_key]

    @property
    def lead_exps(self) -> tuple:
        return self.ring.order.decode(self.lead_key)

    def constant_coeff(self):
        return self.terms.get(self.ring.order.one, self.ring.field.zero)

    def exp_items(self):
        """(exponent tuple, coefficient) pairs, leading term first."""
        dec = self.ring.order.decode
        return [(dec(k), self.terms[k]) for k in sorted(self.terms, reverse=True)]

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        dec = self.ring.order.decode
        return max(sum(dec(k)) for k in self.terms)

    def degree_in(self, i: int) -> int:
        dec = self.ring.order.decode
        return max((dec(k)[i] for k in self.terms), default=-1)

    def support(self) -> set[int]:
        """Indices of variables that occur."""
        dec = self.ring.order.decode
        used = set()
        for k in self.terms:
            used.update(i for i, e in enumerate(dec(k)) if e)
        return used

    def coefficient(self, exps: Sequence[int]):
        return self.terms.get(self.ring.order.encode(tuple(exps)), self.ring.field.zero)

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")
            return other
        return self.ring(other)

    def __add__(self, other):
        other = self._coerce(other)
        p = self.ring.field.characteristic
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if p:
                v %= p
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.field.characteristic
        if p:
            return Polynomial(self.ring, {k: (-c) % p for k, c in self.terms.items()})
        return Polynomial(self.ring, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        p = self.ring.field.characteristic
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = tuple(map(_add, k1, k2))
                v = out.get(k, 0) + c1 * c2
                if p:
                    v %= p
                out[k] = v
        return Polynomial(self.ring, {k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result, base = self.ring.one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> Polynomial:
        c = self.ring.field(c)
        if not c:
            return self.ring.zero
        p = self.ring.field.characteristic
        if p:
            return Polynomial(self.ring, {k: v * c % p for k, v in self.terms.items()})
        return Polynomial(self.ring, {k: v * c for k, v in self.terms.items()})

    def monic(self) -> Polynomial:
        if not self.terms:
            return self
        return self.scale(self.ring.field.inv(self.lead_coeff))

    def exact_div(self, d: Polynomial) -> Polynomial:
        """Quotient f / d; raises ValueError if d does not divide f."""
        d = self._coerce(d)
        if not d:
            raise ZeroDivisionError("division by the zero polynomial")
        order, field = self.ring.order, self.ring.field
        p = field.characteristic
        dk = d.lead_key
        dinv = field.inv(d.terms[dk])
        rem = dict(self.terms)
        quo = {}
        while rem:
            k = max(rem)
            if not order.divides(dk, k):
                raise ValueError("not an exact division")
            m = order.quo(k, dk)
            c = rem[k] * dinv
            if p:
                c %= p
            quo[m] = c
            for k2, c2 in d.terms.items():
                kk = tuple(map(_add, k2, m))
                v = rem.get(kk, 0) - c * c2
                if p:
                    v %= p
                if v:
                    rem[kk] = v
                else:
                    rem.pop(kk, None)
        return Polynomial(self.ring, quo)

    def substitute(self, var: int, value: Polynomial) -> Polynomial:
        """Replace variable ``var`` by ``value``."""
        value = self._coerce(value)
        order = self.ring.order
        out = self.ring.zero
        powers = {0: self.ring.one}
        for e, c in self.exp_items():
            k = e[var]
            if k not in powers:
                powers[k] = value ** k
            rest = list(e)
            rest[var] = 0
            mono = Polynomial(self.ring, {order.encode(tuple(rest)): c})
            out = out + mono * powers[k]
        return out

    # -- comparison / display --------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        try:
            return self == self.ring(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"


def format_monomial(exps: Sequence[int], names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, exps):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_polynomial(f: Polynomial) -> str:
    if not f.terms:
        return "0"
    p = f.ring.field.characteristic
    out = []
    for e, c in f.exp_items():
        mono = format_monomial(e, f.ring.names)
        if p:
            # symmetric representative keeps output short: y - z*t rather than y + 100*z*t
            c = c - p if c > p // 2 else c
        neg = c < 0
        a = -c if neg else c
        if mono:
            body = mono if a == 1 else f"{a}*{mono}"
        else:
            body = str(a)
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


class PolyMatrix:
    """Matrix with polynomial entries.

    ``ring`` is a PolyRing or a quotient ring (anything with ``poly_ring`` and
    ``reduce``); entries are kept reduced by ``ring.reduce``.
    """

    __slots__ = ("ring", "nrows", "ncols", "rows")

    def __init__(self, ring, rows: Sequence[Sequence], ncols: int | None = None):
        self.ring = ring
        P = ring.poly_ring
        self.rows = tuple(tuple(ring.reduce(_as_poly(P, a)) for a in row) for row in rows)
        self.nrows = len(self.rows)
        if self.rows:
            widths = {len(r) for r in self.rows}
            if len(widths) != 1:
                raise ValueError("ragged matrix rows")
            self.ncols = widths.pop()
            if ncols is not None and ncols != self.ncols:
                raise ValueError("column count mismatch")
        else:
            self.ncols = ncols or 0

    @classmethod
    def zeros(cls, ring, nrows: int, ncols: int) -> PolyMatrix:
        z = ring.poly_ring.zero
        return cls(ring, [[z] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, ring, n: int) -> PolyMatrix:
        P = ring.poly_ring
        return cls(ring, [[P.one if i == j else P.zero for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, ring, columns: Sequence[Sequence], nrows: int) -> PolyMatrix:
        cols = [list(c) for c in columns]
        rows = [[c[i] for c in cols] for i in range(nrows)]
        return cls(ring, rows, len(cols))

    def __getitem__(self, ij) -> Polynomial:
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple[Polynomial, ...]:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple[Polynomial, ...]]:
        return [self.column(j) for j in range(self.ncols)]

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def transpose(self) -> PolyMatrix:
        return PolyMatrix.from_columns(self.ring, self.rows, self.ncols)

    def __matmul__(self, other: PolyMatrix) -> PolyMatrix:
        if self.ncols != other.nrows:
            raise ValueError(f"dimension mismatch: {self.shape} @ {other.shape}")
        ring = self.ring if self.ring == other.ring else _common_ring(self.ring, other.ring)
        P = ring.poly_ring
        out = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = P.zero
                for k in range(self.ncols):
                    a, b = self.rows[i][k], other.rows[k][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(ring, out, other.ncols)

    def __add__(self, other: PolyMatrix) -> PolyMatrix:
        if self.shape != other.shape:
            raise ValueError("dimension mismatch")
        return PolyMatrix(
            self.ring,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
            self.ncols,
        )

    def __neg__(self):
        return PolyMatrix(self.ring, [[-a for a in r] for r in self.rows], self.ncols)

    def scale(self, f) -> PolyMatrix:
        f = _as_poly(self.ring.poly_ring, f)
        return PolyMatrix(self.ring, [[f * a for a in r] for r in self.rows], self.ncols)

    def is_zero(self) -> bool:
        return all(not a for r in self.rows for a in r)

    def hstack(self, other: PolyMatrix) -> PolyMatrix:
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return PolyMatrix.from_columns(self.ring, self.columns() + other.columns(), self.nrows)

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def to_text(self) -> str:
        inner = ", ".join("[" + ", ".join(str(a) for a in r) + "]" for r in self.rows)
        return f"[{inner}]"

    def __repr__(self):
        return f"PolyMatrix({self.nrows}x{self.ncols}, {self.to_text()})"


def _as_poly(P: PolyRing, a) -> Polynomial:
    if isinstance(a, Polynomial):
        return P.convert(a) if a.ring != P else a
    return P(a)


def _common_ring(a, b):
    # a quotient ring wins over its own ambient polynomial ring
    if a.poly_ring == b.poly_ring:
        return a if a is not a.poly_ring else b
    raise ValueError(f"ring mismatch: {a!r} vs {b!r}")
