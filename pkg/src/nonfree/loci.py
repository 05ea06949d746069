"""Nonfree loci, singular-locus witness ideals, grade tests, a restricted minimal-prime
splitter, and constructive finite prime avoidance.

Ideals of R = P/I are passed and returned as ideals of P containing I.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import sympy

from .algebra import Polynomial, PolyRing
from .groebner import Ideal, column_degree, prune_columns
from .modules import (
    ModulePresentation,
    NotCohenMacaulay,
    QuotientRing,
    annihilator,
    ext,
    kernel_mod,
    module_dim_depth,
    syzygy,
    tor,
)

DEFAULT_AVOIDANCE_BUDGET = 10_000


class PreconditionError(ValueError):
    pass


class AvoidanceExhausted(RuntimeError):
    pass


@dataclass
class LocusDescriptor:
    """The closed set V(ideal) of Spec R; ``source`` names the operation that produced it."""

    ring: QuotientRing
    ideal: Ideal
    source: str = ""

    def equals(self, other: LocusDescriptor) -> bool:
        return self.ideal.locus_equal(other.ideal)

    def contains(self, other: LocusDescriptor) -> bool:
        """V(self) ⊇ V(other)."""
        return self.ideal.radical_subset(other.ideal)

    def strictly_contains(self, other: LocusDescriptor) -> bool:
        return self.contains(other) and not other.contains(self)

    def is_empty(self) -> bool:
        return self.ideal.is_unit()

    def generators(self) -> list[str]:
        return self.ideal.to_strings()


def _as_ideal(ring: QuotientRing, p) -> Ideal:
    if isinstance(p, Ideal):
        return ring.ideal_of(p.gens)
    return ring.ideal_of(p)


# ---------------------------------------------------------------------------
# nonfree locus and witness ideals


def omega_of_cover(M: ModulePresentation) -> ModulePresentation:
    """ΩM for the free cover given by M's own generators (no minimalization)."""
    ring = M.ring
    cols = [c for c in M.relations if any(c)]
    rels = kernel_mod(ring, M.ngens, cols, [])
    rels = prune_columns(ring.poly_ring, len(cols), sorted(rels, key=column_degree),
                         ring.ideal_columns(len(cols)))
    return ModulePresentation.from_columns(ring, rels, len(cols))


def w0_witness_ideal(M: ModulePresentation) -> Ideal:
    """Ann Ext^1(M, ΩM), computed from M's given presentation."""
    ring = M.ring
    if not any(any(c) for c in M.relations):
        return Ideal(ring.poly_ring, [1])
    E = ext(M, omega_of_cover(M), 1)
    return annihilator(E)


def nonfree_locus(M: ModulePresentation) -> LocusDescriptor:
    """NF(M) = V(Ann Ext^1(M, ΩM))."""
    return LocusDescriptor(M.ring, w0_witness_ideal(M), "nonfree_locus")


def membership(p, L: LocusDescriptor) -> bool:
    """p ∈ V(J), i.e. J ⊆ p."""
    p = _as_ideal(L.ring, p)
    return all(p.contains(g) for g in L.ideal.gb)


def grade_positive(ring: QuotientRing, p) -> bool:
    """(0 :_R p) = 0."""
    p = _as_ideal(ring, p)
    if p.is_unit():
        raise PreconditionError("grade of the unit ideal is not considered")
    return ring.ideal.quotient(p) == ring.ideal


def is_regular_element(ring: QuotientRing, x) -> bool:
    return ring.is_regular(x)


def sing_witness_ideal(ring: QuotientRing, p) -> Ideal:
    """Ann Tor_1(M, M) for M = Ω^d(R/p), d = dim R."""
    p = _as_ideal(ring, p)
    dim, depth = module_dim_depth(ModulePresentation.free(ring, 1))
    if dim != depth:
        raise NotCohenMacaulay(f"ring has dimension {dim} and depth {depth}")
    M = syzygy(ModulePresentation.cyclic(ring, p.gens), dim)
    if M.ngens == 0:
        return Ideal(ring.poly_ring, [1])
    return annihilator(tor(M, M, 1))


# ---------------------------------------------------------------------------
# restricted factoring, primality and minimal primes


def _to_sympy(f: Polynomial):
    P = f.ring
    p = P.field.characteristic
    gens = [sympy.Symbol(n) for n in P.names]
    dom = sympy.GF(p) if p else sympy.QQ
    terms = {}
    for e, c in f.exp_items():
        terms[e] = int(c) if p else sympy.Rational(int(c.numerator), int(c.denominator))
    return sympy.Poly.from_dict(terms, *gens, domain=dom)


def _from_sympy(P: PolyRing, g) -> Polynomial:
    p = P.field.characteristic
    out = {}
    for e, c in g.terms():
        if p:
            c = int(c) % p
        else:
            c = sympy.Rational(c)
            c = P.field(f"{c.p}/{c.q}")
        out[tuple(e)] = c
    return P.from_dict(out)


def easy_factors(f: Polynomial) -> list[Polynomial]:
    """Nonconstant factors of f found by cheap means: monomial content, content with
    respect to one variable, and factoring of univariate parts.  Repeated factors are
    listed repeatedly; a single entry means nothing was split off."""
    P = f.ring
    if f.is_constant():
        return []
    exps = [e for e, _ in f.exp_items()]
    gcd = [min(e[i] for e in exps) for i in range(P.nvars)]
    out = []
    for i, k in enumerate(gcd):
        out.extend([P.gens[i]] * k)
    if any(gcd):
        mono = P.monomial(gcd)
        rest = f.exact_div(mono)
    else:
        rest = f
    if rest.is_constant():
        return out
    out.extend(_split_rest(rest))
    return out


def _split_rest(f: Polynomial) -> list[Polynomial]:
    """Split a polynomial without monomial content: univariate factoring, otherwise the
    content with respect to some variable."""
    P = f.ring
    support = sorted(f.support())
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if len(support) == 1:
            _, facs = _to_sympy(f).factor_list()
            res = []
            for g, k in facs:
                res.extend([_from_sympy(P, g).monic()] * k)
            return res
        for v in support:
            groups: dict[int, dict] = {}
            for e, c in f.exp_items():
                rest = list(e)
                rest[v] = 0
                groups.setdefault(e[v], {})[tuple(rest)] = c
            if len(groups) < 2:
                continue
            coeffs = [_to_sympy(P.from_dict(d)) for _, d in sorted(groups.items())]
            g = coeffs[0]
            for c in coeffs[1:]:
                g = g.gcd(c)
            content = _from_sympy(P, g)
            if not content.is_constant():
                content = content.monic()
                return _split_rest(content) + _split_rest(f.exact_div(content))
    return [f.monic()]


def _drop_variable(J: Ideal, var: int, value: Polynomial) -> Ideal:
    """Image of J under x_var -> value in the ring without x_var (value must not involve it)."""
    P = J.ring
    names = [n for i, n in enumerate(P.names) if i != var]
    Q = PolyRing(P.field, names)
    gens = []
    for g in J.gens:
        h = g.substitute(var, value)
        gens.append(_shrink(h, var, Q))
    return Ideal(Q, gens)


def _shrink(h: Polynomial, var: int, Q: PolyRing) -> Polynomial:
    out = {}
    for e, c in h.exp_items():
        out[tuple(x for i, x in enumerate(e) if i != var)] = c
    return Q.from_dict(out)


def is_prime_restricted(J: Ideal) -> str:
    """'prime', 'not_prime' or 'unknown'."""
    if J.is_unit():
        return "not_prime"
    gb = J.gb
    if not gb:
        return "prime"
    P = J.ring
    if all(len(g.terms) == 1 and g.total_degree() == 1 for g in gb):
        return "prime"
    # a generator c*v + h with c constant and v absent from h eliminates v
    for g in gb:
        for v in sorted(g.support()):
            if g.degree_in(v) != 1:
                continue
            lin = [(e, c) for e, c in g.exp_items() if e[v]]
            if len(lin) != 1 or sum(lin[0][0]) != 1:
                continue
            c = lin[0][1]
            rest = g - P.gens[v].scale(c)
            value = rest.scale(-P.field.inv(c))
            return is_prime_restricted(_drop_variable(J, v, value))
    for g in gb:
        facs = easy_factors(g)
        if len(facs) >= 2 and not any(J.contains(f) for f in facs):
            return "not_prime"
    if len(gb) == 1 and len(gb[0].support()) == 1:
        return "prime" if len(easy_factors(gb[0])) == 1 else "not_prime"
    return "unknown"


@dataclass
class Unsupported:
    reason: str

    verdict = "unsupported"


def minimal_primes_restricted(I: Ideal):
    """Minimal primes of I by recursive splitting on cheaply factorable Gröbner basis
    elements; returns a list of prime ideals or Unsupported."""
    leaves = []

    def split(J: Ideal) -> str | None:
        if J.is_unit():
            return None
        if is_prime_restricted(J) == "prime":
            leaves.append(J)
            return None
        for g in J.gb:
            facs = easy_factors(g)
            if len(facs) >= 2:
                seen = []
                for f in facs:
                    if f in seen:
                        continue
                    seen.append(f)
                    err = split(J + Ideal(J.ring, [f]))
                    if err:
                        return err
                return None
        return f"cannot split ideal ({', '.join(J.to_strings())})"

    err = split(I)
    if err:
        return Unsupported(err)
    out = []
    for J in leaves:
        if any(K == J for K in out):
            continue
        out.append(Ideal(J.ring, J.gb))
    minimal = [J for J in out if not any(K is not J and K.issubset(J) and not J.issubset(K) for K in out)]
    return sorted(minimal, key=lambda J: (len(J.gb), J.to_strings()))


# ---------------------------------------------------------------------------
# prime avoidance


def _candidate_combos(k: int, h: int):
    combos = []
    for c in itertools.product(range(-h, h + 1), repeat=k):
        if max((abs(a) for a in c), default=0) != h:
            continue
        first = next(a for a in c if a)
        if first < 0:
            continue
        combos.append(c)
    combos.sort(key=lambda c: (sum(1 for a in c if a), tuple(a == 0 for a in c), tuple(abs(a) for a in c), c))
    return combos


def find_avoiding_regular_element(ring: QuotientRing, p, avoid: Sequence = (),
                                  budget: int = DEFAULT_AVOIDANCE_BUDGET) -> Polynomial:
    """An R-regular x ∈ p outside every ideal in ``avoid``."""
    pI = _as_ideal(ring, p)
    if not grade_positive(ring, pI):
        raise PreconditionError("p has grade zero: every element of p is a zero divisor")
    avoid = [_as_ideal(ring, q) for q in avoid]
    for q in avoid:
        if pI.issubset(q):
            raise PreconditionError(f"p is contained in ({', '.join(q.to_strings())})")
    src = p.gens if isinstance(p, Ideal) else p
    gens = []
    for g in src:
        g = ring(g)
        if g and g not in gens:
            gens.append(g)
    P = ring.poly_ring
    char = ring.field.characteristic
    tried = 0
    h = 0
    while True:
        h += 1
        height = h if not char else min(h, max(1, (char - 1) // 2))
        if char and h > 1:
            # over a finite field, coefficients run out; multiply generators by monomials
            mults = [P.one] + [m for d in range(1, h) for m in _monomials(P, d)]
        else:
            mults = [P.one]
        for c in _candidate_combos(len(gens), height):
            for ms in itertools.product(mults, repeat=len(gens)) if len(mults) > 1 else [tuple([P.one] * len(gens))]:
                x = ring(sum((g * m).scale(a) for g, m, a in zip(gens, ms, c) if a) if any(c) else P.zero)
                tried += 1
                if tried > budget:
                    raise AvoidanceExhausted(f"no regular element avoiding the given primes in {budget} candidates")
                if not x:
                    continue
                if any(q.contains(x) for q in avoid):
                    continue
                if ring.is_regular(x):
                    return x
        if not char and h > budget:
            raise AvoidanceExhausted("coefficient height exceeded the budget")


def _monomials(P: PolyRing, d: int):
    for combo in itertools.combinations_with_replacement(range(P.nvars), d):
        e = [0] * P.nvars
        for i in combo:
            e[i] += 1
        yield P.monomial(e)
