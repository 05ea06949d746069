"""Buchberger Gröbner bases for ideals and submodules of free modules over a polynomial ring.

Vectors of a free module P^r are dicts ``{(-component, key): coeff}``.  Comparing these
terms as tuples gives a position-over-term order in which the lowest component index
dominates, extended by the ring order inside each component.  Ideals are the rank-one
case.  Everything here works over the ambient polynomial ring; quotient rings add their
defining ideal as extra generators.
"""

from __future__ import annotations

import heapq
import itertools
import operator
from typing import Iterable, Sequence

from .algebra import Polynomial, PolyRing

_add = operator.add
_le = operator.le


# ---------------------------------------------------------------------------
# vectors <-> polynomial columns


def col_to_vec(col: Sequence[Polynomial], offset: int = 0) -> dict:
    v = {}
    for i, f in enumerate(col):
        c = -(i + offset)
        for k, a in f.terms.items():
            v[(c, k)] = a
    return v


def vec_to_col(ring: PolyRing, v: dict, rank: int, offset: int = 0) -> tuple:
    parts = [dict() for _ in range(rank)]
    for (c, k), a in v.items():
        i = -c - offset
        if 0 <= i < rank:
            parts[i][k] = a
    return tuple(Polynomial(ring, d) for d in parts)


def split_vec(v: dict, rank: int) -> tuple[dict, dict]:
    """Split into the part in components < rank and the rest."""
    head, tail = {}, {}
    for t, a in v.items():
        (head if -t[0] < rank else tail)[t] = a
    return head, tail


# ---------------------------------------------------------------------------
# the engine


class _Elem:
    __slots__ = ("lt", "comp", "exps", "terms", "vec")

    def __init__(self, vec: dict, order):
        self.vec = vec
        self.lt = max(vec)
        self.comp = self.lt[0]
        self.exps = order.decode(self.lt[1])
        self.terms = sorted(vec.items(), reverse=True)


class _Index:
    """Reducer lookup by component and leading-monomial divisibility."""

    def __init__(self, order):
        self.order = order
        self.by_comp: dict[int, list[_Elem]] = {}

    def add(self, e: _Elem):
        self.by_comp.setdefault(e.comp, []).append(e)

    def remove(self, e: _Elem):
        self.by_comp[e.comp].remove(e)

    def find(self, term) -> _Elem | None:
        cands = self.by_comp.get(term[0])
        if not cands:
            return None
        exps = self.order.decode(term[1])
        for e in cands:
            if all(map(_le, e.exps, exps)):
                return e
        return None


def _monic(v: dict, field) -> dict:
    lc = v[max(v)]
    if lc == 1:
        return v
    inv = field.inv(lc)
    p = field.characteristic
    if p:
        return {t: a * inv % p for t, a in v.items()}
    return {t: a * inv for t, a in v.items()}


def _reduce(v: dict, index: _Index, field, full: bool = True) -> dict:
    """Remainder of v modulo the elements of ``index`` (all monic)."""
    p = field.characteristic
    work = dict(v)
    out = {}
    find = index.find
    while work:
        t = max(work)
        g = find(t)
        if g is None:
            if not full:
                out.update(work)
                break
            out[t] = work.pop(t)
            continue
        c = work[t]
        m = tuple(map(operator.sub, t[1], g.lt[1]))
        for (gc, gk), a in g.terms:
            tt = (gc, tuple(map(_add, gk, m)))
            val = work.get(tt, 0) - c * a
            if p:
                val %= p
            if val:
                work[tt] = val
            else:
                del work[tt]
    return out


def _spoly(f: _Elem, g: _Elem, lcm_key, field) -> dict:
    p = field.characteristic
    mf = tuple(map(operator.sub, lcm_key, f.lt[1]))
    mg = tuple(map(operator.sub, lcm_key, g.lt[1]))
    out = {}
    for (c, k), a in f.terms[1:]:
        out[(c, tuple(map(_add, k, mf)))] = a
    for (c, k), a in g.terms[1:]:
        tt = (c, tuple(map(_add, k, mg)))
        val = out.get(tt, 0) - a
        if p:
            val %= p
        if val:
            out[tt] = val
        else:
            out.pop(tt, None)
    return out


class GBStats:
    __slots__ = ("pairs", "reductions_to_zero", "basis_size")

    def __init__(self):
        self.pairs = 0
        self.reductions_to_zero = 0
        self.basis_size = 0


def buchberger(vectors: Iterable[dict], ring: PolyRing, product_criterion: bool = False,
               stats: GBStats | None = None) -> list[dict]:
    """Reduced, monic Gröbner basis of the span of ``vectors``.

    Gebauer–Möller pair elimination with normal (smallest lcm degree first) selection.
    ``product_criterion`` (coprime leading monomials) is only valid for untracked ideals.
    Output is sorted by leading term, so it depends only on the submodule and the order.
    """
    order, field = ring.order, ring.field
    G: list[_Elem] = []
    index = _Index(order)
    active: list[bool] = []
    pairs: dict[tuple[int, int], tuple] = {}
    heap: list = []
    counter = itertools.count()

    def insert(h: dict):
        e = _Elem(h, order)
        t = len(G)
        # candidate pairs with the new element
        cand = []
        for i, g in enumerate(G):
            if g.comp != e.comp:
                continue
            lcm = tuple(map(max, g.exps, e.exps))
            cand.append((i, lcm))
        # B criterion on old pairs
        for (i, j), (lcm, _) in list(pairs.items()):
            if G[i].comp != e.comp:
                continue
            if all(map(_le, e.exps, lcm)):
                lit = tuple(map(max, G[i].exps, e.exps))
                ljt = tuple(map(max, G[j].exps, e.exps))
                if lit != lcm and ljt != lcm:
                    del pairs[(i, j)]
        # M criterion: drop pairs whose lcm is properly divisible by another candidate's lcm
        keep = []
        for i, lcm in cand:
            dominated = False
            for j, l2 in cand:
                if j != i and l2 != lcm and all(map(_le, l2, lcm)):
                    dominated = True
                    break
            if not dominated:
                keep.append((i, lcm))
        # F criterion: one pair per lcm; with the product criterion, drop the whole lcm class
        groups: dict[tuple, list[int]] = {}
        for i, lcm in keep:
            groups.setdefault(lcm, []).append(i)
        for lcm, idxs in groups.items():
            if product_criterion and any(
                not any(a and b for a, b in zip(G[i].exps, e.exps)) for i in idxs
            ):
                continue
            i = idxs[0]
            key = order.encode(lcm)
            pairs[(i, t)] = (lcm, key)
            heapq.heappush(heap, (sum(lcm), (e.comp, key), next(counter), i, t))
        # older elements whose leading term the new one divides become redundant
        for i, g in enumerate(G):
            if active[i] and g.comp == e.comp and all(map(_le, e.exps, g.exps)):
                active[i] = False
                index.remove(g)
        G.append(e)
        active.append(True)
        index.add(e)

    start = [v for v in vectors if v]
    start.sort(key=max)
    for v in start:
        r = _reduce(v, index, field)
        if r:
            insert(_monic(r, field))

    while heap:
        _, _, _, i, j = heapq.heappop(heap)
        entry = pairs.pop((i, j), None)
        if entry is None:
            continue
        if stats:
            stats.pairs += 1
        s = _spoly(G[i], G[j], entry[1], field)
        if s:
            s = _reduce(s, index, field)
        if s:
            insert(_monic(s, field))
        elif stats:
            stats.reductions_to_zero += 1

    basis = [g for g, a in zip(G, active) if a]
    basis.sort(key=lambda g: g.lt)
    out = []
    for k, g in enumerate(basis):
        others = _Index(order)
        for h in basis:
            if h is not g:
                others.add(h)
        tail = _reduce(dict(g.terms[1:]), others, field)
        tail[g.lt] = g.vec[g.lt]
        out.append(tail)
    if stats:
        stats.basis_size = len(out)
    return out


def is_groebner(vectors: Sequence[dict], ring: PolyRing) -> bool:
    """Buchberger criterion: every S-vector reduces to zero (no pair criteria used)."""
    order, field = ring.order, ring.field
    elems = [_Elem(_monic(v, field), order) for v in vectors if v]
    index = _Index(order)
    for e in elems:
        index.add(e)
    for a, b in itertools.combinations(elems, 2):
        if a.comp != b.comp:
            continue
        lcm = order.encode(tuple(map(max, a.exps, b.exps)))
        s = _spoly(a, b, lcm, field)
        if s and _reduce(s, index, field):
            return False
    return True


class ReducedBasis:
    """A computed Gröbner basis with a reducer index."""

    def __init__(self, ring: PolyRing, vectors: list[dict]):
        self.ring = ring
        self.vectors = vectors
        self.index = _Index(ring.order)
        for v in vectors:
            self.index.add(_Elem(v, ring.order))

    def reduce(self, v: dict) -> dict:
        return _reduce(v, self.index, self.ring.field)

    def leading_terms(self) -> list[tuple]:
        return [max(v) for v in self.vectors]


# ---------------------------------------------------------------------------
# ideals


def _fresh(names: Sequence[str], stem: str) -> str:
    k = 0
    while f"{stem}{k}" in names:
        k += 1
    return f"{stem}{k}"


class Ideal:
    """Ideal of a polynomial ring, with a lazily computed reduced Gröbner basis."""

    def __init__(self, ring: PolyRing, gens: Iterable = ()):
        self.ring = ring
        conv = []
        for g in gens:
            g = ring(g) if not isinstance(g, Polynomial) else ring.convert(g)
            if g:
                conv.append(g)
        self.gens = tuple(conv)
        self._basis: ReducedBasis | None = None

    @property
    def basis(self) -> ReducedBasis:
        if self._basis is None:
            vecs = buchberger((col_to_vec([g]) for g in self.gens), self.ring, product_criterion=True)
            self._basis = ReducedBasis(self.ring, vecs)
        return self._basis

    @property
    def gb(self) -> tuple[Polynomial, ...]:
        return tuple(vec_to_col(self.ring, v, 1)[0] for v in self.basis.vectors)

    def reduce(self, f) -> Polynomial:
        f = self.ring.convert(f) if isinstance(f, Polynomial) else self.ring(f)
        if not f or not self.gens:
            return f
        return vec_to_col(self.ring, self.basis.reduce(col_to_vec([f])), 1)[0]

    def contains(self, f) -> bool:
        return not self.reduce(f)

    __contains__ = contains

    def is_zero(self) -> bool:
        return not self.gens

    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.gb)

    def issubset(self, other: Ideal) -> bool:
        return all(other.contains(g) for g in self.gens)

    def __eq__(self, other):
        if not isinstance(other, Ideal) or other.ring != self.ring:
            return NotImplemented
        return self.gb == other.gb

    def __hash__(self):
        return hash((self.ring, self.gb))

    def __repr__(self):
        return f"Ideal({', '.join(str(g) for g in self.gens) or '0'})"

    def to_strings(self) -> list[str]:
        return [str(g) for g in self.gb]

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other: Ideal) -> Ideal:
        return Ideal(self.ring, self.gens + tuple(other.gens))

    def __mul__(self, other: Ideal) -> Ideal:
        return Ideal(self.ring, [a * b for a in self.gens for b in other.gens])

    def power(self, n: int) -> Ideal:
        out = Ideal(self.ring, [1])
        for _ in range(n):
            out = out * self
        return out

    def eliminate(self, names: Sequence[str]) -> Ideal:
        """Intersection with the subring in the variables not listed in ``names``."""
        P = self.ring
        keep = [v for v in P.names if v not in names]
        big = PolyRing(P.field, list(names) + keep, f"elim:{len(names)}")
        J = Ideal(big, [big.convert(g) for g in self.gens])
        drop = set(range(len(names)))
        out = [g for g in J.gb if not (g.support() & drop)]
        return Ideal(P, [_restrict(big, P.names, g, P) for g in out])

    def intersect(self, other: Ideal) -> Ideal:
        P = self.ring
        if not self.gens or not other.gens:
            return Ideal(P, [])
        t = _fresh(P.names, "_t")
        big = P.extend([t])
        tv = big.gens[0]
        gens = [tv * big.convert(a) for a in self.gens] + [(1 - tv) * big.convert(b) for b in other.gens]
        J = Ideal(big, gens)
        out = [g for g in J.gb if 0 not in g.support()]
        return Ideal(P, [_restrict(big, P.names, g, P) for g in out])

    def quotient(self, other) -> Ideal:
        """(self : other) for an ideal or a single polynomial."""
        P = self.ring
        if isinstance(other, Ideal):
            out = Ideal(P, [1])
            for b in other.gens:
                out = out.intersect(self.quotient(b))
            return out
        f = P.convert(other) if isinstance(other, Polynomial) else P(other)
        if not f:
            return Ideal(P, [1])
        if self.contains(f):
            return Ideal(P, [1])
        inter = self.intersect(Ideal(P, [f]))
        return Ideal(P, [g.exact_div(f) for g in inter.gb])

    def saturate(self, f) -> Ideal:
        cur = self
        while True:
            nxt = cur.quotient(f)
            if nxt == cur:
                return cur
            cur = nxt

    def radical_contains(self, f) -> bool:
        """f ∈ √I via 1 ∈ I + (1 - u f) in a ring with a fresh variable u."""
        P = self.ring
        f = P.convert(f) if isinstance(f, Polynomial) else P(f)
        if not f:
            return True
        if self.contains(f):
            return True
        u = _fresh(P.names, "_u")
        big = P.extend([u], order=P.order.name if P.order.name in ("degrevlex", "lex") else "degrevlex")
        J = Ideal(big, [big.convert(g) for g in self.gens] + [1 - big.gens[0] * big.convert(f)])
        return J.is_unit()

    def radical_subset(self, other: Ideal) -> bool:
        """√self ⊆ √other."""
        return all(other.radical_contains(g) for g in self.gens)

    def locus_equal(self, other: Ideal) -> bool:
        return self.radical_subset(other) and other.radical_subset(self)

    def dimension(self) -> int:
        """Krull dimension of P/I: largest set of variables independent modulo LT(I)."""
        if self.is_unit():
            raise ValueError("dimension of the unit ideal is undefined")
        n = self.ring.nvars
        lts = [g.lead_exps for g in self.gb]
        supports = [frozenset(i for i, e in enumerate(m) if e) for m in lts]
        for size in range(n, -1, -1):
            for S in itertools.combinations(range(n), size):
                s = set(S)
                if not any(sup <= s for sup in supports):
                    return size
        return 0

    def is_groebner_basis_valid(self) -> bool:
        return is_groebner(self.basis.vectors, self.ring)


def _restrict(big: PolyRing, names: Sequence[str], g: Polynomial, target: PolyRing | None = None) -> Polynomial:
    """Rewrite a polynomial that only involves ``names`` into the ring on those names."""
    if target is None:
        target = PolyRing(big.field, names)
    pos = [big.names.index(v) for v in target.names]
    out = {}
    for e, c in g.exp_items():
        out[target.order.encode(tuple(e[i] for i in pos))] = c
    return Polynomial(target, out)


# ---------------------------------------------------------------------------
# submodules


def _clean_col(ring: PolyRing, col) -> tuple:
    return tuple(ring.convert(a) if isinstance(a, Polynomial) else ring(a) for a in col)


class Submodule:
    """Submodule of P^rank generated by columns."""

    def __init__(self, ring: PolyRing, rank: int, gens: Iterable[Sequence] = ()):
        self.ring = ring
        self.rank = rank
        cols = []
        for g in gens:
            g = _clean_col(ring, g)
            if len(g) != rank:
                raise ValueError(f"column of length {len(g)} in a rank-{rank} module")
            if any(g):
                cols.append(g)
        self.gens = tuple(cols)
        self._basis: ReducedBasis | None = None

    @property
    def basis(self) -> ReducedBasis:
        if self._basis is None:
            vecs = buchberger((col_to_vec(g) for g in self.gens), self.ring,
                              product_criterion=False)
            self._basis = ReducedBasis(self.ring, vecs)
        return self._basis

    @property
    def gb(self) -> tuple[tuple, ...]:
        return tuple(vec_to_col(self.ring, v, self.rank) for v in self.basis.vectors)

    def reduce(self, col) -> tuple:
        col = _clean_col(self.ring, col)
        if not self.gens:
            return col
        return vec_to_col(self.ring, self.basis.reduce(col_to_vec(col)), self.rank)

    def contains(self, col) -> bool:
        return not any(self.reduce(col))

    def issubset(self, other: Submodule) -> bool:
        return all(other.contains(g) for g in self.gens)

    def __eq__(self, other):
        if not isinstance(other, Submodule):
            return NotImplemented
        return self.ring == other.ring and self.rank == other.rank and self.gb == other.gb

    def __hash__(self):
        return hash((self.ring, self.rank, self.gb))

    def __add__(self, other: Submodule) -> Submodule:
        return Submodule(self.ring, self.rank, self.gens + other.gens)

    def syzygies(self) -> list[tuple]:
        """Generators of {c : Σ c_k g_k = 0} (columns of length len(gens))."""
        return TrackedBasis(self.ring, self.rank, self.gens, ()).kernel()

    def is_groebner_basis_valid(self) -> bool:
        return is_groebner(self.basis.vectors, self.ring)


class TrackedBasis:
    """Gröbner basis of span(gens) + span(relations) in P^rank that remembers how each
    element is written in ``gens``.

    ``kernel()`` gives generators of {a ∈ P^m : Σ a_k gens_k ∈ span(relations)};
    ``lift(w)`` gives such coefficients for w, or None if w is not in the span.
    """

    def __init__(self, ring: PolyRing, rank: int, gens: Sequence[Sequence], relations: Sequence[Sequence]):
        self.ring = ring
        self.rank = rank
        self.gens = [_clean_col(ring, g) for g in gens]
        self.m = len(self.gens)
        vecs = []
        for k, g in enumerate(self.gens):
            v = col_to_vec(g)
            v[(-(rank + k), ring.order.one)] = ring.field.one
            vecs.append(v)
        for r in relations:
            r = _clean_col(ring, r)
            if any(r):
                vecs.append(col_to_vec(r))
        self.basis = ReducedBasis(ring, buchberger(vecs, ring))

    def kernel(self) -> list[tuple]:
        out = []
        for v in self.basis.vectors:
            head, tail = split_vec(v, self.rank)
            if not head and tail:
                out.append(vec_to_col(self.ring, tail, self.m, offset=self.rank))
        return out

    def lift(self, col) -> tuple | None:
        col = _clean_col(self.ring, col)
        r = self.basis.reduce(col_to_vec(col))
        head, tail = split_vec(r, self.rank)
        if head:
            return None
        return tuple(-a for a in vec_to_col(self.ring, tail, self.m, offset=self.rank))

    def contains(self, col) -> bool:
        col = _clean_col(self.ring, col)
        head, _ = split_vec(self.basis.reduce(col_to_vec(col)), self.rank)
        return not head


# ---------------------------------------------------------------------------
# module-level operations


def groebner_basis(obj):
    """Reduced Gröbner basis of an Ideal (tuple of polynomials) or Submodule (tuple of columns)."""
    return obj.gb


def normal_form(f, obj):
    return obj.reduce(f)


def ideal_ops(a: Ideal, b: Ideal, op: str) -> Ideal:
    if a.ring != b.ring:
        raise ValueError("ideals live in different rings")
    if op == "sum":
        return a + b
    if op == "product":
        return a * b
    if op == "intersection":
        return a.intersect(b)
    if op == "quotient":
        return a.quotient(b)
    raise ValueError(f"unknown ideal operation {op!r}")


def radical_membership(f, I: Ideal) -> bool:
    return I.radical_contains(f)


def locus_equal(I: Ideal, J: Ideal) -> bool:
    return I.locus_equal(J)


def dimension(I: Ideal) -> int:
    return I.dimension()


def syzygies(S: Submodule) -> Submodule:
    return Submodule(S.ring, len(S.gens), S.syzygies())


# ---------------------------------------------------------------------------
# free complexes and ambient resolutions


def prune_columns(ring: PolyRing, rank: int, cols: Sequence[Sequence], extra: Sequence[Sequence] = ()) -> list[tuple]:
    """An irredundant subset of ``cols`` generating the same submodule modulo span(extra).

    Later columns are dropped first, so earlier (lower degree) columns are preferred
    when the input is sorted by degree.
    """
    cols = [_clean_col(ring, c) for c in cols]
    extra = [_clean_col(ring, c) for c in extra]
    base = Submodule(ring, rank, extra)
    kept = []
    seen = set()
    for c in cols:
        if not any(c) or c in seen or base.contains(c):
            continue
        seen.add(c)
        kept.append(c)
    j = len(kept) - 1
    while j >= 0 and len(kept) > 1:
        others = kept[:j] + kept[j + 1:]
        if Submodule(ring, rank, others + extra).contains(kept[j]):
            kept = others
        j -= 1
    return kept


def column_degree(col: Sequence[Polynomial]) -> int:
    return max((f.total_degree() for f in col), default=-1)


class FreeComplex:
    """F_0 <- F_1 <- F_2 <- ... where ``maps[i]`` is the matrix of d_{i+1}: F_{i+1} -> F_i.

    ``ring`` is a PolyRing or QuotientRing; ``ranks[i]`` is rank F_i.
    """

    def __init__(self, ring, ranks: Sequence[int], maps: Sequence):
        self.ring = ring
        self.ranks = list(ranks)
        self.maps = list(maps)
        if len(self.ranks) != len(self.maps) + 1:
            raise ValueError("need one more rank than maps")
        for i, d in enumerate(self.maps):
            if d.shape != (self.ranks[i], self.ranks[i + 1]):
                raise ValueError(f"d_{i + 1} has shape {d.shape}, expected {(self.ranks[i], self.ranks[i + 1])}")

    @property
    def length(self) -> int:
        """Index of the last nonzero free module."""
        k = len(self.ranks) - 1
        while k > 0 and self.ranks[k] == 0:
            k -= 1
        return k

    def composites_vanish(self) -> bool:
        return all((a @ b).is_zero() for a, b in zip(self.maps, self.maps[1:]))

    def local_betti(self) -> list[int]:
        """dim_k H_i(F ⊗ k) at the origin: Betti numbers of the cokernel localized at the
        irrelevant maximal ideal, read off the constant parts of the maps."""
        from .linalg import rank as _rank

        field = self.ring.poly_ring.field
        rk = [0]
        for d in self.maps:
            rows = [[f.constant_coeff() for f in r] for r in d.rows]
            rk.append(_rank(field, rows, d.ncols) if d.nrows and d.ncols else 0)
        rk.append(0)
        return [self.ranks[i] - rk[i] - rk[i + 1] for i in range(len(self.ranks))]


def free_resolution_ambient(S: Submodule, max_length: int | None = None) -> FreeComplex:
    """Free resolution of P^rank / S by iterated syzygies, each stage pruned to an
    irredundant generating set.  Stops when a syzygy module is zero or after
    ``max_length`` (default: number of variables + 1) maps."""
    from .algebra import PolyMatrix

    P = S.ring
    cap = P.nvars + 1 if max_length is None else max_length
    cols = sorted(S.gens, key=column_degree)
    cols = prune_columns(P, S.rank, cols)
    ranks = [S.rank]
    maps = []
    rank = S.rank
    while cols and len(maps) < cap:
        d = PolyMatrix.from_columns(P, cols, rank)
        maps.append(d)
        ranks.append(len(cols))
        syz = Submodule(P, rank, cols).syzygies()
        rank = len(cols)
        cols = prune_columns(P, rank, sorted(syz, key=column_degree))
    return FreeComplex(P, ranks, maps)


def projective_dimension_local(S: Submodule) -> int:
    """pd of (P^rank/S) localized at the irrelevant maximal ideal."""
    F = free_resolution_ambient(S)
    betti = F.local_betti()[: S.ring.nvars + 1]
    nz = [i for i, b in enumerate(betti) if b]
    if not nz:
        raise ValueError("zero module has no projective dimension")
    return max(nz)
