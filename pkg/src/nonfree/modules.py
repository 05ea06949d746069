"""Finitely generated modules over R = P/I given by presentation matrices.

An R-module is ``coker(A)`` for a matrix A over R; the relations I·R^n are always
implied.  R-ideals are represented by the P-ideal containing I that they lift to.
Everything reduces to Gröbner computations over P with I·e_i adjoined.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from .algebra import PolyMatrix, PolyRing, Polynomial
from .groebner import (
    FreeComplex,
    Ideal,
    Submodule,
    TrackedBasis,
    column_degree,
    projective_dimension_local,
    prune_columns,
)

DEFAULT_RESOLUTION_CAP = 8


class ResolutionCapExceeded(RuntimeError):
    pass


class NotCohenMacaulay(ValueError):
    pass


class QuotientRing:
    """R = P/I.  Ring elements are polynomials of P kept in normal form modulo I."""

    def __init__(self, P: PolyRing, ideal: Ideal | Iterable = ()):
        self.poly_ring = P
        self.ideal = ideal if isinstance(ideal, Ideal) else Ideal(P, ideal)
        if self.ideal.ring != P:
            raise ValueError("defining ideal lives in another ring")
        if self.ideal.is_unit():
            raise ValueError("defining ideal is the unit ideal")

    @property
    def field(self):
        return self.poly_ring.field

    @property
    def names(self):
        return self.poly_ring.names

    @property
    def nvars(self) -> int:
        return self.poly_ring.nvars

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, QuotientRing) and self.poly_ring == other.poly_ring and self.ideal == other.ideal

    def __hash__(self):
        return hash((self.poly_ring, self.ideal))

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.ideal.gb) or "0"
        return f"{self.poly_ring!r}/({gens})"

    def reduce(self, f: Polynomial) -> Polynomial:
        return self.ideal.reduce(f) if self.ideal.gens else f

    def __call__(self, value) -> Polynomial:
        if isinstance(value, Polynomial):
            value = self.poly_ring.convert(value)
        else:
            value = self.poly_ring(value)
        return self.reduce(value)

    @property
    def gens(self) -> tuple[Polynomial, ...]:
        return tuple(self.reduce(g) for g in self.poly_ring.gens)

    def ideal_of(self, gens: Iterable) -> Ideal:
        """The R-ideal generated by ``gens``, as its preimage in P."""
        return Ideal(self.poly_ring, [self(g) for g in gens] + list(self.ideal.gb))

    def maximal_ideal(self) -> Ideal:
        return self.ideal_of(self.poly_ring.gens)

    def matrix(self, rows) -> PolyMatrix:
        return PolyMatrix(self, rows)

    def ideal_columns(self, rank: int) -> list[tuple]:
        """Generators of I·R^rank as columns."""
        P = self.poly_ring
        out = []
        for f in self.ideal.gb:
            for i in range(rank):
                out.append(tuple(f if k == i else P.zero for k in range(rank)))
        return out

    def submodule(self, rank: int, cols: Iterable[Sequence]) -> Submodule:
        """Preimage in P^rank of the R-submodule spanned by ``cols``."""
        return Submodule(self.poly_ring, rank, list(cols) + self.ideal_columns(rank))

    def dimension(self) -> int:
        return self.ideal.dimension()

    def is_regular(self, f) -> bool:
        """(0 :_R f) = 0."""
        return self.ideal.quotient(self(f)) == self.ideal

    def annihilator_of(self, f) -> Ideal:
        return self.ideal.quotient(self(f))


def as_quotient(ring) -> QuotientRing:
    return ring if isinstance(ring, QuotientRing) else QuotientRing(ring, [])


def _unit(P: PolyRing, rank: int, i: int) -> tuple:
    return tuple(P.one if k == i else P.zero for k in range(rank))


class ModulePresentation:
    """coker(matrix) over a quotient ring: generators are the rows, relations the columns."""

    def __init__(self, ring: QuotientRing, matrix: PolyMatrix | Sequence[Sequence] | None = None,
                 ngens: int | None = None, provenance: dict | None = None):
        ring = as_quotient(ring)
        self.ring = ring
        if matrix is None:
            matrix = PolyMatrix(ring, [[] for _ in range(ngens or 0)], 0)
        elif not isinstance(matrix, PolyMatrix):
            rows = [list(r) for r in matrix]
            matrix = PolyMatrix(ring, rows, 0 if rows and not rows[0] else None)
        elif matrix.ring != ring:
            matrix = PolyMatrix(ring, matrix.rows, matrix.ncols)
        if ngens is not None and matrix.nrows != ngens:
            raise ValueError("generator count does not match the matrix")
        self.matrix = matrix
        self.provenance = dict(provenance or {})
        self._relsub: Submodule | None = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def free(cls, ring, rank: int) -> ModulePresentation:
        ring = as_quotient(ring)
        return cls(ring, PolyMatrix(ring, [[] for _ in range(rank)], 0))

    @classmethod
    def cyclic(cls, ring, gens: Iterable) -> ModulePresentation:
        """R/J for the ideal J generated by ``gens``."""
        ring = as_quotient(ring)
        row = [ring(g) for g in gens]
        row = [g for g in row if g]
        return cls(ring, PolyMatrix(ring, [row], len(row)))

    @classmethod
    def from_columns(cls, ring, cols: Sequence[Sequence], ngens: int, provenance=None) -> ModulePresentation:
        ring = as_quotient(ring)
        return cls(ring, PolyMatrix.from_columns(ring, cols, ngens), provenance=provenance)

    @classmethod
    def ideal_module(cls, ring, gens: Iterable) -> ModulePresentation:
        """The ideal J ⊆ R as a module, presented on the given generators."""
        ring = as_quotient(ring)
        gens = [ring(g) for g in gens]
        gens = [g for g in gens if g]
        rels = kernel_mod(ring, 1, [(g,) for g in gens], [])
        rels = prune_columns(ring.poly_ring, len(gens), sorted(rels, key=column_degree),
                             ring.ideal_columns(len(gens)))
        return cls.from_columns(ring, rels, len(gens))

    # -- basic data -------------------------------------------------------
    @property
    def ngens(self) -> int:
        return self.matrix.nrows

    @property
    def nrels(self) -> int:
        return self.matrix.ncols

    @property
    def relations(self) -> list[tuple]:
        return self.matrix.columns()

    def relation_submodule(self) -> Submodule:
        """Preimage in P^ngens of the relation module; M = P^ngens / this."""
        if self._relsub is None:
            self._relsub = self.ring.submodule(self.ngens, self.relations)
        return self._relsub

    def relation_columns(self) -> list[tuple]:
        """Relations together with I·R^ngens."""
        return self.relations + self.ring.ideal_columns(self.ngens)

    def is_zero_element(self, col: Sequence) -> bool:
        return self.relation_submodule().contains(col)

    def is_zero(self) -> bool:
        P = self.ring.poly_ring
        return all(self.is_zero_element(_unit(P, self.ngens, i)) for i in range(self.ngens))

    def direct_sum(self, other: ModulePresentation) -> ModulePresentation:
        if other.ring != self.ring:
            raise ValueError("modules over different rings")
        P = self.ring.poly_ring
        n1, n2 = self.ngens, other.ngens
        cols = [tuple(c) + (P.zero,) * n2 for c in self.relations]
        cols += [(P.zero,) * n1 + tuple(c) for c in other.relations]
        return ModulePresentation.from_columns(self.ring, cols, n1 + n2)

    def __repr__(self):
        return f"ModulePresentation({self.ngens} gens, {self.nrels} rels, {self.matrix.to_text()})"

    def to_text(self) -> str:
        return self.matrix.to_text()

    def same_presentation(self, other: ModulePresentation) -> bool:
        return self.ring == other.ring and self.matrix == other.matrix

    def local_length(self, d: int) -> int:
        """dim_k M / m^d M."""
        return hilbert_samuel(self, d)


# ---------------------------------------------------------------------------
# kernels and subquotients


def kernel_mod(ring: QuotientRing, target_rank: int, phi_cols: Sequence[Sequence],
               target_rels: Sequence[Sequence]) -> list[tuple]:
    """Generators of {a ∈ R^m : Σ a_k phi_k ∈ span(target_rels) + I·R^target_rank}."""
    ring = as_quotient(ring)
    if not phi_cols:
        return []
    tb = TrackedBasis(ring.poly_ring, target_rank, phi_cols,
                      list(target_rels) + ring.ideal_columns(target_rank))
    out = []
    for c in tb.kernel():
        c = tuple(ring.reduce(a) for a in c)
        if any(c):
            out.append(c)
    return out


def subquotient(ring: QuotientRing, rank: int, gens: Sequence[Sequence], rels: Sequence[Sequence],
                provenance: dict | None = None) -> ModulePresentation:
    """(span(gens) + U) / U for U = span(rels) + I·R^rank, presented on an irredundant
    subset of ``gens``.  The chosen generators are stored as ``provenance['generators']``."""
    ring = as_quotient(ring)
    P = ring.poly_ring
    extra = list(rels) + ring.ideal_columns(rank)
    gens = [tuple(ring.reduce(a) for a in g) for g in gens]
    gens = prune_columns(P, rank, sorted(gens, key=column_degree), extra)
    relcols = kernel_mod(ring, rank, gens, rels)
    relcols = prune_columns(P, len(gens), sorted(relcols, key=column_degree), ring.ideal_columns(len(gens)))
    prov = dict(provenance or {})
    prov["generators"] = gens
    return ModulePresentation.from_columns(ring, relcols, len(gens), provenance=prov)


# ---------------------------------------------------------------------------
# minimalization


def _reduce_rows(ring, rows):
    return [[ring.reduce(a) for a in r] for r in rows]


def _eliminate(ring, rows, i, j, exact):
    """Remove generator i using relation column j, whose entry (i, j) is a unit
    (a nonzero constant when ``exact``; a polynomial with nonzero constant term otherwise)."""
    P = ring.poly_ring
    u = rows[i][j]
    nr, nc = len(rows), len(rows[0]) if rows else 0
    out = []
    if exact:
        inv = P.field.inv(u.constant_coeff())
        for k in range(nr):
            if k == i:
                continue
            row = []
            for l in range(nc):
                if l == j:
                    continue
                a = rows[k][l]
                if rows[k][j] and rows[i][l]:
                    a = a - rows[k][j] * rows[i][l].scale(inv)
                row.append(a)
            out.append(row)
    else:
        for k in range(nr):
            if k == i:
                continue
            row = []
            for l in range(nc):
                if l == j:
                    continue
                a = u * rows[k][l]
                if rows[k][j] and rows[i][l]:
                    a = a - rows[k][j] * rows[i][l]
                row.append(a)
            out.append(row)
    return _reduce_rows(ring, out), nc - 1


def _find_unit(rows, exact):
    for j in range(len(rows[0]) if rows else 0):
        for i in range(len(rows)):
            a = rows[i][j]
            if not a:
                continue
            if exact and a.is_constant():
                return i, j
            if not exact and a.constant_coeff():
                return i, j
    return None


def minimalize(M: ModulePresentation, local: bool = True) -> ModulePresentation:
    """Strip generators that are killed by a unit relation.

    Constant unit entries are eliminated exactly (an isomorphism), and generators lying in
    the span of the others are removed the same way.  With ``local``, entries that are units
    only at the irrelevant maximal ideal (nonzero constant term) are then eliminated by
    fraction-free column operations; that step preserves the module only after localizing
    at m, and is recorded as ``provenance['local_steps']``.  Redundant relations are
    dropped at the end.
    """
    ring = M.ring
    P = ring.poly_ring
    rows = [list(r) for r in M.matrix.rows]
    ncols = M.nrels
    local_steps = 0

    def drop_zero(rows, ncols):
        keep = [j for j in range(ncols) if any(r[j] for r in rows)]
        return [[r[j] for j in keep] for r in rows], len(keep)

    while True:
        rows, ncols = drop_zero(rows, ncols)
        hit = _find_unit(rows, exact=True)
        if hit:
            rows, ncols = _eliminate(ring, rows, *hit, exact=True)
            continue
        n = len(rows)
        cols = [tuple(r[j] for r in rows) for j in range(ncols)]
        found = False
        for i in range(n):
            if n == 1 and not cols:
                break
            others = [_unit(P, n, k) for k in range(n) if k != i]
            tb = TrackedBasis(P, n, cols, others + ring.ideal_columns(n))
            b = tb.lift(_unit(P, n, i))
            if b is None:
                continue
            new = [P.zero] * n
            for c, coef in zip(cols, b):
                if coef:
                    for k in range(n):
                        if c[k]:
                            new[k] = new[k] + coef * c[k]
            new = [ring.reduce(a) for a in new]
            if not (new[i] and new[i].is_constant()):
                continue
            for k in range(n):
                rows[k].append(new[k])
            ncols += 1
            rows, ncols = _eliminate(ring, rows, i, ncols - 1, exact=True)
            found = True
            break
        if found:
            continue
        if local:
            hit = _find_unit(rows, exact=False)
            if hit:
                rows, ncols = _eliminate(ring, rows, *hit, exact=False)
                local_steps += 1
                continue
        break
    n = len(rows)
    cols = [tuple(r[j] for r in rows) for j in range(ncols)]
    cols = prune_columns(P, n, sorted(cols, key=column_degree), ring.ideal_columns(n))
    prov = dict(M.provenance)
    prov.pop("generators", None)
    if local_steps:
        prov["local_steps"] = prov.get("local_steps", 0) + local_steps
    out = ModulePresentation.from_columns(ring, cols, n, provenance=prov)
    return out


# ---------------------------------------------------------------------------
# resolutions, syzygies, Hom, Ext, Tor


def resolve(M: ModulePresentation, length: int, cap: int = DEFAULT_RESOLUTION_CAP) -> FreeComplex:
    """F_0 <- F_1 <- ... <- F_length with d_1 the given presentation matrix (zero
    columns dropped) and later maps pruned generators of successive kernels."""
    if length > cap:
        raise ResolutionCapExceeded(f"resolution of length {length} exceeds the cap {cap}")
    ring = M.ring
    P = ring.poly_ring
    cols = [c for c in M.relations if any(c)]
    ranks = [M.ngens]
    maps = []
    rank = M.ngens
    for k in range(length):
        d = PolyMatrix.from_columns(ring, cols, rank)
        maps.append(d)
        ranks.append(len(cols))
        if k + 1 == length:
            break
        syz = kernel_mod(ring, rank, cols, [])
        rank = len(cols)
        cols = prune_columns(P, rank, sorted(syz, key=column_degree), ring.ideal_columns(rank))
    return FreeComplex(ring, ranks, maps)


def syzygy(M: ModulePresentation, n: int = 1) -> ModulePresentation:
    """Ω^n M: the minimalized n-th syzygy module (Ω^0 M is M minimalized)."""
    if n < 0:
        raise ValueError("syzygy index must be nonnegative")
    ring = M.ring
    P = ring.poly_ring
    cur = minimalize(M)
    for _ in range(n):
        g = cur.ngens
        cols = prune_columns(P, g, sorted(cur.relations, key=column_degree), ring.ideal_columns(g))
        if not cols:
            return ModulePresentation.free(ring, 0)
        rels = kernel_mod(ring, g, cols, [])
        rels = prune_columns(P, len(cols), sorted(rels, key=column_degree), ring.ideal_columns(len(cols)))
        cur = minimalize(ModulePresentation.from_columns(ring, rels, len(cols),
                                                         provenance={"syzygy_of": cur.to_text()}))
    return cur


def _block_rels(N: ModulePresentation, blocks: int) -> list[tuple]:
    """Relations of N^blocks, block-diagonally."""
    P = N.ring.poly_ring
    h = N.ngens
    out = []
    for b in range(blocks):
        for c in N.relations:
            col = [P.zero] * (h * blocks)
            col[b * h:(b + 1) * h] = c
            out.append(tuple(col))
    return out


def _dual_tensor_cols(d: PolyMatrix, h: int) -> list[tuple]:
    """Columns of Hom(d, N): N^{rows} -> N^{cols}, sending block a to Σ_b d[a][b]·(block b)."""
    P = d.ring.poly_ring
    out = []
    for a in range(d.nrows):
        for k in range(h):
            col = [P.zero] * (h * d.ncols)
            for b in range(d.ncols):
                col[b * h + k] = d.rows[a][b]
            out.append(tuple(col))
    return out


def _tensor_cols(d: PolyMatrix, h: int) -> list[tuple]:
    """Columns of d ⊗ N: N^{cols} -> N^{rows}."""
    P = d.ring.poly_ring
    out = []
    for b in range(d.ncols):
        for k in range(h):
            col = [P.zero] * (h * d.nrows)
            for a in range(d.nrows):
                col[a * h + k] = d.rows[a][b]
            out.append(tuple(col))
    return out


def _unit_cols(P, n):
    return [_unit(P, n, i) for i in range(n)]


def _cohomology(F: FreeComplex, N: ModulePresentation, i: int, label: str) -> ModulePresentation:
    """H^i of Hom(F, N)."""
    ring = N.ring
    h = N.ngens
    fi = F.ranks[i]
    if h == 0 or fi == 0:
        return ModulePresentation.free(ring, 0)
    P = ring.poly_ring
    d_next = F.maps[i] if i < len(F.maps) else None
    if d_next is not None and d_next.ncols:
        K = kernel_mod(ring, h * d_next.ncols, _dual_tensor_cols(d_next, h),
                       _block_rels(N, d_next.ncols))
    else:
        K = _unit_cols(P, h * fi)
    rels = _block_rels(N, fi)
    if i > 0:
        rels += _dual_tensor_cols(F.maps[i - 1], h)
    return subquotient(ring, h * fi, K, rels, provenance={"kind": label, "index": i})


def hom(M: ModulePresentation, N: ModulePresentation) -> ModulePresentation:
    """Hom_R(M, N) ⊆ N^{ngens M}.  ``provenance['generators']`` lists the chosen
    homomorphisms as stacked columns: entries [a·h:(a+1)·h] give the image of e_a."""
    if M.ring != N.ring:
        raise ValueError("modules over different rings")
    F = resolve(M, 1)
    return _cohomology(F, N, 0, "hom")


def ext(M: ModulePresentation, N: ModulePresentation, i: int, complex_: FreeComplex | None = None) -> ModulePresentation:
    if i < 0:
        raise ValueError("Ext index must be nonnegative")
    if M.ring != N.ring:
        raise ValueError("modules over different rings")
    F = complex_ if complex_ is not None else resolve(M, i + 1)
    return _cohomology(F, N, i, "ext")


def tor(M: ModulePresentation, N: ModulePresentation, i: int, complex_: FreeComplex | None = None) -> ModulePresentation:
    if i < 0:
        raise ValueError("Tor index must be nonnegative")
    if M.ring != N.ring:
        raise ValueError("modules over different rings")
    ring = N.ring
    P = ring.poly_ring
    h = N.ngens
    F = complex_ if complex_ is not None else resolve(M, i + 1)
    fi = F.ranks[i]
    if h == 0 or fi == 0:
        return ModulePresentation.free(ring, 0)
    if i > 0 and F.maps[i - 1].nrows:
        d = F.maps[i - 1]
        K = kernel_mod(ring, h * d.nrows, _tensor_cols(d, h), _block_rels(N, d.nrows))
    else:
        K = _unit_cols(P, h * fi)
    rels = _block_rels(N, fi)
    if i < len(F.maps):
        rels += _tensor_cols(F.maps[i], h)
    return subquotient(ring, h * fi, K, rels, provenance={"kind": "tor", "index": i})


# ---------------------------------------------------------------------------
# annihilators, lengths, dimension and depth


def annihilator(M: ModulePresentation) -> Ideal:
    """(0 :_R M) as an ideal of P containing I."""
    ring = M.ring
    P = ring.poly_ring
    out = Ideal(P, [1])
    rels = M.relation_columns()
    for i in range(M.ngens):
        e = _unit(P, M.ngens, i)
        tb = TrackedBasis(P, M.ngens, [e], rels)
        J = Ideal(P, [c[0] for c in tb.kernel()] + list(ring.ideal.gb))
        out = out.intersect(J)
        if out == ring.ideal:
            break
    return out


def element_annihilator(M: ModulePresentation, col: Sequence) -> Ideal:
    P = M.ring.poly_ring
    tb = TrackedBasis(P, M.ngens, [col], M.relation_columns())
    return Ideal(P, [c[0] for c in tb.kernel()] + list(M.ring.ideal.gb))


def is_regular_on(M: ModulePresentation, x) -> bool:
    """Multiplication by x is injective on M."""
    ring = M.ring
    P = ring.poly_ring
    x = ring(x)
    g = M.ngens
    if g == 0:
        return True
    rels = M.relation_columns()
    xs = [tuple(x if k == i else P.zero for k in range(g)) for i in range(g)]
    K = kernel_mod(ring, g, xs, rels)
    U = M.relation_submodule()
    return all(U.contains(c) for c in K)


def _monomials_below(n: int, d: int):
    for total in range(d):
        for combo in itertools.combinations_with_replacement(range(n), total):
            e = [0] * n
            for i in combo:
                e[i] += 1
            yield tuple(e)


def hilbert_samuel(M: ModulePresentation, d: int) -> int:
    """dim_k M / m^d M, counted as standard monomials of a Gröbner basis."""
    ring = M.ring
    P = ring.poly_ring
    g = M.ngens
    if g == 0 or d <= 0:
        return 0
    powers = [P.monomial(e) for e in _monomials_of_degree(P.nvars, d)]
    cols = M.relation_columns()
    for i in range(g):
        for m in powers:
            cols.append(tuple(m if k == i else P.zero for k in range(g)))
    S = Submodule(P, g, cols)
    lts = {}
    for v in S.basis.vectors:
        comp, key = max(v)
        lts.setdefault(-comp, []).append(P.order.decode(key))
    count = 0
    for i in range(g):
        lead = lts.get(i, [])
        for e in _monomials_below(P.nvars, d):
            if not any(all(a <= b for a, b in zip(l, e)) for l in lead):
                count += 1
    return count


def _monomials_of_degree(n: int, d: int):
    for combo in itertools.combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        yield tuple(e)


def module_dim_depth(M: ModulePresentation) -> tuple[int, int]:
    """(dim M, depth M) at the irrelevant maximal ideal; depth via Auslander–Buchsbaum
    over the ambient polynomial ring."""
    if M.is_zero():
        raise ValueError("the zero module has no dimension or depth")
    ring = M.ring
    dim = annihilator(M).dimension()
    pd = projective_dimension_local(M.relation_submodule())
    return dim, ring.nvars - pd


def is_cohen_macaulay(ring: QuotientRing) -> bool:
    d, depth = module_dim_depth(ModulePresentation.free(ring, 1))
    return d == depth


def canonical_module(ring: QuotientRing) -> ModulePresentation:
    """Ext^{n-d}_P(R, P) re-presented over R, for R Cohen–Macaulay."""
    R = as_quotient(ring)
    P = R.poly_ring
    dim, depth = module_dim_depth(ModulePresentation.free(R, 1))
    if dim != depth:
        raise NotCohenMacaulay(f"ring has dimension {dim} but depth {depth}")
    c = R.nvars - dim
    Q0 = QuotientRing(P, [])
    ambient = ModulePresentation.cyclic(Q0, R.ideal.gb)
    E = ext(ambient, ModulePresentation.free(Q0, 1), c) if c > 0 else hom(ambient, ModulePresentation.free(Q0, 1))
    out = ModulePresentation(R, PolyMatrix(R, E.matrix.rows, E.nrels))
    return minimalize(out)
