"""Constructive procedures built on the kernel: Ω(M/xM) with its pullback sequence, the
nonfree-locus shrinking loop, the three worked examples, the p^f family and
indecomposability certificates."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .algebra import GF, QQ, Field, PolyMatrix, PolyRing, Polynomial
from .groebner import Ideal, Submodule, TrackedBasis, column_degree, prune_columns
from .loci import (
    LocusDescriptor,
    PreconditionError,
    Unsupported,
    find_avoiding_regular_element,
    grade_positive,
    is_prime_restricted,
    membership,
    minimal_primes_restricted,
    nonfree_locus,
)
from .modules import (
    ModulePresentation,
    QuotientRing,
    _block_rels,
    _unit,
    hom,
    is_regular_on,
    kernel_mod,
    minimalize,
    module_dim_depth,
)
from .serial import (
    certificate_payload,
    digest,
    matrix_payload,
    module_payload,
    ring_payload,
    trace_payload,
)
from .totref import (
    NotFound,
    TotalReflexivityCertificate,
    certify_total_reflexivity_periodic,
    check_totally_c_reflexive_bounded,
    verify_periodic_certificate,
)


class ConstructionError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Ω(M/xM) and the sequence 0 -> N -> M ⊕ F -> M -> 0


@dataclass
class PullbackSequence:
    """0 -> N -> M ⊕ F -> M -> 0 with F = R^g, alpha(Aa + xb) = (-b, Aa + xb) and
    beta(m, f) = x·m + f.  ``alpha`` is 2g × (gens of N), ``beta`` is g × 2g."""

    N: ModulePresentation
    middle: ModulePresentation
    M: ModulePresentation
    alpha: PolyMatrix
    beta: PolyMatrix
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return bool(self.checks) and all(self.checks.values())


def _apply(ring, mat_cols, coeffs, rank):
    P = ring.poly_ring
    out = [P.zero] * rank
    for col, c in zip(mat_cols, coeffs):
        if c:
            for k in range(rank):
                if col[k]:
                    out[k] = out[k] + c * col[k]
    return tuple(ring.reduce(a) for a in out)


def verify_pullback(seq: PullbackSequence) -> dict:
    ring = seq.M.ring
    P = ring.poly_ring
    g = seq.M.ngens
    acols = seq.alpha.columns()
    bcols = seq.beta.columns()
    mid = seq.middle
    checks = {}
    # well-defined maps: relations go to relations
    checks["alpha_well_defined"] = all(
        mid.is_zero_element(_apply(ring, acols, r, 2 * g)) for r in seq.N.relations)
    checks["beta_well_defined"] = all(
        seq.M.is_zero_element(_apply(ring, bcols, r, g)) for r in mid.relations)
    checks["composite_zero"] = all(seq.M.is_zero_element(_apply(ring, bcols, a, g)) for a in acols)
    ker_alpha = kernel_mod(ring, 2 * g, acols, mid.relations)
    checks["alpha_injective"] = all(seq.N.is_zero_element(c) for c in ker_alpha)
    ker_beta = kernel_mod(ring, g, bcols, seq.M.relations)
    im_alpha = Submodule(P, 2 * g, acols + mid.relation_columns())
    checks["kernel_in_image"] = all(im_alpha.contains(c) for c in ker_beta)
    im_beta = Submodule(P, g, bcols + seq.M.relation_columns())
    checks["beta_surjective"] = all(im_beta.contains(_unit(P, g, i)) for i in range(g))
    return checks


def omega_mod_x(M: ModulePresentation, x) -> ModulePresentation:
    """N = Ω(M/xM) for the cover R^g -> M/xM, as the submodule im[A | x·1] of R^g.

    ``provenance['pullback']`` holds the verified sequence 0 -> N -> M ⊕ R^g -> M -> 0.
    """
    ring = M.ring
    P = ring.poly_ring
    x = ring(x)
    if not ring.is_regular(x):
        raise PreconditionError(f"{x} is not regular on R")
    if not is_regular_on(M, x):
        raise PreconditionError(f"{x} is not regular on M")
    g = M.ngens
    A_cols = [c for c in M.relations if any(c)]
    cand = []  # (column, b-vector)
    for c in A_cols:
        cand.append((c, (P.zero,) * g))
    for i in range(g):
        e = _unit(P, g, i)
        cand.append((tuple(ring.reduce(x * a) for a in e), e))
    cand.sort(key=lambda cb: column_degree(cb[0]))
    kept = prune_columns(P, g, [c for c, _ in cand], ring.ideal_columns(g))
    bvec = {}
    for c, b in cand:
        bvec.setdefault(c, b)
    rels = kernel_mod(ring, g, kept, [])
    rels = prune_columns(P, len(kept), sorted(rels, key=column_degree), ring.ideal_columns(len(kept)))
    N = ModulePresentation.from_columns(ring, rels, len(kept))
    middle = M.direct_sum(ModulePresentation.free(ring, g))
    alpha_cols = [tuple(-a for a in bvec[c]) + tuple(c) for c in kept]
    alpha = PolyMatrix.from_columns(ring, alpha_cols, 2 * g)
    beta_rows = [[x if j == i else P.zero for j in range(g)] + [P.one if j == i else P.zero for j in range(g)]
                 for i in range(g)]
    beta = PolyMatrix(ring, beta_rows, 2 * g)
    seq = PullbackSequence(N, middle, M, alpha, beta)
    seq.checks = verify_pullback(seq)
    if not seq.ok:
        failed = [k for k, v in seq.checks.items() if not v]
        raise ConstructionError(f"pullback sequence check failed: {failed}")
    out = minimalize(N, local=False)
    if out.ngens != N.ngens:
        # exact eliminations changed the generators; keep the sequence for the unminimalized N
        out.provenance["pullback_module"] = N
    out.provenance["pullback"] = seq
    out.provenance["generators"] = kept
    return out


# ---------------------------------------------------------------------------
# the shrinking loop


@dataclass
class ShrinkStep:
    module: ModulePresentation
    locus: LocusDescriptor
    q: Ideal
    x: Polynomial
    next_locus: LocusDescriptor
    strict_descent: bool
    contains_target: bool


@dataclass
class ShrinkTrace:
    target: Ideal
    steps: list = field(default_factory=list)
    final_module: ModulePresentation | None = None
    final_locus: LocusDescriptor | None = None
    reflexivity: str = ""
    converged: bool = False


class ShrinkError(RuntimeError):
    def __init__(self, message: str, trace: ShrinkTrace):
        super().__init__(message)
        self.trace = trace


def _reflexivity_record(M: ModulePresentation) -> str:
    cert = certify_total_reflexivity_periodic(M, 4)
    if isinstance(cert, TotalReflexivityCertificate):
        return f"{cert.kind} (period {cert.periodic.period})"
    res = check_totally_c_reflexive_bounded(M, ModulePresentation.free(M.ring, 1), 3)
    return f"bounded: {res.verdict}" + (f" ({res.reason})" if res.reason else "")


def shrink_nonfree_locus(M: ModulePresentation, p, hints: Sequence = (), max_iter: int = 10) -> ShrinkTrace:
    """Replace M by Ω(M/xM) for suitable regular x ∈ p until NF(M) = V(p)."""
    ring = M.ring
    p = ring.ideal_of(p.gens if isinstance(p, Ideal) else p)
    trace = ShrinkTrace(p)
    if not grade_positive(ring, p):
        raise ShrinkError("p has grade zero", trace)
    L = nonfree_locus(M)
    if not membership(p, L):
        raise ShrinkError("p is not in the nonfree locus of M", trace)
    trace.reflexivity = _reflexivity_record(M)
    hint_ideals = [ring.ideal_of(h.gens if isinstance(h, Ideal) else h) for h in hints]
    for _ in range(max_iter):
        if L.ideal.locus_equal(p):
            trace.final_module, trace.final_locus, trace.converged = M, L, True
            return trace
        q = None
        for h in hint_ideals:
            if not p.issubset(h) and membership(h, L):
                q = h
                break
        if q is None:
            primes = minimal_primes_restricted(L.ideal)
            if isinstance(primes, Unsupported):
                raise ShrinkError(f"minimal prime splitter stalled: {primes.reason}; supply a hint", trace)
            for cand in primes:
                if not p.issubset(cand):
                    q = cand
                    break
        if q is None:
            raise ShrinkError("no prime of the nonfree locus avoids p", trace)
        try:
            x = find_avoiding_regular_element(ring, p, [q])
        except Exception as exc:
            raise ShrinkError(f"element choice failed: {exc}", trace) from exc
        N = omega_mod_x(M, x)
        L2 = nonfree_locus(N)
        step = ShrinkStep(M, L, q, x, L2, L.strictly_contains(L2), membership(p, L2))
        trace.steps.append(step)
        if not (step.strict_descent and step.contains_target):
            raise ShrinkError("nonfree loci failed to descend strictly onto V(p)", trace)
        M, L = N, L2
    if L.ideal.locus_equal(p):
        trace.final_module, trace.final_locus, trace.converged = M, L, True
        return trace
    raise ShrinkError(f"no convergence within {max_iter} iterations", trace)


# ---------------------------------------------------------------------------
# indecomposability


@dataclass
class IndecomposabilityResult:
    verdict: str  # "indecomposable" or "inconclusive"
    algebra_dim: int
    truncation: int
    details: dict = field(default_factory=dict)


class TruncationTooLarge(ValueError):
    pass


def _std_monomials(P: PolyRing, lts_by_comp, ncomp, N):
    from .modules import _monomials_below

    basis = []
    for a in range(ncomp):
        lead = lts_by_comp.get(a, [])
        for e in _monomials_below(P.nvars, N):
            if not any(all(u <= v for u, v in zip(l, e)) for l in lead):
                basis.append((a, e))
    return basis


def endomorphism_algebra(M: ModulePresentation, truncation: int, max_dim: int = 120):
    """End(M)/m^N End(M) as a finite-dimensional algebra.

    Returns (basis, mult, identity) where basis elements are (generator index, exponent)
    pairs standing for mono·Φ_a, ``mult[i][j]`` is the coordinate vector (dict) of
    basis_i ∘ basis_j, and ``identity`` is the coordinate vector of id_M.
    """
    ring = M.ring
    P = ring.poly_ring
    g = M.ngens
    E = hom(M, M)
    ident = []
    for i in range(g):
        ident.extend(_unit(P, g, i))
    gens = [tuple(ident)] + list(E.provenance["generators"])
    s = len(gens)
    rels_Mg = _block_rels(M, g)
    tracked = TrackedBasis(P, g * g, gens, rels_Mg + ring.ideal_columns(g * g))
    relE = tracked.kernel()
    # E/m^N E = R^s / (Rel_E + I + m^N)
    from .modules import _monomials_of_degree

    cols = list(relE) + ring.ideal_columns(s)
    for a in range(s):
        for e in _monomials_of_degree(P.nvars, truncation):
            cols.append(tuple(P.monomial(e) if k == a else P.zero for k in range(s)))
    quot = Submodule(P, s, cols)
    lts = {}
    for v in quot.basis.vectors:
        comp, key = max(v)
        lts.setdefault(-comp, []).append(P.order.decode(key))
    basis = _std_monomials(P, lts, s, truncation)
    D = len(basis)
    if D > max_dim:
        raise TruncationTooLarge(f"truncated endomorphism algebra has dimension {D} > {max_dim}")
    pos = {b: i for i, b in enumerate(basis)}

    def coords(col) -> dict:
        r = quot.reduce(col)
        out = {}
        for a, f in enumerate(r):
            for e, c in f.exp_items():
                out[pos[(a, e)]] = c
        return out

    def as_matrix(vec):
        return [[vec[k * g + i] for k in range(g)] for i in range(g)]

    mats = [as_matrix(v) for v in gens]
    prod_coeffs = {}
    for i in range(s):
        for j in range(s):
            Mi, Mj = mats[i], mats[j]
            comp = []
            for k in range(g):  # column k of Mi·Mj
                for r in range(g):
                    acc = P.zero
                    for t in range(g):
                        if Mi[r][t] and Mj[t][k]:
                            acc = acc + Mi[r][t] * Mj[t][k]
                    comp.append(ring.reduce(acc))
            lift = tracked.lift(tuple(comp))
            if lift is None:
                raise ConstructionError("composite of endomorphisms is not in the computed Hom")
            prod_coeffs[(i, j)] = lift
    mult = []
    for a1, e1 in basis:
        row = []
        m1 = P.monomial(e1)
        for a2, e2 in basis:
            m = m1 * P.monomial(e2)
            lift = prod_coeffs[(a1, a2)]
            row.append(coords(tuple(m * c for c in lift)))
        mult.append(row)
    identity = coords(_unit(P, s, 0))
    return basis, mult, identity


def certify_indecomposable(M: ModulePresentation, truncation: int = 3) -> IndecomposabilityResult:
    """``indecomposable`` when End(M)/m^N End(M) has no idempotent other than 0 and 1,
    decided by a Gröbner basis of e^2 = e with τ(τ - D) inverted, τ = trace of
    left multiplication by e."""
    ring = M.ring
    if ring.field.characteristic != 0:
        raise ValueError("indecomposability certificates need characteristic zero")
    if truncation < 1:
        raise ValueError("truncation must be positive")
    if M.is_zero():
        return IndecomposabilityResult("inconclusive", 0, truncation, {"reason": "zero module"})
    basis, mult, identity = endomorphism_algebra(minimalize(M, local=False), truncation)
    D = len(basis)
    names = [f"l{i}" for i in range(D)] + ["s"]
    L = PolyRing(ring.field, names)
    lam = L.gens[:D]
    s = L.gens[D]
    eqs = []
    for c in range(D):
        f = L.zero
        for i in range(D):
            for j in range(D):
                v = mult[i][j].get(c)
                if v:
                    f = f + (lam[i] * lam[j]).scale(v)
        f = f - lam[c]
        if f:
            eqs.append(f)
    # trace of left multiplication by basis element i
    traces = [sum((mult[i][c].get(c, 0) for c in range(D)), ring.field.zero) for i in range(D)]
    tau = L.zero
    for i in range(D):
        if traces[i]:
            tau = tau + lam[i].scale(traces[i])
    eqs.append(s * tau * (tau - D) - 1)
    J = Ideal(L, eqs)
    verdict = "indecomposable" if J.is_unit() else "inconclusive"
    return IndecomposabilityResult(verdict, D, truncation, {"equations": len(eqs), "gb_size": len(J.gb)})


# ---------------------------------------------------------------------------
# worked examples


@dataclass
class Item:
    """One report item: ``evidence`` is a JSON-ready payload with a ``kind`` key."""

    name: str
    passed: bool
    evidence: dict = field(default_factory=dict)
    verdict: str = ""
    seconds: float = 0.0

    def __post_init__(self):
        if not self.verdict:
            self.verdict = "PASS" if self.passed else "FAIL"


def _run(name: str, fn: Callable[[], tuple]) -> Item:
    t0 = time.perf_counter()
    try:
        out = fn()
        ok, ev = out[0], out[1]
        item = Item(name, bool(ok), ev, out[2] if len(out) > 2 else "")
    except Exception as exc:  # a crashing check is a failed item, reported with the error
        item = Item(name, False, {"kind": "error", "error": f"{type(exc).__name__}: {exc}"})
    item.seconds = time.perf_counter() - t0
    return item


def _field(characteristic: int) -> Field:
    return QQ if characteristic == 0 else GF(characteristic)


def gb_strings(I: Ideal) -> list[str]:
    return I.to_strings()


def example1_ring(characteristic: int = 0, defining: Sequence[str] | None = None) -> QuotientRing:
    P = PolyRing(_field(characteristic), ["x", "y", "z", "w"])
    gens = defining or ["x^2", "y*z", "y*w"]
    return QuotientRing(P, [P(g) for g in gens])


def periodic_item(M: ModulePresentation, max_period: int, expected_period: int | None = None):
    """(passed, evidence) for a periodic total-reflexivity certificate of M."""
    cert = certify_total_reflexivity_periodic(M, max_period)
    base = {"ring": ring_payload(M.ring), "module": module_payload(M), "max_period": max_period,
            "expected_period": expected_period}
    if not isinstance(cert, TotalReflexivityCertificate):
        return False, {"kind": "periodic_certificate", **base, "not_found": cert.reason,
                       "computed_ranks": cert.computed_ranks}
    per = cert.periodic
    ok, msg = verify_periodic_certificate(per)
    ok = ok and (expected_period is None or per.period == expected_period)
    ev = {**certificate_payload(per), **base, "certificate_kind": cert.kind}
    return ok, ev


def nonfree_membership_item(M: ModulePresentation, p: Ideal):
    L = nonfree_locus(M)
    ev = {"kind": "nonfree_membership", "ring": ring_payload(M.ring), "module": module_payload(M),
          "prime": gb_strings(p), "nonfree_ideal": L.generators()}
    return membership(p, L), ev


def dimension_item(R: QuotientRing, J: Ideal, expected: int):
    d = J.dimension()
    return d == expected, {"kind": "dimension", "ring": ring_payload(R), "ideal": gb_strings(J),
                           "dim": d, "expected": expected}


def build_example1(characteristic: int = 0, defining: Sequence[str] | None = None) -> list[Item]:
    """The six checks on k[x,y,z,w]/(x^2, yz, yw).  Every item is evaluated; a failing
    item does not stop the others."""
    R = example1_ring(characteristic, defining)
    P = R.poly_ring
    x, y, z, w = P.gens
    rp = ring_payload(R)
    items = []

    def intersection():
        a = Ideal(P, [x ** 2, y])
        b = Ideal(P, [x ** 2, z, w])
        inter = a.intersect(b)
        return inter == R.ideal, {"kind": "intersection", "ring": rp, "a": a.to_strings(),
                                  "b": b.to_strings(), "intersection": gb_strings(inter),
                                  "target": gb_strings(R.ideal)}

    def dim_depth():
        F = ModulePresentation.free(R, 1)
        d, depth = module_dim_depth(F)
        return (d, depth) == (2, 1), {"kind": "dim_depth", "ring": rp, "module": module_payload(F),
                                      "dim": d, "depth": depth, "expected": [2, 1]}

    def primes():
        want = [Ideal(P, [x, y]), Ideal(P, [x, z, w])]
        ev = {"kind": "minimal_primes", "ring": rp, "ideal": gb_strings(R.ideal),
              "expected": [gb_strings(J) for J in want]}
        got = minimal_primes_restricted(R.ideal)
        if isinstance(got, Unsupported):
            return False, {**ev, "unsupported": got.reason}, "UNSUPPORTED"
        ok = len(got) == 2 and all(any(g == w_ for g in got) for w_ in want)
        return ok, {**ev, "primes": [gb_strings(J) for J in got]}

    def totref():
        return periodic_item(ModulePresentation.cyclic(R, [x]), 4, expected_period=1)

    def nf_membership():
        return nonfree_membership_item(ModulePresentation.cyclic(R, [x]), R.ideal_of([x, y]))

    def dim_quotient():
        return dimension_item(R, R.ideal_of([x, y]), 2)

    items.append(_run("1_intersection", intersection))
    items.append(_run("2_dim_depth", dim_depth))
    items.append(_run("3_minimal_primes", primes))
    items.append(_run("4_total_reflexivity", totref))
    items.append(_run("5_nonfree_membership", nf_membership))
    items.append(_run("6_dim_quotient", dim_quotient))
    return items


def example2_ring(characteristic: int = 0) -> QuotientRing:
    P = PolyRing(_field(characteristic), ["t", "x", "y", "z"])
    return QuotientRing(P, [P("x^2")])


def shrink_item(M: ModulePresentation, p: Ideal, hints: Sequence = (), max_iter: int = 10):
    base = {"kind": "shrink_trace", "ring": ring_payload(M.ring), "module": module_payload(M),
            "hints": [gb_strings(M.ring.ideal_of(h.gens if isinstance(h, Ideal) else h)) for h in hints],
            "max_iter": max_iter}
    try:
        trace = shrink_nonfree_locus(M, p, hints, max_iter)
    except ShrinkError as exc:
        return False, {**base, **trace_payload(exc.trace), "error": str(exc)}
    ok = trace.converged and all(s.strict_descent and s.contains_target for s in trace.steps)
    return ok, {**base, **trace_payload(trace)}


def build_example2(characteristic: int = 0, prime: Sequence[str] | None = None) -> list[Item]:
    """The checks on k[t,x,y,z]/(x^2) with p = (t, x), ending with the shrinking loop."""
    R = example2_ring(characteristic)
    P = R.poly_ring
    t, x, y, z = P.gens
    p_gens = [P(g) for g in (prime or ["t", "x"])]
    p = R.ideal_of(p_gens)
    M = ModulePresentation.cyclic(R, [x])
    rp = ring_payload(R)
    items = []

    def grade():
        v = grade_positive(R, p)
        return v, {"kind": "grade_positive", "ring": rp, "ideal": gb_strings(p), "value": v, "expected": True}

    def dim_quotient():
        return dimension_item(R, p, 2)

    def totref():
        return periodic_item(M, 4)

    def nf_membership():
        return nonfree_membership_item(M, p)

    def shrink():
        return shrink_item(M, p)

    items.append(_run("1_grade_positive", grade))
    items.append(_run("2_dim_quotient", dim_quotient))
    items.append(_run("3_total_reflexivity", totref))
    items.append(_run("4_nonfree_membership", nf_membership))
    items.append(_run("5_shrink", shrink))
    return items


# ---------------------------------------------------------------------------
# the p^f family


def example3_ring(characteristic: int = 0) -> QuotientRing:
    return example2_ring(characteristic)


@dataclass
class PfFamilyMember:
    f: Polynomial
    ideal: Ideal
    module: ModulePresentation
    block: PolyMatrix
    checks: dict = field(default_factory=dict)
    certificate: object = None
    locus: LocusDescriptor | None = None
    indecomposable: IndecomposabilityResult | None = None

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def pf_block(ring: QuotientRing, f: Polynomial) -> PolyMatrix:
    P = ring.poly_ring
    x, y, z = P.gen("x"), P.gen("y"), P.gen("z")
    return PolyMatrix(ring, [[x, y - z * f], [P.zero, -x]], 2)


def _check_subring(ring: QuotientRing, f: Polynomial):
    allowed = {ring.names.index("t"), ring.names.index("z")}
    if not f.support() <= allowed:
        raise PreconditionError(f"f = {f} must be a polynomial in t and z only")


def pf_ideal(ring: QuotientRing, f: Polynomial) -> Ideal:
    P = ring.poly_ring
    f = P.convert(f)
    _check_subring(ring, f)
    return ring.ideal_of([P.gen("x"), P.gen("y") - P.gen("z") * f])


def pf_member(ring: QuotientRing, f, truncation: int = 3, indecomposability: bool = True) -> PfFamilyMember:
    P = ring.poly_ring
    f = P(f) if not isinstance(f, Polynomial) else P.convert(f)
    _check_subring(ring, f)
    I = pf_ideal(ring, f)
    A = pf_block(ring, f)
    M = ModulePresentation(ring, A)
    member = PfFamilyMember(f, I, M, A)
    member.checks["prime"] = is_prime_restricted(I) == "prime"
    x, y, z = P.gen("x"), P.gen("y"), P.gen("z")
    as_ideal = ModulePresentation.ideal_module(ring, [x, y - z * f])
    member.checks["presents_ideal"] = as_ideal.relation_submodule() == M.relation_submodule()
    member.checks["square_zero"] = (A @ A).is_zero()
    cert = certify_total_reflexivity_periodic(M, 1)
    member.certificate = cert
    ok = isinstance(cert, TotalReflexivityCertificate) and cert.kind == "periodic" and cert.periodic.period == 1
    if ok:
        ok = cert.periodic.blocks[0] == A and verify_periodic_certificate(cert.periodic)[0]
    member.checks["periodic_certificate"] = ok
    member.locus = nonfree_locus(M)
    member.checks["nonfree_locus"] = member.locus.ideal.locus_equal(I)
    if indecomposability:
        member.indecomposable = certify_indecomposable(M, truncation)
        member.checks["indecomposable"] = member.indecomposable.verdict == "indecomposable"
    return member


def pf_distinct(ring: QuotientRing, f, g) -> bool:
    """The reduced Gröbner bases of p^f and p^g differ."""
    P = ring.poly_ring
    f = P(f) if not isinstance(f, Polynomial) else f
    g = P(g) if not isinstance(g, Polynomial) else g
    return pf_ideal(ring, f).gb != pf_ideal(ring, g).gb


def member_payload(member: PfFamilyMember) -> dict:
    R = member.module.ring
    ev = {"kind": "pf_member", "ring": ring_payload(R), "f": str(member.f),
          "gb": gb_strings(member.ideal), "block": matrix_payload(member.block),
          "checks": dict(member.checks),
          "nonfree_ideal": member.locus.generators() if member.locus else None}
    cert = member.certificate
    if isinstance(cert, TotalReflexivityCertificate):
        cp = certificate_payload(cert.periodic)
        ev["certificate"] = cp
        ev["certificate_sha256"] = digest(cp)
    if member.indecomposable is not None:
        ind = member.indecomposable
        ev["indecomposable"] = {"verdict": ind.verdict, "algebra_dim": ind.algebra_dim,
                                "truncation": ind.truncation}
    return ev


def sample_family(ring: QuotientRing, count: int, max_degree: int, seed: int) -> list[Polynomial]:
    """``count`` distinct f in k[t, z] of degree <= max_degree with coefficients in
    {-2, ..., 2}, drawn from random.Random(seed)."""
    if count < 0 or max_degree < 0:
        raise ValueError("count and max_degree must be nonnegative")
    P = ring.poly_ring
    ti, zi = ring.names.index("t"), ring.names.index("z")
    monos = []
    for d in range(max_degree + 1):
        for a in range(d, -1, -1):
            e = [0] * P.nvars
            e[ti], e[zi] = a, d - a
            monos.append(P.monomial(e))
    rng = random.Random(seed)
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 100 * (count + 1):
            raise ValueError(f"could not draw {count} distinct polynomials of degree <= {max_degree}")
        f = P.zero
        for m in monos:
            c = rng.randint(-2, 2)
            if c:
                f = f + m.scale(c)
        if f not in out:
            out.append(f)
    return out


def build_example3(count: int = 10, max_degree: int = 3, seed: int = 7, truncation: int = 3,
                   characteristic: int = 0) -> list[Item]:
    """Sampled members of f -> p^f: one item per member and one per unordered pair."""
    R = example3_ring(characteristic)
    fs = sample_family(R, count, max_degree, seed)
    width = max(2, len(str(count)))
    items = []
    members = {}

    for i, f in enumerate(fs, 1):
        def member(f=f, i=i):
            m = pf_member(R, f, truncation, indecomposability=characteristic == 0)
            members[i] = m
            return m.ok, member_payload(m)

        items.append(_run(f"member_{i:0{width}d}", member))
    rp = ring_payload(R)
    for i in range(1, len(fs) + 1):
        for j in range(i + 1, len(fs) + 1):
            def pair(i=i, j=j):
                f, g = fs[i - 1], fs[j - 1]
                gf, gg = pf_ideal(R, f), pf_ideal(R, g)
                distinct = pf_distinct(R, f, g)
                lf = members[i].locus if i in members else nonfree_locus(ModulePresentation(R, pf_block(R, f)))
                lg = members[j].locus if j in members else nonfree_locus(ModulePresentation(R, pf_block(R, g)))
                return distinct, {"kind": "pf_pair", "ring": rp, "f": str(f), "g": str(g),
                                  "gb_f": gb_strings(gf), "gb_g": gb_strings(gg),
                                  "gb_distinct": distinct, "nf_distinct": not lf.equals(lg)}

            items.append(_run(f"pair_{i:0{width}d}_{j:0{width}d}", pair))
    return items
