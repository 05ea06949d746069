import random

import pytest
import sympy

from nonfree.algebra import QQ, PolyRing
from nonfree.constructions import (
    ShrinkError,
    build_example1,
    build_example2,
    build_example3,
    certify_indecomposable,
    endomorphism_algebra,
    example2_ring,
    example3_ring,
    member_payload,
    omega_mod_x,
    pf_block,
    pf_distinct,
    pf_ideal,
    pf_member,
    sample_family,
    shrink_nonfree_locus,
    verify_pullback,
)
from nonfree.constructions import example1_ring
from nonfree.loci import PreconditionError, nonfree_locus, w0_witness_ideal
from nonfree.modules import ModulePresentation, minimalize


def ideal(R, *gens):
    P = R.poly_ring
    return R.ideal_of([P(g) for g in gens])


def cyclic(R, *gens):
    P = R.poly_ring
    return ModulePresentation.cyclic(R, [P(g) for g in gens])


def by_name(items):
    return {it.name: it for it in items}


# ---------------------------------------------------------------------------
# omega_mod_x and its pullback sequence


def test_omega_mod_t_presents_x_t():
    R = example2_ring()
    P = R.poly_ring
    N = omega_mod_x(cyclic(R, "x"), P("t"))
    want = ModulePresentation.ideal_module(R, [P("x"), P("t")])
    assert N.ngens == 2
    assert N.relation_submodule() == want.relation_submodule()
    assert N.provenance["pullback"].ok


def test_omega_mod_y_minus_zt_presents_pt():
    R = example2_ring()
    P = R.poly_ring
    N = omega_mod_x(cyclic(R, "x"), P("y - z*t"))
    want = ModulePresentation.ideal_module(R, [P("x"), P("y - z*t")])
    assert N.relation_submodule() == want.relation_submodule()
    assert nonfree_locus(N).ideal.locus_equal(pf_ideal(R, P("t")))


def test_omega_mod_x_of_free_module_is_free():
    # Ω(F/tF) is tF, which is free of the same rank
    R = example2_ring()
    N = omega_mod_x(ModulePresentation.free(R, 1), R.poly_ring("t"))
    assert (N.ngens, N.nrels) == (1, 0)


def test_omega_mod_x_requires_regular_elements():
    R = example2_ring()
    P = R.poly_ring
    with pytest.raises(PreconditionError):
        omega_mod_x(cyclic(R, "x"), P("x"))
    with pytest.raises(PreconditionError):
        omega_mod_x(cyclic(R, "t"), P("t"))


@pytest.mark.parametrize("module,x", [
    (["x"], "t"), (["x"], "y - z*t"), (["x", "y"], "t"), (["x", "t"], "z"), ([], "t + z"),
])
def test_pullback_sequence_is_exact(module, x):
    R = example2_ring()
    M = cyclic(R, *module) if module else ModulePresentation.free(R, 1)
    N = omega_mod_x(M, R.poly_ring(x))
    seq = N.provenance["pullback"]
    checks = verify_pullback(seq)
    assert checks and all(checks.values()), checks


# ---------------------------------------------------------------------------
# shrinking the nonfree locus


def test_shrink_one_iteration():
    R = example2_ring()
    p = ideal(R, "t", "x")
    trace = shrink_nonfree_locus(cyclic(R, "x"), p)
    assert trace.converged and len(trace.steps) == 1
    step = trace.steps[0]
    assert step.locus.ideal == ideal(R, "x")
    assert step.q == ideal(R, "x")
    assert step.x == R.poly_ring("t")
    assert trace.final_locus.ideal.locus_equal(p)
    assert w0_witness_ideal(trace.final_module).locus_equal(p)
    assert trace.reflexivity.startswith("periodic")


def test_shrink_already_equal_has_no_steps():
    R = example2_ring()
    P = R.poly_ring
    M = ModulePresentation(R, pf_block(R, P("t")))
    trace = shrink_nonfree_locus(M, pf_ideal(R, P("t")))
    assert trace.converged and trace.steps == []


def test_shrink_grade_zero_is_an_error():
    R = example1_ring()
    with pytest.raises(ShrinkError, match="grade zero"):
        shrink_nonfree_locus(cyclic(R, "x"), ideal(R, "x", "y"))


def test_shrink_outside_locus_is_an_error():
    R = example2_ring()
    P = R.poly_ring
    M = ModulePresentation(R, pf_block(R, P("t")))
    with pytest.raises(ShrinkError, match="not in the nonfree locus") as exc:
        shrink_nonfree_locus(M, ideal(R, "t", "x"))
    assert exc.value.trace.steps == []


def test_shrink_to_maximal_chain_prime():
    R = example2_ring()
    p = ideal(R, "t", "x", "y")
    trace = shrink_nonfree_locus(cyclic(R, "x"), p)
    assert trace.converged
    assert w0_witness_ideal(trace.final_module).locus_equal(p)


@pytest.mark.parametrize("gens", [["t", "x"], ["t", "x", "y"], ["x", "y", "t", "z"], ["x", "t + y"]])
def test_shrink_trace_descends_strictly(gens):
    R = example2_ring()
    p = ideal(R, *gens)
    trace = shrink_nonfree_locus(cyclic(R, "x"), p)
    for step in trace.steps:
        assert step.locus.contains(step.next_locus)
        assert not step.locus.equals(step.next_locus)
        assert p.contains(step.x) and R.is_regular(step.x) and not step.q.contains(step.x)
    for a, b in zip(trace.steps, trace.steps[1:]):
        assert a.next_locus.equals(b.locus)


def test_shrink_uses_hint():
    R = example2_ring()
    p = ideal(R, "t", "x")
    trace = shrink_nonfree_locus(cyclic(R, "x"), p, hints=[ideal(R, "x")])
    assert trace.steps[0].q == ideal(R, "x")


# ---------------------------------------------------------------------------
# worked examples


@pytest.mark.parametrize("char", [0, 101])
def test_example1_passes(char):
    items = build_example1(char)
    assert len(items) == 6 and all(it.verdict == "PASS" for it in items)


def test_example1_mutated_ideal_fails_minimal_primes():
    items = by_name(build_example1(0, ["x^2", "y*z"]))
    assert items["3_minimal_primes"].verdict == "FAIL"


@pytest.mark.parametrize("char", [0, 101])
def test_example2_passes(char):
    items = by_name(build_example2(char))
    assert all(it.verdict == "PASS" for it in items.values())
    assert items["5_shrink"].evidence["iterations"] == 1


def test_example2_nilpotent_prime_fails_grade():
    items = by_name(build_example2(0, ["x"]))
    assert items["1_grade_positive"].verdict == "FAIL"
    assert items["5_shrink"].verdict == "FAIL"


def test_example2_larger_prime_shrinks():
    items = by_name(build_example2(0, ["t", "x", "y"]))
    ev = items["5_shrink"].evidence
    assert items["5_shrink"].verdict == "PASS"
    R = example2_ring()
    assert R.ideal_of(R.poly_ring(g) for g in ev["final_locus"]).locus_equal(ideal(R, "t", "x", "y"))


# ---------------------------------------------------------------------------
# the p^f family


@pytest.mark.parametrize("f", ["0", "t", "t^2 + z"])
def test_pf_member_certificates_pass(f):
    R = example3_ring()
    m = pf_member(R, f)
    assert m.ok, m.checks
    assert set(m.checks) == {"prime", "presents_ideal", "square_zero", "periodic_certificate",
                             "nonfree_locus", "indecomposable"}
    assert m.block == pf_block(R, R.poly_ring(f))


def test_pf_member_rejects_f_outside_subring():
    R = example3_ring()
    with pytest.raises(PreconditionError):
        pf_member(R, "x + t")


def test_pf_distinct_examples():
    R = example3_ring()
    assert not pf_distinct(R, "t", "t")
    assert pf_distinct(R, "t", "0")
    P = R.poly_ring
    assert pf_ideal(R, P("0")).gb != pf_ideal(R, P("t")).gb


def test_pf_distinct_on_sampled_pairs():
    R = example3_ring()
    fs = sample_family(R, 10, 3, 11)
    assert len(set(fs)) == 10
    for i in range(10):
        for j in range(i + 1, 10):
            assert pf_distinct(R, fs[i], fs[j])


def test_pf_equal_parameters_give_identical_records():
    R = example3_ring()
    a = member_payload(pf_member(R, "t", indecomposability=False))
    b = member_payload(pf_member(R, "(t + z) - z", indecomposability=False))
    assert not pf_distinct(R, "t", "(t + z) - z")
    for key in ("gb", "block", "certificate", "nonfree_ideal", "checks"):
        assert a[key] == b[key]


def test_example3_small_run():
    items = build_example3(count=3, max_degree=2, seed=1)
    assert len(items) == 3 + 3
    assert all(it.verdict == "PASS" for it in items)


# ---------------------------------------------------------------------------
# indecomposability


def test_free_rank_one_is_indecomposable():
    R = example2_ring()
    assert certify_indecomposable(ModulePresentation.free(R, 1), 2).verdict == "indecomposable"


def test_free_rank_two_is_inconclusive():
    R = example2_ring()
    assert certify_indecomposable(ModulePresentation.free(R, 2), 2).verdict == "inconclusive"


def test_pt_is_indecomposable():
    R = example3_ring()
    res = certify_indecomposable(ModulePresentation(R, pf_block(R, R.poly_ring("t"))), 3)
    assert res.verdict == "indecomposable"


def test_indecomposability_preconditions():
    from nonfree.algebra import GF
    from nonfree.modules import QuotientRing

    P = PolyRing(GF(5), ["a"])
    with pytest.raises(ValueError):
        certify_indecomposable(ModulePresentation.free(QuotientRing(P, []), 1))
    with pytest.raises(ValueError):
        certify_indecomposable(ModulePresentation.free(example2_ring(), 1), 0)


def _distinct_eigenvalue_count(M, truncation, rng, samples):
    """Largest number of distinct irreducible factors of the characteristic polynomial of
    left multiplication by a random element of the truncated endomorphism algebra."""
    basis, mult, _ = endomorphism_algebra(minimalize(M, local=False), truncation)
    D = len(basis)
    worst = 0
    lam = sympy.Symbol("lam")
    for _ in range(samples):
        a = [rng.randint(-3, 3) for _ in range(D)]
        L = sympy.zeros(D, D)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j in range(D):
                for c, v in mult[i][j].items():
                    L[c, j] += ai * sympy.Rational(int(v.numerator), int(v.denominator))
        _, factors = sympy.factor_list(L.charpoly(lam).as_expr(), lam)
        worst = max(worst, len(factors))
    return worst


def test_certified_modules_have_no_random_idempotents():
    # a local algebra has a single eigenvalue for every element; a split one does not
    R = example3_ring()
    rng = random.Random(5)
    for M in (ModulePresentation(R, pf_block(R, R.poly_ring("t"))), ModulePresentation.free(R, 1)):
        assert certify_indecomposable(M, 2).verdict == "indecomposable"
        assert _distinct_eigenvalue_count(M, 2, rng, 4) == 1
    assert _distinct_eigenvalue_count(ModulePresentation.free(R, 2), 1, rng, 4) == 2
