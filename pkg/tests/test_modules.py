from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from nonfree.algebra import QQ, PolyRing
from nonfree.constructions import example1_ring, example2_ring
from nonfree.groebner import Submodule
from nonfree.modules import (
    ModulePresentation,
    NotCohenMacaulay,
    QuotientRing,
    ResolutionCapExceeded,
    annihilator,
    canonical_module,
    ext,
    hilbert_samuel,
    hom,
    kernel_mod,
    minimalize,
    module_dim_depth,
    resolve,
    syzygy,
    tor,
)
from nonfree.totref import certify_total_reflexivity_periodic

from oracles import Coeffs, socle_dimension


def hs(M, top=5):
    return [hilbert_samuel(M, d) for d in range(1, top + 1)]


def hypersurface():
    P = PolyRing(QQ, ["a", "b"])
    return QuotientRing(P, [P("a^2")])


def curve_ring():
    P = PolyRing(QQ, ["a", "b", "c"])
    return QuotientRing(P, [P("b^2 - a*c"), P("c^2 - a^2*b"), P("a^3 - b*c")])


def cyclic(R, *gens):
    P = R.poly_ring
    return ModulePresentation.cyclic(R, [P(g) for g in gens])


def matrix_module(R, rows):
    P = R.poly_ring
    return ModulePresentation(R, R.matrix([[P(a) if isinstance(a, str) else a for a in r] for r in rows]))


# ---------------------------------------------------------------------------
# minimalize and syzygies


def test_minimalize_unit_relation_gives_zero_module():
    R = example2_ring()
    assert minimalize(matrix_module(R, [[1]])).is_zero()


def test_minimalize_eliminates_one_generator():
    R = example2_ring()
    N = matrix_module(R, [["x"], ["1 + x"]])
    m = minimalize(N)
    assert (m.ngens, m.nrels) == (1, 0)


def test_omega_of_residue_pair_minimalized_presents_ideal():
    R = example2_ring()
    P = R.poly_ring
    raw = syzygy(cyclic(R, "x", "t"), 0)
    O = syzygy(cyclic(R, "x", "t"))
    assert O.ngens == 2
    as_ideal = ModulePresentation.ideal_module(R, [P("x"), P("t")])
    assert hs(minimalize(O)) == hs(O) == hs(as_ideal)
    assert raw.ngens == 1


def test_syzygy_of_x_over_example1_ring():
    R = example1_ring()
    O = syzygy(cyclic(R, "x"))
    assert O.ngens == 1
    assert annihilator(O) == R.ideal_of([R.poly_ring("x")])


def test_syzygy_of_free_module_is_zero():
    R = example2_ring()
    assert syzygy(ModulePresentation.free(R, 2)).is_zero()


def test_syzygy_of_mod_y_minus_zf_presents_pf():
    R = example2_ring()
    P = R.poly_ring
    O = syzygy(cyclic(R, "x", "y - z*t"))
    pf = ModulePresentation.ideal_module(R, [P("x"), P("y - z*t")])
    assert O.ngens == 2
    assert hs(O) == hs(pf)
    assert O.relation_submodule() == pf.relation_submodule()


def test_syzygy_rejects_negative_index():
    with pytest.raises(ValueError):
        syzygy(ModulePresentation.free(example2_ring(), 1), -1)


# ---------------------------------------------------------------------------
# Hom, Ext, Tor


def test_hom_from_free_is_identity():
    R = example2_ring()
    M = cyclic(R, "x", "y")
    assert hs(hom(ModulePresentation.free(R, 1), M)) == hs(M)


def test_hom_of_r_mod_x_into_r():
    R = example2_ring()
    H = hom(cyclic(R, "x"), ModulePresentation.free(R, 1))
    assert hs(H) == hs(cyclic(R, "x"))
    assert annihilator(H) == R.ideal_of([R.poly_ring("x")])


def test_hom_of_residue_of_positive_grade_ideal_vanishes():
    R = example2_ring()
    assert hom(cyclic(R, "t", "x"), ModulePresentation.free(R, 1)).is_zero()


def test_ext_of_free_vanishes():
    R = example2_ring()
    assert ext(ModulePresentation.free(R, 2), cyclic(R, "x"), 1).is_zero()


def test_ext1_of_m_and_omega_m_has_annihilator_x():
    R = example1_ring()
    M = cyclic(R, "x")
    E = ext(M, syzygy(M), 1)
    assert annihilator(E) == R.ideal_of([R.poly_ring("x")])


def test_ext1_of_r_mod_x_with_itself_is_nonzero():
    R = example2_ring()
    M = cyclic(R, "x")
    E = ext(M, M, 1)
    assert not E.is_zero()
    assert minimalize(E).ngens >= 1


def test_tor_of_free_vanishes():
    R = example2_ring()
    assert tor(ModulePresentation.free(R, 1), cyclic(R, "x", "y"), 1).is_zero()


def test_tor1_annihilator_over_hypersurface():
    R = hypersurface()
    M = syzygy(cyclic(R, "a"))
    assert annihilator(tor(M, M, 1)) == R.ideal_of([R.poly_ring("a")])


def test_tor1_of_r_mod_j_over_polynomial_ring():
    P = PolyRing(QQ, ["x", "y"])
    R = QuotientRing(P, [])
    M = cyclic(R, "x")
    T = tor(M, M, 1)
    assert hs(T) == hs(M)
    assert annihilator(T) == R.ideal_of([P("x")])


# ---------------------------------------------------------------------------
# annihilators, dimension and depth


def test_annihilator_examples():
    R = example2_ring()
    assert annihilator(cyclic(R, "x")) == R.ideal_of([R.poly_ring("x")])
    assert annihilator(ModulePresentation.free(R, 0)).is_unit()


def test_dim_depth_examples():
    assert module_dim_depth(ModulePresentation.free(example1_ring(), 1)) == (2, 1)
    R = example2_ring()
    assert module_dim_depth(ModulePresentation.free(R, 1)) == (3, 3)
    assert module_dim_depth(ModulePresentation.cyclic(R, R.maximal_ideal().gens)) == (0, 0)


def test_dim_depth_rejects_zero_module():
    with pytest.raises(ValueError):
        module_dim_depth(ModulePresentation.free(example2_ring(), 0))


# ---------------------------------------------------------------------------
# canonical modules, cross-checked with the type of an artinian reduction


def test_canonical_module_of_hypersurface_is_cyclic_free():
    K = canonical_module(hypersurface())
    assert (K.ngens, K.nrels) == (1, 0)
    F = Coeffs(0)
    # Q[a,b]/(a^2) modulo the regular element b
    assert socle_dimension([{(2, 0): Fraction(1)}, {(0, 1): Fraction(1)}], (1, 1), 4, F) == 1


def test_canonical_module_of_monomial_curve_has_two_generators():
    K = canonical_module(curve_ring())
    one = Fraction(1)
    gens = [{(0, 2, 0): one, (1, 0, 1): -one}, {(0, 0, 2): one, (2, 1, 0): -one},
            {(3, 0, 0): one, (0, 1, 1): -one}, {(1, 0, 0): one}]
    assert minimalize(K).ngens == socle_dimension(gens, (3, 4, 5), 20, Coeffs(0)) == 2


def test_canonical_module_of_regular_ring():
    P = PolyRing(QQ, ["x"])
    K = canonical_module(QuotientRing(P, []))
    assert (K.ngens, K.nrels) == (1, 0)


def test_canonical_module_rejects_non_cm_ring():
    with pytest.raises(NotCohenMacaulay):
        canonical_module(example1_ring())


# ---------------------------------------------------------------------------
# resolutions


def test_resolution_cap_is_reported():
    R = example2_ring()
    with pytest.raises(ResolutionCapExceeded):
        resolve(cyclic(R, "x", "t"), 10, cap=3)


def _random_module(data, R):
    P = R.poly_ring
    pool = ["x", "t", "y", "z", "x + t", "y - z*t", "t^2", "x*y", "0", "z"]
    g = data.draw(st.integers(1, 2))
    k = data.draw(st.integers(1, 2))
    rows = [[P(data.draw(st.sampled_from(pool))) for _ in range(k)] for _ in range(g)]
    return ModulePresentation(R, R.matrix(rows))


def _exact_at(R, d_out, d_in):
    """ker(d_out) = im(d_in) modulo I, checked by module membership both ways."""
    P = R.poly_ring
    rank = d_out.nrows
    ker = kernel_mod(R, rank, d_out.columns(), [])
    im = Submodule(P, d_in.nrows, d_in.columns() + R.ideal_columns(d_in.nrows))
    return all(im.contains(c) for c in ker)


@settings(max_examples=15)
@given(st.data())
def test_resolution_composites_vanish_and_are_exact(data):
    R = example2_ring()
    M = _random_module(data, R)
    F = resolve(M, 3)
    for a, b in zip(F.maps, F.maps[1:]):
        assert (a @ b).is_zero()
    for a, b in zip(F.maps[:-1], F.maps[1:]):
        if a.ncols:
            assert _exact_at(R, a, b)


@settings(max_examples=10)
@given(st.data())
def test_iterated_syzygy_matches_higher_syzygy(data):
    R = example2_ring()
    M = _random_module(data, R)
    assert hs(syzygy(syzygy(M)), 4) == hs(syzygy(M, 2), 4)


@settings(max_examples=10)
@given(st.data())
def test_hom_ext_tor_additive_on_free_summands(data):
    R = example2_ring()
    M = _random_module(data, R)
    N = cyclic(R, "x")
    F = ModulePresentation.free(R, 1)
    S = F.direct_sum(M)
    assert hs(hom(S, N), 4) == [a + b for a, b in zip(hs(hom(F, N), 4), hs(hom(M, N), 4))]
    assert hs(ext(S, N, 1), 4) == hs(ext(M, N, 1), 4)
    assert hs(tor(S, N, 1), 4) == hs(tor(M, N, 1), 4)


@settings(max_examples=15)
@given(st.data())
def test_annihilator_kills_every_generator(data):
    R = example2_ring()
    M = _random_module(data, R)
    P = R.poly_ring
    for a in annihilator(M).gens:
        for i in range(M.ngens):
            e = tuple(a if k == i else P.zero for k in range(M.ngens))
            assert M.is_zero_element(e)


def test_cm_and_non_cm_dim_depth():
    d, depth = module_dim_depth(ModulePresentation.free(hypersurface(), 1))
    assert d == depth
    d, depth = module_dim_depth(ModulePresentation.free(example1_ring(), 1))
    assert depth < d


def test_certified_modules_have_vanishing_ext_into_r():
    R = example2_ring()
    for M in (cyclic(R, "x"), matrix_module(R, [["x", "y - z*t"], [0, "-x"]])):
        cert = certify_total_reflexivity_periodic(M, 2)
        assert cert.unconditional
        F = resolve(M, 5)
        for i in range(1, 5):
            assert ext(M, ModulePresentation.free(R, 1), i, complex_=F).is_zero()
