from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from stackcoh.cochain import build_complex
from stackcoh.corpus import groupoids, morphisms, nonnegative, ruths
from stackcoh.exactla import rank
from stackcoh.ruth import dual_ruth, genuine_rep, trivial_rep
from stackcoh.sdp.bundle import (CartesianError, SdpBundle, SdpPreconditionError, sdp_pullback,
                                 verify_simplicial_identities)
from stackcoh.sdp.filtration import (Regularization, filtration_cohomology, lemma_h_failures,
                                     regularization_report)
from stackcoh.sdp.linear import (DomainError, LambdaMap, LinearComplex, differential_from_faces,
                                 differential_from_formula, is_projectable, lambda_bijection,
                                 lin_delta, projectability, projectable_dims)
from stackcoh.sdp.poly import PolynomialComplex, matches_linear, matches_scalar, poly_split

SMALL = ["z2_trivial", "z2_sign", "pair2_two_term", "z2_two_term", "unit2_three_term",
         "point_two_term_zero", "pair2_two_term_shift"]


@pytest.mark.parametrize("name", SMALL)
def test_simplicial_identities(name):
    R = ruths()[name]
    V = SdpBundle(R.base, R, 3)
    assert verify_simplicial_identities(V) == []


@pytest.mark.parametrize("name", SMALL)
def test_differential_paths_agree_and_square_zero(name):
    R = ruths()[name]
    L = LinearComplex(SdpBundle(R.base, R, 3), 3)
    for n in range(0, 3):
        assert differential_from_faces(L, n) == differential_from_formula(L, n)
    for n in range(0, 2):
        assert (L.D[n + 1] @ L.D[n]).is_zero()


def test_negative_degrees_refused():
    R = ruths()["pair2_two_term_dual"]
    with pytest.raises(SdpPreconditionError):
        SdpBundle(R.base, R, 2)


def test_broken_simplicial_identity_is_reported():
    R = ruths()["z2_two_term"].copy()
    R.blocks = {k: v for k, v in R.blocks.items() if k[0] != 2}
    V = SdpBundle(R.base, R, 3)
    assert verify_simplicial_identities(V) != []


@pytest.mark.parametrize("name", ["z2_trivial", "pair2_two_term", "z2_two_term", "unit2_three_term"])
def test_lambda_bijection_and_chain_map(name):
    R = ruths()[name]
    L = LinearComplex(SdpBundle(R.base, R, 4), 4)
    lam = LambdaMap(L)
    assert lam.chain_map_defects() == []
    table = lambda_bijection(lam)
    assert all(row["bijective"] for row in table.values())
    assert projectable_dims(L) == lam.P.cohomology_dims(start=0)
    for n in range(0, 3):
        for col in lam.M[n].columns_as_dicts():
            v = [Fraction(0)] * L.dim(n)
            for t, x in col.items():
                v[t] = x
            pre = lam.inverse(n, v)
            assert lam(n, pre) == v
            assert projectability(L, n, v)["projectable"]


def test_lambda_inverse_refuses_non_projectable():
    R = ruths()["pair2_two_term"]
    L = LinearComplex(SdpBundle(R.base, R, 3), 3)
    lam = LambdaMap(L)
    nonreg = [t for t, ok in enumerate(L.regular_mask(2)) if not ok]
    v = [Fraction(0)] * L.dim(2)
    v[nonreg[0]] = Fraction(1)
    assert not is_projectable(L, 2, v)
    with pytest.raises(DomainError):
        lam.inverse(2, v)


@pytest.mark.parametrize("name", ["pair2_two_term", "z2_two_term", "pair3_two_term_pullback"])
def test_filtration_constant(name):
    R = ruths()[name]
    out = filtration_cohomology(R.base, R, 4, ms=range(0, 4))
    assert out["constant"]
    assert out["table"][0] == out["lin"] == out["proj"]


@pytest.mark.parametrize("name", ["z2_trivial", "pair2_two_term"])
@pytest.mark.parametrize("m", [0, 1, 2])
def test_regularization(name, m):
    R = ruths()[name]
    L = LinearComplex(SdpBundle(R.base, R, 4), 4)
    reg = Regularization(L, m)
    rep = regularization_report(L, m, stop=3, reg=reg)
    assert rep.passed, rep.failures
    assert rep.tested > 0
    for n in range(m + 1, 4):
        assert lemma_h_failures(L, m, n, reg) == []


def test_regularization_refuses_irregular_input():
    R = ruths()["pair2_two_term"]
    L = LinearComplex(SdpBundle(R.base, R, 3), 3)
    reg = Regularization(L, 1)
    nonreg = [t for t, ok in enumerate(L.regular_mask(2, 1)) if not ok]
    v = [Fraction(0)] * L.dim(2)
    v[nonreg[0]] = Fraction(1)
    with pytest.raises(DomainError):
        reg.regularize(2, v)


@pytest.mark.parametrize("name", ["z2_trivial", "pair2_two_term", "z2_two_term"])
def test_polynomial_degrees(name):
    R = ruths()[name]
    V = SdpBundle(R.base, R, 3)
    P = poly_split(V, [0, 1], 3)
    assert P[0].square_zero() and P[1].square_zero()
    assert matches_scalar(P[0])
    assert matches_linear(P[1], LinearComplex(V, 3))


def test_quadratic_polynomials_on_genuine_rep():
    P2 = groupoids()["pair2"]
    B = [2, 3]
    R = genuine_rep(P2, [2, 2], {g: [[Fraction(B[P2.tgt[g]], B[P2.src[g]]), 0], [0, 1]]
                                 for g in range(P2.n_arrows)})
    Q = PolynomialComplex(SdpBundle(P2, R, 3), 2, 3)
    assert Q.square_zero()
    assert Q.dim(0) == 2 * 3   # two objects, three quadratic monomials in two variables
    assert set(Q.cohomology_dims(stop=2)) == {0, 1, 2}


@pytest.mark.parametrize("name,rep", [("cech5", "unit2_two_term"), ("pair3_pair2", "pair2_two_term"),
                                      ("id_z3", "z3_trivial")])
def test_sdp_pullback_cartesian(name, rep):
    sp = sdp_pullback(morphisms()[name], ruths()[rep], 3)
    assert sp.cartesian and sp.linear_hypercover


def test_sdp_pullback_detects_wrong_rep():
    phi = morphisms()["pair3_pair2"]
    R = ruths()["pair2_two_term"]
    wrong = trivial_rep(phi.source)
    with pytest.raises(CartesianError):
        sdp_pullback(phi, R, 2, Rp=wrong)


def test_lin_delta_checked():
    R = ruths()["pair2_two_term"]
    L = LinearComplex(SdpBundle(R.base, R, 3), 3)
    v = [Fraction(t % 3) for t in range(L.dim(1))]
    assert lin_delta(L, 1, v) == L.D[1].apply(v)


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 2))
def test_genuine_pair2_sdp_properties(a, b, m):
    P2 = groupoids()["pair2"]
    B = [a, b]
    R = genuine_rep(P2, [1, 1], {g: [[Fraction(B[P2.tgt[g]], B[P2.src[g]])]] for g in range(P2.n_arrows)})
    V = SdpBundle(P2, R, 3)
    assert verify_simplicial_identities(V) == []
    L = LinearComplex(V, 3)
    assert all(differential_from_faces(L, n) == differential_from_formula(L, n) for n in range(3))
    dims = L.cohomology_dims()
    assert dims == build_complex(nonnegative(dual_ruth(R)), 3).cohomology_dims(start=0)
