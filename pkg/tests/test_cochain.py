from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from stackcoh.cochain import (CapError, Cochain, build_complex, cohomology_dims, cup, differential,
                              dual_differential_matrix, module_action, pullback_map, scalar_cochain,
                              scalar_differential)
from stackcoh.corpus import groupoids, morphisms, ruths
from stackcoh.ruth import dual_ruth, genuine_rep, pullback_ruth, shift_ruth, trivial_rep

NAMES = sorted(ruths())
CAP = 4


@pytest.mark.parametrize("name", NAMES)
def test_dims_match_oracle(name):
    R = ruths()[name]
    got = cohomology_dims(R.base, R, CAP)
    assert got == oracles.dims_by_characters(R, sorted(got))


@pytest.mark.parametrize("name", NAMES)
def test_square_zero_and_normalized(name):
    R = ruths()[name]
    full = build_complex(R, CAP)
    norm = build_complex(R, CAP, normalized=True)
    assert full.check_square_zero() == [] and norm.check_square_zero() == []
    assert full.cohomology_dims() == norm.cohomology_dims()
    assert all(norm.dim(n) <= full.dim(n) for n in full.degrees)


@pytest.mark.parametrize("name", NAMES)
def test_dual_formula_matches_dual_rep(name):
    S = ruths()[name]
    P = build_complex(dual_ruth(S), 3)
    for n in range(P.first_degree, 3):
        assert dual_differential_matrix(S, n, P) == P.D[n]


@pytest.mark.parametrize("k", [-2, 1, 3])
def test_shift_moves_degrees(k):
    R = ruths()["pair2_two_term"]
    a = cohomology_dims(R.base, R, CAP + k + 2)
    b = cohomology_dims(R.base, shift_ruth(R, k), CAP + 2)
    for n, v in b.items():
        assert a.get(n + k, 0) == v


@pytest.mark.parametrize("g", ["z2", "z3", "pair2", "pair3", "cech4", "pair2xz2", "unit2"])
def test_trivial_matches_brute_force(g):
    G = groupoids()[g]
    assert cohomology_dims(G, trivial_rep(G), CAP) == oracles.trivial_cohomology(G, CAP - 1)


def test_classical_values():
    G = groupoids()
    for g in ("z2", "z3", "pair3"):
        assert cohomology_dims(G[g], trivial_rep(G[g]), 4) == {0: 1, 1: 0, 2: 0, 3: 0}
    R = ruths()["point_two_term_zero"]
    assert cohomology_dims(R.base, R, 1) == {-1: 1, 0: 1}
    assert cohomology_dims(G["cech5"], trivial_rep(G["cech5"]), 4) == {0: 2, 1: 0, 2: 0, 3: 0}


def test_cech_first_differential():
    from stackcoh.exactla import rank
    P = build_complex(trivial_rep(groupoids()["cech5"]), 2)
    assert (P.D[0].nrows, P.D[0].ncols, rank(P.D[0])) == (13, 5, 3)


def _genuine_reps():
    G = groupoids()
    out = [(G["z3"], [1], {0: [[1]], 1: [[1]], 2: [[1]]})]
    Z2 = G["z2"]
    out.append((Z2, [2], {0: [[1, 0], [0, 1]], 1: [[0, 1], [1, 0]]}))
    out.append((Z2, [1], {0: [[1]], 1: [[-1]]}))
    P = G["pair2"]
    B = [3, 7]
    out.append((P, [1, 1], {g: [[Fraction(B[P.tgt[g]], B[P.src[g]])]] for g in range(P.n_arrows)}))
    return out


@pytest.mark.parametrize("case", range(4))
def test_genuine_reps_match_oracle(case):
    G, dims, action = _genuine_reps()[case]
    R = genuine_rep(G, dims, action)
    assert cohomology_dims(G, R, 3) == oracles.genuine_cohomology(G, action, dims, 2)


@pytest.mark.parametrize("name,rep", [("cech5", "unit2_two_term"), ("cech4", "unit2_three_term"),
                                      ("pair3_pair2", "pair2_two_term"), ("pair3_point", None),
                                      ("pair2xz2_z2", "z2_two_term"), ("id_z3", "z3_trivial")])
def test_pullback_along_hypercover_is_quasi_iso(name, rep):
    phi = morphisms()[name]
    R = ruths()[rep] if rep else trivial_rep(phi.target)
    res = pullback_map(phi, R, 3)
    assert res.quasi_iso
    assert res.dims_source == res.dims_target


def test_pullback_along_z2_to_point_is_rationally_iso():
    # not a hypercover, but Z2 has no rational cohomology in positive degrees
    phi = morphisms()["z2_point"]
    R = ruths()["point_two_term_zero"]
    res = pullback_map(phi, R, 3)
    assert res.dims_source == res.dims_target
    assert res.quasi_iso


def test_pullback_along_z2_to_point_loses_sign_rep_information():
    # the sign rep is not pulled back from the point, and has no cohomology at all
    R = ruths()["z2_sign"]
    assert set(cohomology_dims(R.base, R, 4).values()) == {0}


def test_differential_of_a_cochain():
    R = ruths()["z2_trivial"]
    P = build_complex(R, 3)
    v = [Fraction(1)] * P.dim(0)
    c = P.cochain(0, v)
    assert P.vector(differential(c)) == P.D[0].apply(v)
    with pytest.raises(CapError):
        build_complex(R, 0)
    with pytest.raises(CapError):
        P.cohomology_dim(3)


def test_cup_and_module_action():
    G = groupoids()["z2"]
    one = scalar_cochain(G, 0, {(0,): 1})
    f = scalar_cochain(G, 1, {(0, 1): 5})
    assert cup(G, one, 0, f, 1) == f
    assert cup(G, f, 1, one, 0) == f
    g = scalar_cochain(G, 1, {(0, 0): 2, (0, 1): 3})
    R = trivial_rep(G)
    c = Cochain(R, 0, {(0, 0): {(0,): [Fraction(4)]}})
    acted = module_action(c, g, 1)
    assert acted.degree == 1
    assert acted.components[(1, 0)] == {(0, 0): [Fraction(8)], (0, 1): [Fraction(12)]}
    d0 = scalar_differential(G, one, 0)
    assert set(d0.values()) == {0}


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_scalar_differential_squares_to_zero(a, b):
    G = groupoids()["z2"]
    chains = G.nerve(1)
    f = {c: Fraction(x) for c, x in zip(chains, a)}
    df = scalar_differential(G, f, 1)
    assert set(scalar_differential(G, df, 2).values()) <= {0}
    h = {c: Fraction(x) for c, x in zip(G.nerve(0), b)}
    assert set(scalar_differential(G, scalar_differential(G, h, 0), 1).values()) <= {0}


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3), st.integers(-2, 2))
def test_pullback_of_trivial_along_pair_projection(n, k):
    from stackcoh.groupoid import GroupoidMorphism, pair_groupoid
    P = pair_groupoid(range(n + 1))
    U = groupoids()["unit1"]
    phi = GroupoidMorphism(P, U, [0] * P.n_objects, [0] * P.n_arrows)
    R = shift_ruth(trivial_rep(U), k)
    res = pullback_map(phi, R, 2 + max(k, 0))
    assert res.quasi_iso
    assert pullback_ruth(phi, R).same_data(shift_ruth(trivial_rep(P), k))
