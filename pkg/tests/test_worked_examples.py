"""Small worked examples whose values are known in closed form."""

import pytest

from stackcoh.corpus import groupoids, ruths
from stackcoh.groupoid import (GroupoidError, GroupoidMorphism, cech_groupoid, cech_projection,
                               chain_along, classify_morphism, eta_values, inverse_chain,
                               pair_groupoid, unit_groupoid)
from stackcoh.ruth import chain_complex_rep, check_ruth
from stackcoh.sdp.bundle import SdpBundle, verify_simplicial_identities


def _chain(G, arrows):
    return G.make_chain([G.arrow_index[a] for a in arrows])


def test_reversal_inverts_each_arrow():
    G = pair_groupoid(range(3))
    g = _chain(G, ["(1,0)", "(2,1)"])
    h = chain_along(G, g, [2, 1, 0], allow_nonmonotone=True)
    assert h == inverse_chain(G, g)
    assert [G.arrow_labels[a] for a in h[1:]] == ["(1,2)", "(0,1)"]


def test_eta_chain_for_n3_m1():
    # g = (g3, g2, g1) acting on 0 -> 1 -> 2 -> 3 in Pair(4); g eta read from
    # its first arrow is (g3 g2 g1, (g3 g2)^{-1}, g2, g3)
    G = pair_groupoid(range(4))
    g = _chain(G, ["(1,0)", "(2,1)", "(3,2)"])
    assert eta_values(1, 3) == (0, 3, 1, 2, 3)
    ge = chain_along(G, g, eta_values(1, 3), allow_nonmonotone=True)
    assert [G.arrow_labels[a] for a in ge[1:]] == ["(3,0)", "(1,3)", "(2,1)", "(3,2)"]


def test_eta_on_a_group():
    Z = groupoids()["z3"]
    g1, g2, g3 = 1, 2, 1
    g = (0, g1, g2, g3)
    ge = chain_along(Z, g, eta_values(1, 3), allow_nonmonotone=True)
    prod = Z.mul(g3, Z.mul(g2, g1))
    assert ge == (0, prod, Z.inv[Z.mul(g3, g2)], g2, g3)


@pytest.mark.parametrize("p,surjective", [({0: 0, 1: 0, 2: 1}, True), ({0: 0, 1: 0}, False)])
def test_cech_hypercover_iff_surjective(p, surjective):
    B = unit_groupoid([0, 1])
    G = cech_groupoid(p, base=[0, 1], allow_nonsurjective=True)
    flags = classify_morphism(cech_projection(G, p, B))
    assert flags["hypercover"] == surjective
    assert flags["FF"]
    if not surjective:
        with pytest.raises(GroupoidError):
            cech_groupoid(p, base=[0, 1])


def test_isotropy_inclusion_is_morita_not_surjective():
    Z, PZ = groupoids()["z2"], groupoids()["pair2xz2"]
    # arrows of the product are (pair arrow, group element), pair arrow (0,0) first
    phi = GroupoidMorphism(Z, PZ, [0], [0, 1])
    assert phi.violations() == []
    flags = classify_morphism(phi)
    assert flags["morita"] and not flags["F1"] and not flags["hypercover"]


def test_chain_complex_sdp_identities_to_level_4():
    R = ruths()["unit2_three_term"]
    assert verify_simplicial_identities(SdpBundle(R.base, R, 4), first_only=False) == []
    U = groupoids()["unit1"]
    C = chain_complex_rep(U, 0, 2, [[2, 2, 1]], {0: {1: [[0, 1], [0, 0]], 2: [[1], [0]]}})
    assert check_ruth(C) == []
    assert verify_simplicial_identities(SdpBundle(U, C, 4), first_only=False) == []
