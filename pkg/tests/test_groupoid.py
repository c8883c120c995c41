from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from stackcoh.corpus import CECH5, groupoids, morphisms
from stackcoh.groupoid import (GroupoidMorphism, build_example, chain_along, classify_morphism,
                               cyclic_group, from_data, identity_morphism, pair_groupoid, to_data,
                               unit_groupoid, validate_groupoid)


def test_examples():
    P = build_example("pair", {"objects": [1, 2, 3]})
    assert P.n_arrows == 9 and validate_groupoid(to_data(P)) == []
    assert build_example("cech", {"map": CECH5}).n_arrows == 13
    Z3 = build_example("group", {"table": [[0, 1, 2], [1, 2, 0], [2, 0, 1]]})
    assert (Z3.n_objects, Z3.n_arrows) == (1, 3)
    assert validate_groupoid(to_data(cyclic_group(2))) == []
    assert len(unit_groupoid([0, 1]).nerve(3)) == 2


def test_broken_table_is_reported():
    d = to_data(cyclic_group(3))
    # swap two products so associativity or the unit law fails
    d["compose"] = [list(t) for t in d["compose"]]
    d["compose"][1][2], d["compose"][2][2] = d["compose"][2][2], d["compose"][1][2]
    assert validate_groupoid(d)


@pytest.mark.parametrize("name", sorted(groupoids()))
def test_nerve_sizes_match_brute_force(name):
    G = groupoids()[name]
    for n in range(0, 4):
        assert sorted(G.nerve(n)) == sorted(oracles.composable_chains(G, n))


def _functions(l, n):
    return [tuple(v) for v in product(range(n + 1), repeat=l + 1)]


@pytest.mark.parametrize("name", ["pair3", "z3", "cech4"])
def test_chain_along_functorial(name):
    G = groupoids()[name]
    for n in range(0, 3):
        for g in G.nerve(n)[:12]:
            for m in range(0, 3):
                for beta in _functions(m, n):
                    h = chain_along(G, g, beta, allow_nonmonotone=True)
                    for l in range(0, 2):
                        for gamma in _functions(l, m):
                            comp = tuple(beta[v] for v in gamma)
                            assert chain_along(G, h, gamma, allow_nonmonotone=True) == \
                                chain_along(G, g, comp, allow_nonmonotone=True)


def test_chain_along_rejects_nonmonotone():
    G = groupoids()["pair2"]
    with pytest.raises(ValueError):
        chain_along(G, G.nerve(1)[0], (1, 0))


@pytest.mark.parametrize("name", sorted(morphisms()))
def test_classification(name):
    phi = morphisms()[name]
    f = classify_morphism(phi)
    assert f["FF"] == oracles.fully_faithful(phi)
    assert f["F1"] == oracles.surjective_on_objects(phi)
    if f["hypercover"]:
        assert f["fibration"] and f["morita"]


def test_non_hypercover_flags():
    f = classify_morphism(morphisms()["z2_point"])
    assert f["functor_ok"] and not f["FF"] and not f["hypercover"]


def test_broken_functor():
    G = groupoids()["z2"]
    Z3 = groupoids()["z3"]
    phi = GroupoidMorphism(Z3, G, [0], [0, 1, 1])
    assert classify_morphism(phi).get("violations")


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.data())
def test_pair_to_pair_is_hypercover(k, data):
    # any surjection of finite sets induces a hypercover of pair groupoids
    src = list(range(k + data.draw(st.integers(0, 2))))
    obj = [data.draw(st.integers(0, k - 1)) for _ in src]
    obj[:k] = list(range(k))
    P, Q = pair_groupoid(src), pair_groupoid(range(k))
    arrows = [Q.arrow_index[f"({obj[y]},{obj[x]})"] for x, y in
              [(P.src[g], P.tgt[g]) for g in range(P.n_arrows)]]
    phi = GroupoidMorphism(P, Q, obj, arrows)
    f = classify_morphism(phi)
    assert f["hypercover"] and f["fibration"] and f["morita"]
    assert f["FF"] == oracles.fully_faithful(phi)


def test_identity_and_composition():
    phi = morphisms()["pair3_pair2"]
    assert classify_morphism(identity_morphism(phi.source))["hypercover"]
    comp = identity_morphism(phi.source).then(phi)
    assert comp.object_map == phi.object_map and comp.arrow_map == phi.arrow_map


def test_round_trip():
    for G in groupoids().values():
        H = from_data(to_data(G))
        assert to_data(H) == to_data(G)
