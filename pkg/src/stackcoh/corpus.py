"""
Bundled examples: small groupoids, representations up to homotopy,
morphisms and maps of simplicial sets used by the tests, the demos and
the command line.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

from .groupoid import (cech_groupoid, cech_projection, cyclic_group, identity_morphism,
                       morphism_from_maps, pair_groupoid, product_groupoid, unit_groupoid,
                       GroupoidMorphism)
from .ruth import (chain_complex_rep, complete_two_term, dual_ruth, genuine_rep, pullback_ruth,
                   shift_ruth, trivial_rep, two_term_data)

CECH5 = {0: 0, 1: 0, 2: 0, 3: 1, 4: 1}
CECH4 = {0: 0, 1: 0, 2: 1, 3: 1}


@lru_cache(maxsize=None)
def groupoids():
    G = {
        "unit1": unit_groupoid([0], name="unit(1)"),
        "unit2": unit_groupoid([0, 1], name="unit(2)"),
        "pair2": pair_groupoid(range(2), name="Pair(2)"),
        "pair3": pair_groupoid(range(3), name="Pair(3)"),
        "z2": cyclic_group(2, name="Z2"),
        "z3": cyclic_group(3, name="Z3"),
    }
    G["cech5"] = cech_groupoid(CECH5, name="Cech(5->2)")
    G["cech4"] = cech_groupoid(CECH4, name="Cech(4->2)")
    G["pair2xz2"] = product_groupoid(G["pair2"], G["z2"], name="Pair(2)xZ2")
    return G


def _pair_map(G, H, obj):
    arrows = {f"({y},{x})": f"({obj[y]},{obj[x]})" for y in range(G.n_objects) for x in range(G.n_objects)}
    return morphism_from_maps(G, H, {o: obj[o] for o in G.object_labels}, arrows)


@lru_cache(maxsize=None)
def morphisms():
    G = groupoids()
    M = {
        "cech5": cech_projection(G["cech5"], CECH5, G["unit2"]),
        "cech4": cech_projection(G["cech4"], CECH4, G["unit2"]),
        "pair3_pair2": _pair_map(G["pair3"], G["pair2"], {0: 0, 1: 1, 2: 1}),
        "pair3_point": GroupoidMorphism(G["pair3"], G["unit1"], [0] * 3, [0] * 9, name="Pair(3)->point"),
        "id_z3": identity_morphism(G["z3"]),
    }
    Z, PZ = G["z2"], G["pair2xz2"]
    # the product is indexed (pair arrow, group element) in row-major order
    M["pair2xz2_z2"] = GroupoidMorphism(PZ, Z, [0] * PZ.n_objects,
                                        [k % Z.n_arrows for k in range(PZ.n_arrows)],
                                        name="Pair(2)xZ2->Z2")
    # not a hypercover: Z2 -> point is not fully faithful
    M["z2_point"] = GroupoidMorphism(Z, G["unit1"], [0], [0, 0], name="Z2->point")
    for k, phi in M.items():
        phi.name = phi.name or k
    return M


def _pair2_two_term():
    """Pair(2), E_1 = Q^2, E_0 = Q, anchor (1 0); the quasi-action is not
    functorial on E_1, so the completion has R_2 != 0."""
    P2 = groupoids()["pair2"]
    R = two_term_data(P2, [2, 2], [1, 1], {0: [[1, 0]], 1: [[1, 0]]},
                      {2: [[1, 0], [1, 1]], 1: [[1, 0], [0, 1]]}, {2: [[1]], 1: [[1]]},
                      name="pair2-two-term")
    return complete_two_term(R)


def _z2_two_term():
    """Z2, E_1 = E_0 = Q, anchor 1, R_1(s) = 2: homotopy-coherent only up to R_2."""
    Z2 = groupoids()["z2"]
    R = two_term_data(Z2, [1], [1], {0: [[1]]}, {1: [[2]]}, {1: [[2]]}, name="z2-two-term")
    return complete_two_term(R)


@lru_cache(maxsize=None)
def ruths():
    """name -> representation; every one satisfies the axioms."""
    G, M = groupoids(), morphisms()
    R = {
        "z2_trivial": trivial_rep(G["z2"], name="z2-trivial"),
        "z3_trivial": trivial_rep(G["z3"], name="z3-trivial"),
        "pair3_trivial": trivial_rep(G["pair3"], name="pair3-trivial"),
        "z2_sign": genuine_rep(G["z2"], [1], {0: [[1]], 1: [[-1]]}, name="z2-sign"),
        "z2_sign_deg2": genuine_rep(G["z2"], [1], {0: [[1]], 1: [[-1]]}, degree=2, name="z2-sign[2]"),
        "pair2_two_term": _pair2_two_term(),
        "z2_two_term": _z2_two_term(),
        "unit2_three_term": chain_complex_rep(G["unit2"], 0, 2, [[1, 2, 1], [1, 1, 1]],
                                              {0: {1: [[1, 0]], 2: [[0], [1]]}, 1: {2: [[1]]}},
                                              name="unit2-three-term"),
        "point_two_term_zero": chain_complex_rep(G["unit1"], 0, 1, [[1, 1]], {0: {}},
                                                 name="point-two-term"),
        "unit2_two_term": chain_complex_rep(G["unit2"], 0, 1, [[1, 1], [1, 1]], {0: {1: [[1]]}, 1: {}},
                                            name="unit2-two-term"),
        "pair2xz2_trivial": trivial_rep(G["pair2xz2"], name="pair2xz2-trivial"),
    }
    R["pair2_two_term_dual"] = dual_ruth(R["pair2_two_term"])
    R["unit2_three_term_dual"] = dual_ruth(R["unit2_three_term"])
    R["pair2_two_term_shift"] = shift_ruth(R["pair2_two_term"], 1)
    R["pair3_two_term_pullback"] = pullback_ruth(M["pair3_pair2"], R["pair2_two_term"])
    R["cech5_two_term_pullback"] = pullback_ruth(M["cech5"], R["unit2_two_term"])
    for k, r in R.items():
        r.name = k
    return R


def nonnegative(R):
    """The rep itself when its degrees are >= 0, else its shift into degrees >= 0."""
    return R if R.lo >= 0 else shift_ruth(R, -R.lo)


# ----------------------------------------------------------------------
# simplicial sets

def graph_coskeleton(cap=3):
    """cosk_1 of the directed graph with vertices a, b, a loop l at a and
    edges a -> b, b -> a.  Over a point this is a hypercover that is not
    m-simple for any m: both X_0 and X_1 have non-trivial fibres."""
    from .kan.sset import from_tables
    edges = {("a", "a"): ["1", "l"], ("a", "b"): ["e"], ("b", "a"): ["f"], ("b", "b"): ["1"]}
    keys = {}
    for n in range(cap + 1):
        pairs = list(combinations(range(n + 1), 2))
        out = [((), ())]
        for v in range(n + 1):
            out = [(vs + (x,), es) for vs, es in out for x in "ab"]
        full = []
        for vs, _ in out:
            partial = [()]
            for i, j in pairs:
                partial = [p + (e,) for p in partial for e in edges[(vs[i], vs[j])]]
            full.extend((vs, p) for p in partial)
        keys[n] = sorted(full)

    def face_fn(n, i, key):
        vs, es = key
        pairs = list(combinations(range(n + 1), 2))
        keep = [e for (p, q), e in zip(pairs, es) if i not in (p, q)]
        return (vs[:i] + vs[i + 1:], tuple(keep))

    def degen_fn(n, j, key):
        vs, es = key
        lookup = dict(zip(combinations(range(n + 1), 2), es))
        sig = [p if p <= j else p - 1 for p in range(n + 2)]
        new = []
        for p, q in combinations(range(n + 2), 2):
            new.append("1" if sig[p] == sig[q] else lookup[(sig[p], sig[q])])
        return (vs[:j + 1] + vs[j:], tuple(new))

    return from_tables(cap, keys, face_fn, degen_fn, name="cosk1(graph)")


@lru_cache(maxsize=None)
def sset_maps(cap=3):
    """name -> SimplicialMap between truncated simplicial sets."""
    from .kan.sset import identity_map, nerve_map, nerve_sset, terminal_map
    G, M = groupoids(), morphisms()
    N = {k: nerve_sset(G[k], cap) for k in ("unit2", "pair2", "pair3", "z2", "cech4")}
    out = {
        "pair3_point": terminal_map(N["pair3"]),
        "cech4_unit2": nerve_map(M["cech4"], N["cech4"], N["unit2"]),
        "pair3_pair2": nerve_map(M["pair3_pair2"], N["pair3"], N["pair2"]),
        "id_z2": identity_map(N["z2"]),
        "graph_point": terminal_map(graph_coskeleton(cap)),
    }
    for k, f in out.items():
        f.name = k
    return out


# nerve-level hypercovers whose descent is checked step by step
SIMPLE_HYPERCOVERS = ("pair3_point", "cech4_unit2", "pair3_pair2", "id_z2")
NON_SIMPLE_HYPERCOVERS = ("graph_point",)


def write_files(directory):
    """Write every bundled example as a JSON file; representations and
    morphisms refer to their groupoids by relative path."""
    import os
    from .fileio import (dumps, groupoid_to_data, morphism_to_data, rep_to_data, sset_map_to_data)
    os.makedirs(directory, exist_ok=True)
    G = groupoids()
    gname = {id(g): k for k, g in G.items()}
    written = []

    def put(name, data):
        path = os.path.join(directory, name + ".json")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(dumps(data))
        written.append(path)

    for k, g in G.items():
        put(f"groupoid_{k}", groupoid_to_data(g))
    for k, phi in morphisms().items():
        put(f"morphism_{k}", morphism_to_data(phi, f"groupoid_{gname[id(phi.source)]}.json",
                                              f"groupoid_{gname[id(phi.target)]}.json"))
    for k, R in ruths().items():
        put(f"rep_{k}", rep_to_data(R, f"groupoid_{gname[id(R.base)]}.json"))
    for k, f in sset_maps().items():
        put(f"ssetmap_{k}", sset_map_to_data(f))
    return written
