"""
The semi-direct product of a groupoid and a representation, its linear
cochains, the projectable ones, and the regularity filtration.

    python3 demos/semidirect_products.py
"""

from stackcoh.corpus import ruths
from stackcoh.sdp.bundle import SdpBundle, verify_simplicial_identities
from stackcoh.sdp.filtration import Regularization, filtration_table, regularization_report
from stackcoh.sdp.linear import LambdaMap, LinearComplex, lambda_bijection, projectable_dims


def main():
    R = ruths()["pair2_two_term"]
    V = SdpBundle(R.base, R, 4)
    print("level sizes:", [V.level_dims(n) for n in range(4)])
    print("simplicial identities hold:", verify_simplicial_identities(V) == [])

    L = LinearComplex(V, 4)
    print("linear cochain dims:", [L.dim(n) for n in range(5)])
    print("H(C_lin):           ", L.cohomology_dims())
    print("H(C_proj):          ", projectable_dims(L))

    lam = LambdaMap(L)
    print("H(G, E*):           ", lam.P.cohomology_dims(start=0))
    print("lambda is a chain map:", not lam.chain_map_defects(),
          " bijective onto C_proj:", all(r["bijective"] for r in lambda_bijection(lam).values()))

    table = filtration_table(L, [0, 1, 2, 3])
    for m, row in table.items():
        print(f"  H(F_{m}) = {row}")
    for m in range(3):
        rep = regularization_report(L, m, reg=Regularization(L, m))
        print(f"  m={m}: tested {rep.tested} cochains, {rep.positive_defects} with positive defect, "
              f"{rep.certificates} primitives checked, ok={rep.passed}")


if __name__ == "__main__":
    main()
