"""
Cohomology of a few finite groupoids with trivial and non-trivial
coefficients, checked against the fact that finite groups have no
rational cohomology in positive degrees.

    python3 demos/classical_cohomology.py
"""

from stackcoh.cochain import build_complex, cohomology_dims
from stackcoh.corpus import groupoids, ruths
from stackcoh.ruth import trivial_rep


def show(label, dims):
    row = "  ".join(f"H^{n}={d}" for n, d in sorted(dims.items()))
    print(f"{label:28} {row}")


def main():
    G = groupoids()
    print("trivial coefficients, degrees 0..3")
    for name in ("z2", "z3", "pair3", "cech5", "pair2xz2"):
        show(G[name].name, cohomology_dims(G[name], trivial_rep(G[name]), 4))

    print("\nthe sign representation of Z2 has no invariants and no cohomology")
    R = ruths()["z2_sign"]
    show(R.name, cohomology_dims(R.base, R, 4))

    print("\na two-term complex Q -> Q with zero differential over a point")
    R = ruths()["point_two_term_zero"]
    show(R.name, cohomology_dims(R.base, R, 1))

    print("\nnormalized cochains are smaller but give the same answer")
    R = ruths()["pair2_two_term"]
    full, norm = build_complex(R, 4), build_complex(R, 4, normalized=True)
    for n in range(-1, 4):
        print(f"  degree {n:2}: {full.dim(n):4} cochains, {norm.dim(n):4} normalized")
    show("full", full.cohomology_dims())
    show("normalized", norm.cohomology_dims())


if __name__ == "__main__":
    main()
