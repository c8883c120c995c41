"""
Representations up to homotopy: completing a two-term quasi-action by a
curvature term, dualising, and what happens when a block is changed.

    python3 demos/homotopy_representations.py
"""

from stackcoh.corpus import groupoids
from stackcoh.exactla import RationalMatrix
from stackcoh.ruth import (InfeasibleCompletion, check_ruth, complete_two_term, dual_ruth,
                           two_term_data)


def main():
    P = groupoids()["pair2"]
    # E_1 = Q^2, E_0 = Q, anchor (1 0); the arrow (1,0) acts on E_1 by a shear,
    # so R_1 is functorial only up to a homotopy R_2
    R = two_term_data(P, [2, 2], [1, 1], {0: [[1, 0]], 1: [[1, 0]]},
                      {2: [[1, 0], [1, 1]], 1: [[1, 0], [0, 1]]}, {2: [[1]], 1: [[1]]})
    print("quasi-action alone:", len(check_ruth(R)), "violated equations")
    C = complete_two_term(R)
    print("after completion:  ", len(check_ruth(C)), "violated equations")
    for (m, chain, n), M in sorted(C.blocks.items()):
        if m == 2 and not M.is_zero():
            print(f"  R_2 on {P.label_chain(chain)} in degree {n}: {M.to_strings()}")

    D = dual_ruth(C)
    print("dual lives in degrees", (D.lo, D.hi), "and is valid:", check_ruth(D) == [])

    # with a zero anchor the defect R_1(g) R_1(g^-1) = 4 cannot be absorbed
    bad = two_term_data(P, [1, 1], [1, 1], {0: None, 1: None}, {1: [[2]], 2: [[2]]},
                        {1: [[1]], 2: [[1]]})
    try:
        complete_two_term(bad)
    except InfeasibleCompletion as e:
        print("zero anchor:", e)

    S = C.copy()
    S.blocks = dict(C.blocks)
    key = (0, (0,), 1)
    S.blocks[key] = C.block(*key) + RationalMatrix.from_rows([[0, 1]])
    first = check_ruth(S)[0]
    print("changing the anchor at object 0 breaks", first["axiom"], "at level", first["m"])


if __name__ == "__main__":
    main()
