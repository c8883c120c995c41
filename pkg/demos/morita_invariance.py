"""
Cohomology does not change along a hypercover.  The Cech groupoid of
{0,1,2,3,4} -> {0,1} maps to the unit groupoid on two points; pulling a
two-term complex back and computing three ways gives the same numbers.

    python3 demos/morita_invariance.py
"""

import time

from stackcoh.corpus import morphisms, ruths
from stackcoh.groupoid import classify_morphism
from stackcoh.morita import morita_pipeline
from stackcoh.ruth import trivial_rep


def main():
    phi = morphisms()["cech5"]
    print("classification:", {k: v for k, v in classify_morphism(phi).items() if isinstance(v, bool)})
    for R in (trivial_rep(phi.target), ruths()["unit2_two_term"]):
        t0 = time.perf_counter()
        M = morita_pipeline(phi, R, cap=4, start=-2)
        print(f"\n{R.name} over {phi.target.name}  ({time.perf_counter() - t0:.1f} s)")
        print("  degrees          ", M.degrees)
        for name in ("direct", "proj", "lin"):
            print(f"  {name:7} base     ", M.row(name, "source"))
            print(f"  {name:7} cover    ", M.row(name, "target"))
        print("  all verdicts pass:", M.passed)

    print("\nZ2 -> point is not a hypercover (not fully faithful):")
    print(" ", {k: v for k, v in classify_morphism(morphisms()["z2_point"]).items() if isinstance(v, bool)})


if __name__ == "__main__":
    main()
