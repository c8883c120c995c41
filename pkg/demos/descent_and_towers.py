"""
Descent along hypercovers of simplicial sets.  A simple hypercover comes
with an explicit transfer and homotopy; a general one is split into simple
steps by its relative coskeleton tower.

    python3 demos/descent_and_towers.py
"""

from stackcoh.corpus import sset_maps
from stackcoh.kan.classify import classify_sset_map
from stackcoh.kan.cosk import coskeleton_tower
from stackcoh.kan.descent import descent_verify


def main():
    maps = sset_maps()
    for name in ("pair3_point", "cech4_unit2", "id_z2"):
        f = maps[name]
        D = descent_verify(f)
        print(f"{name:12} m={D.m} verdicts={D.verdicts} H(X)={D.dims_x} H(Y)={D.dims_y}")

    f = maps["graph_point"]
    print("\ngraph_point is simple for m in", classify_sset_map(f)["m_simple"])
    T = coskeleton_tower(f)
    for st in T.steps:
        sizes = [st.map.source.size(n) for n in range(f.cap + 1)]
        print(f"  step {st.m}: simple={st.verified} trivial={st.trivial} sizes={sizes} alpha={st.squares}")
        if st.verified:
            print("          descent:", descent_verify(st.map, f.cap, st.m).verdicts)


if __name__ == "__main__":
    main()
