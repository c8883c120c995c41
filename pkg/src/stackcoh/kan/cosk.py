"""
Relative coskeleta and the coskeleton tower of a hypercover.

cosk_m(X/Y)_n consists of pairs (a, y) with a: sk_m Delta^n -> X and
y in Y_n such that f a = y restricted to sk_m Delta^n.
"""

from __future__ import annotations

from ..ordinal import OrdinalMap, injective_monotone_maps, monotone_maps
from .classify import classify_sset_map
from .sset import (SimplicialMap, TruncatedSSet, compose_hom, from_tables, hom_space,
                   restrict_simplex, skeleton)


class UnsupportedTruncation(ValueError):
    pass


class CartesianError(RuntimeError):
    pass


def relative_coskeleton(f: SimplicialMap, m: int, cap=None):
    """(C, r, q): the relative coskeleton, the map r: X -> C and q: C -> Y."""
    X, Y = f.source, f.target
    cap = f.cap if cap is None else cap
    keys, sk = {}, {}
    for n in range(cap + 1):
        S = skeleton(n, m)
        sk[n] = S
        SS = S.sset()
        yidx = {}
        for y in range(Y.size(n)):
            yidx.setdefault(restrict_simplex(Y, n, y, S), []).append(y)
        lst = []
        for a in hom_space(SS, X):
            for y in yidx.get(compose_hom(f, SS, a), ()):
                lst.append((a, y))
        keys[n] = sorted(lst)

    pos = {n: {s: t for t, s in enumerate(sk[n].simplices)} for n in range(cap + 1)}

    def face_fn(n, i, key):
        a, y = key
        p = pos[n]
        new = tuple(a[p[tuple(v if v < i else v + 1 for v in s)]] for s in sk[n - 1].simplices)
        return (new, Y.faces[n][i][y])

    def degen_fn(n, j, key):
        a, y = key
        p = pos[n]
        new = []
        for s in sk[n + 1].simplices:
            img = [v if v <= j else v - 1 for v in s]
            rho = tuple(sorted(set(img)))
            e = OrdinalMap([rho.index(v) for v in img], len(rho) - 1)
            new.append(X.act(len(rho) - 1, a[p[rho]], e))
        return (tuple(new), Y.degens[n][j][y])

    C = from_tables(cap, keys, face_fn, degen_fn, name=f"cosk_{m}({X.name}/{Y.name})")
    index = {n: {k: t for t, k in enumerate(keys[n])} for n in range(cap + 1)}
    r = SimplicialMap(X, C, {n: [index[n][(restrict_simplex(X, n, x, sk[n]), f.f[n][x])]
                                 for x in range(X.size(n))] for n in range(cap + 1)},
                      name=f"X->cosk_{m}")
    q = SimplicialMap(C, Y, {n: [k[1] for k in keys[n]] for n in range(cap + 1)}, name=f"cosk_{m}->Y")
    C.skeleta = sk
    return C, r, q


def restriction_step(upper: TruncatedSSet, lower: TruncatedSSet, name=""):
    """cosk_m(X/Y) -> cosk_{m-1}(X/Y): restrict a to the smaller skeleton."""
    tables = {}
    for n in range(min(upper.cap, lower.cap) + 1):
        su, sl = upper.skeleta[n], lower.skeleta[n]
        p = {s: t for t, s in enumerate(su.simplices)}
        idx = {k: t for t, k in enumerate(lower.keys[n])}
        tables[n] = [idx[(tuple(a[p[s]] for s in sl.simplices), y)] for (a, y) in upper.keys[n]]
    return SimplicialMap(upper, lower, tables, name=name)


def simple_square(f: SimplicialMap, m: int, n: int, alphas="injective"):
    """Check that X_n -> Y_n x_{prod Y_m} prod X_m is bijective, the product
    running over alpha: [m] -> [n] (injective, or all monotone maps)."""
    X, Y = f.source, f.target
    maps = list(injective_monotone_maps(m, n) if alphas == "injective" else monotone_maps(m, n))
    fib = f.fibers(m)
    seen = set()
    for x in range(X.size(n)):
        key = (f.f[n][x],) + tuple(X.act(n, x, a) for a in maps)
        if key in seen:
            return False
        seen.add(key)
    total = 0
    for y in range(Y.size(n)):
        c = 1
        for a in maps:
            c *= len(fib.get(Y.act(n, y, a), ()))
        total += c
    return total == X.size(n)


def lemma_simple_squares(f: SimplicialMap, m: int, cap=None):
    """For n > m, which alpha index set makes the square cartesian: returns
    {n: 'injective' | 'all'}; raises CartesianError if neither does."""
    cap = f.cap if cap is None else cap
    out = {}
    for n in range(m + 1, cap + 1):
        if simple_square(f, m, n, "injective"):
            out[n] = "injective"
        elif simple_square(f, m, n, "all"):
            out[n] = "all"
        else:
            raise CartesianError(f"the square at level {n} over {m}-simplices is not cartesian")
    return out


def coskeletal_within_cap(X: TruncatedSSet, k: int):
    """X_n -> X^{sk_k Delta^n} is bijective for n <= cap."""
    for n in range(k + 1, X.cap + 1):
        S = skeleton(n, k)
        seen = set(restrict_simplex(X, n, x, S) for x in range(X.size(n)))
        if len(seen) != X.size(n) or len(hom_space(S.sset(), X)) != X.size(n):
            return False
    return True


class TowerStep:
    def __init__(self, m, map, flags, squares):
        self.m, self.map, self.flags, self.squares = m, map, flags, squares

    @property
    def trivial(self):
        return all(v["bijective"] for v in self.flags["levels"].values())

    @property
    def verified(self):
        return self.flags["hypercover"] and self.m in self.flags["m_simple"]


def coskeleton_tower(f: SimplicialMap, cap=None):
    """X = cosk_{cap-1}(X/Y) -> ... -> cosk_0(X/Y) -> cosk_{-1}(X/Y) = Y with
    every step checked to be an m-simple hypercover and every Lemma-simple
    square checked cartesian."""
    cap = f.cap if cap is None else cap
    X, Y = f.source, f.target
    for Z in (X, Y):
        if not coskeletal_within_cap(Z, cap - 1):
            raise UnsupportedTruncation(f"{Z.name} is not {cap - 1}-coskeletal within the cap")
    top, r_top, _ = relative_coskeleton(f, cap - 1, cap)
    if not all(sorted(r_top.f[n]) == list(range(top.size(n))) for n in range(cap + 1)):
        raise UnsupportedTruncation("X does not agree with its relative coskeleton at the cap")
    levels = {cap - 1: top}
    for m in range(cap - 2, -2, -1):
        levels[m] = relative_coskeleton(f, m, cap)[0]
    steps = []
    for m in range(cap - 1, -1, -1):
        g = restriction_step(levels[m], levels[m - 1], name=f"cosk_{m}->cosk_{m - 1}")
        flags = classify_sset_map(g, cap)
        squares = lemma_simple_squares(g, m, cap) if m in flags["m_simple"] else {}
        steps.append(TowerStep(m, g, flags, squares))
    # the composite X -> top -> ... -> bottom -> Y must be f
    comp = r_top
    for st in steps:
        comp = comp.then(st.map)
    bottom_to_y = SimplicialMap(levels[-1], Y, {n: [k[1] for k in levels[-1].keys[n]]
                                                for n in range(cap + 1)})
    comp = comp.then(bottom_to_y)
    if any(comp.f[n] != f.f[n] for n in range(cap + 1)):
        raise CartesianError("the tower does not compose to the original map")
    return Tower(f, r_top, steps, bottom_to_y)


class Tower:
    def __init__(self, f, entry, steps, exit_map):
        self.f, self.entry, self.steps, self.exit = f, entry, steps, exit_map

    @property
    def verified(self):
        return all(s.verified for s in self.steps)

    def nontrivial(self):
        return [s.m for s in self.steps if not s.trivial]
