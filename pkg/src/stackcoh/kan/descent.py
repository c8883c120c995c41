"""
Descent along a simple hypercover of finite simplicial sets.

For an m-simple hypercover f: X -> Y the counting measure gives weights
mu(x) = 1/|f_m^{-1}(f x)| on X_m, product weights on X_n for n > m, and
the fibre sum mu_*: C(X) -> C(Y).  The path space P(X/Y) of prisms lying
over degenerate cylinders carries the pulled-back weights, and the prism
operator yields a homotopy h with id - f^* mu_* = delta h + h delta.
"""

from __future__ import annotations

from fractions import Fraction

from ..exactla import RationalMatrix, rank
from ..ordinal import OrdinalMap, injective_monotone_maps, monotone_maps
from .classify import classify_sset_map
from .cosk import CartesianError, lemma_simple_squares
from .sset import SimplicialMap, TruncatedSSet, hom_space, prism


class NotSimple(ValueError):
    pass


def cochain_differential(X: TruncatedSSet, n):
    """(delta phi)(x) = sum_i (-1)^i phi(d_i x) from C^n(X) to C^{n+1}(X)."""
    entries = []
    for x in range(X.size(n + 1)):
        for i in range(n + 2):
            entries.append((x, X.faces[n + 1][i][x], -1 if i % 2 else 1))
    return RationalMatrix.from_entries(X.size(n + 1), X.size(n), entries)


def cohomology_dims(X: TruncatedSSet, stop):
    D = {n: cochain_differential(X, n) for n in range(0, stop + 1)}
    out = {}
    for n in range(0, stop + 1):
        out[n] = X.size(n) - rank(D[n]) - (rank(D[n - 1]) if n > 0 else 0)
    return out


def _alpha_maps(m, n, choice):
    return list(injective_monotone_maps(m, n) if choice == "injective" else monotone_maps(m, n))


def weights(f: SimplicialMap, m: int, squares, cap):
    """mu^n on X_n for n <= cap."""
    X = f.source
    fib = f.fibers(m)
    mu_m = [Fraction(1, len(fib[f.f[m][x]])) for x in range(X.size(m))] if m <= cap else []
    out = {}
    for n in range(0, cap + 1):
        if n < m:
            out[n] = [Fraction(1)] * X.size(n)
        elif n == m:
            out[n] = mu_m
        else:
            alphas = _alpha_maps(m, n, squares[n])
            row = []
            for x in range(X.size(n)):
                w = Fraction(1)
                for a in alphas:
                    w *= mu_m[X.act(n, x, a)]
                row.append(w)
            out[n] = row
    return out


class PathSpace:
    """Prisms Delta^n x Delta^1 -> X over degenerate cylinders on Y."""

    def __init__(self, f: SimplicialMap, n: int):
        X, Y = f.source, f.target
        self.n = n
        self.P = prism(n)
        self.S = self.P.sset()
        self.pos = {s: t for t, s in enumerate(self.P.simplices)}
        self.prisms = []      # (tuple over P.simplices, y)
        gens = self.S.nondegenerate()
        for y in range(Y.size(n)):
            pres = {}
            for s, g in zip(self.P.simplices, gens):
                pres[g] = Y.act(n, y, OrdinalMap([v[0] for v in s], n))
            for a in hom_space(self.S, X, constraint=(f, pres)):
                self.prisms.append((a, y))
        self.bottom = tuple((i, 0) for i in range(n + 1))
        self.top = tuple((i, 1) for i in range(n + 1))

    def value(self, a, chain):
        return a[self.pos[chain]]

    def s(self, a):
        return self.value(a, self.bottom)

    def t(self, a):
        return self.value(a, self.top)

    def prism_face(self, j):
        """P_j: Delta^{n+1} -> Delta^n x Delta^1 as a vertex chain."""
        return tuple([(i, 0) for i in range(j + 1)] + [(i, 1) for i in range(j, self.n + 1)])

    def off_bottom(self, m):
        """Nondegenerate m-simplices of the prism not in the bottom face."""
        return [s for s in self.P.by_dim.get(m, []) if any(v[1] == 1 for v in s)]


def descent_verify(f: SimplicialMap, cap=None, m=None):
    """The four verdicts: mu_* f^* = id; mu_* is a chain map; the prism
    homotopy identity; equal cohomology dimensions."""
    cap = f.cap if cap is None else min(cap, f.cap)
    X, Y = f.source, f.target
    flags = classify_sset_map(f, cap)
    if not flags["hypercover"]:
        raise NotSimple("the map is not a hypercover")
    if m is None:
        if not flags["m_simple"]:
            raise NotSimple("the hypercover is not simple; use the coskeleton tower")
        m = flags["m_simple"][0]
    elif m not in flags["m_simple"]:
        raise NotSimple(f"the map is not {m}-simple")
    squares = lemma_simple_squares(f, m, cap)
    mu = weights(f, m, squares, cap)
    fib_m = f.fibers(m)

    mu_star, f_star = {}, {}
    for n in range(0, cap + 1):
        mu_star[n] = RationalMatrix.from_entries(Y.size(n), X.size(n),
                                                 [(f.f[n][x], x, mu[n][x]) for x in range(X.size(n))])
        f_star[n] = RationalMatrix.from_entries(X.size(n), Y.size(n),
                                                [(x, f.f[n][x], 1) for x in range(X.size(n))])
    dX = {n: cochain_differential(X, n) for n in range(0, cap)}
    dY = {n: cochain_differential(Y, n) for n in range(0, cap)}

    v1 = all(mu_star[n] @ f_star[n] == RationalMatrix.identity(Y.size(n)) for n in range(cap + 1))
    v2 = all(mu_star[n + 1] @ dX[n] == dY[n] @ mu_star[n] for n in range(cap))

    # homotopy h_n: C^{n+1}(X) -> C^n(X) for n <= cap - 1
    h, path_sizes, mass_ok, cart_ok = {}, {}, True, True
    for n in range(0, cap):
        PS = PathSpace(f, n)
        path_sizes[n] = len(PS.prisms)
        lifts = PS.off_bottom(m)
        entries = []
        mass = [Fraction(0)] * X.size(n)
        seen = set()
        for a, y in PS.prisms:
            w = Fraction(1)
            for s in lifts:
                w *= Fraction(1, len(fib_m[f.f[m][PS.value(a, s)]]))
            x = PS.s(a)
            mass[x] += w
            key = (x,) + tuple(PS.value(a, s) for s in lifts)
            if key in seen:
                cart_ok = False
            seen.add(key)
            for j in range(n + 1):
                sgn = -1 if j % 2 else 1
                entries.append((x, PS.value(a, PS.prism_face(j)), -sgn * w))
        if any(v != 1 for v in mass):
            mass_ok = False
        h[n] = RationalMatrix.from_entries(X.size(n), X.size(n + 1), entries)

    v3 = True
    for n in range(0, cap):
        lhs = RationalMatrix.identity(X.size(n)) - f_star[n] @ mu_star[n]
        rhs = h[n] @ dX[n]
        if n > 0:
            rhs = rhs + dX[n - 1] @ h[n - 1]
        if lhs != rhs:
            v3 = False
    hx, hy = cohomology_dims(X, cap - 1), cohomology_dims(Y, cap - 1)
    v4 = hx == hy
    return DescentReport(m, squares, mu, mu_star, h, {"transfer": v1, "chain_map": v2,
                                                      "homotopy": v3, "dims": v4},
                         hx, hy, path_sizes, mass_ok and cart_ok,
                         {n: dict(sorted(flags["levels"][n]["fibers"].items())) for n in flags["levels"]})


class DescentReport:
    def __init__(self, m, squares, mu, mu_star, h, verdicts, dims_x, dims_y, path_sizes, path_ok, fibers):
        self.m, self.squares, self.mu, self.mu_star, self.h = m, squares, mu, mu_star, h
        self.verdicts = verdicts
        self.dims_x, self.dims_y = dims_x, dims_y
        self.path_sizes = path_sizes
        self.path_ok = path_ok
        self.fibers = fibers

    @property
    def passed(self):
        return all(self.verdicts.values()) and self.path_ok


def descent_tower(f: SimplicialMap, cap=None):
    """Descent for a non-simple hypercover: verify every step of its
    coskeleton tower; the composite is then an isomorphism in cohomology."""
    from .cosk import coskeleton_tower
    cap = f.cap if cap is None else cap
    tower = coskeleton_tower(f, cap)
    reports = [(st.m, descent_verify(st.map, cap, st.m)) for st in tower.steps]
    return tower, reports
