"""
The coefficient complex C(G, E) of a representation up to homotopy.

C^{i,j} = sections over G_i of t*E_{-j}; total degree n = i + j.  The
basis of C^n lists components by increasing i, then chains in nerve
order, then fibre coordinates.  The differential is d = sum_m d_m with

    d_m(c)(g) = (-1)^j R_m^{g tau_m} c(g iota_i)                       m != 1
    d_1(c)(g) = (-1)^j R_1^{g tau_1} c(g iota_i)
                + (-1)^{i+j+1} sum_{r=0}^{i} (-1)^r c(d_r g)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exactla import (RationalMatrix, rank, induced_cohomology_map, NotAChainMap,
                      SubquotientMap)
from .groupoid import FiniteGroupoid, GroupoidMorphism, face, inverse_chain, vertex
from .ruth import RepUpToHomotopy, back, front, pullback_ruth


class CapError(ValueError):
    pass


@dataclass
class ComplexPresentation:
    rep: RepUpToHomotopy
    cap: int
    normalized: bool
    bases: dict = field(default_factory=dict)     # n -> list of (i, chain, coord)
    index: dict = field(default_factory=dict)     # n -> {(i, chain, coord): position}
    D: dict = field(default_factory=dict)         # n -> matrix C^n -> C^{n+1}

    @property
    def degrees(self):
        return sorted(self.bases)

    @property
    def first_degree(self):
        return -self.rep.hi

    def dim(self, n):
        return len(self.bases.get(n, ()))

    def differential(self, n):
        if n in self.D:
            return self.D[n]
        return RationalMatrix.zeros(self.dim(n + 1), self.dim(n))

    def cohomology_dim(self, n):
        if n > self.cap - 1:
            raise CapError(f"degree {n} needs a larger cap (cap={self.cap})")
        return self.dim(n) - rank(self.differential(n)) - rank(self.differential(n - 1))

    def cohomology_dims(self, start=None, stop=None):
        start = self.first_degree if start is None else start
        stop = self.cap - 1 if stop is None else stop
        return {n: (self.cohomology_dim(n) if n >= self.first_degree else 0)
                for n in range(start, stop + 1)}

    def check_square_zero(self):
        bad = []
        for n in sorted(self.D):
            if n + 1 in self.D and not (self.D[n + 1] @ self.D[n]).is_zero():
                bad.append(n)
        return bad

    def vector(self, cochain: "Cochain"):
        n = cochain.degree
        idx = self.index[n]
        v = [Fraction(0)] * self.dim(n)
        for (i, j), sec in cochain.components.items():
            for chain, vals in sec.items():
                for a, x in enumerate(vals):
                    if x:
                        key = (i, chain, a)
                        if key not in idx:
                            raise ValueError(f"cochain has a value outside the basis at {key}")
                        v[idx[key]] = Fraction(x)
        return v

    def cochain(self, n, vector):
        comps = {}
        for (i, chain, a), x in zip(self.bases[n], vector):
            j = n - i
            sec = comps.setdefault((i, j), {})
            if chain not in sec:
                sec[chain] = [Fraction(0)] * self.rep.dim(vertex(self.rep.base, chain, i), -j)
            sec[chain][a] = Fraction(x)
        return Cochain(self.rep, n, comps)


@dataclass
class Cochain:
    rep: RepUpToHomotopy
    degree: int
    components: dict   # (i, j) -> {chain: list of values in E_{-j}^{t(chain)}}

    def bidegrees(self):
        return sorted(self.components)


# ----------------------------------------------------------------------
# presentation

def _component_range(R, n):
    """Pairs (i, j) with i >= 0, -j in [lo, hi], i + j = n, by increasing i."""
    out = []
    for j in range(-R.hi, -R.lo + 1):
        i = n - j
        if i >= 0:
            out.append((i, j))
    out.sort()
    return out


def cochain_basis(R: RepUpToHomotopy, n, normalized=False):
    G = R.base
    basis = []
    for i, j in _component_range(R, n):
        chains = G.nondegenerate(i) if normalized else G.nerve(i)
        for g in chains:
            d = R.dim(vertex(G, g, i), -j)
            for a in range(d):
                basis.append((i, g, a))
    return basis


def differential_matrix(R: RepUpToHomotopy, n, basis_src, basis_tgt, idx_src, idx_tgt,
                        normalized=False):
    """Matrix of d : C^n -> C^{n+1} in the given bases."""
    G = R.base
    entries = []
    maxm = R.max_m()
    for i2, j2 in _component_range(R, n + 1):
        chains = G.nondegenerate(i2) if normalized else G.nerve(i2)
        for m in range(0, maxm + 1):
            i, j = i2 - m, j2 + m - 1
            if i < 0 or not (R.lo <= -j <= R.hi):
                continue
            sign = -1 if j % 2 else 1
            for h in chains:
                src = front(h, i)
                M = R.block(m, back(G, h, m), -j)
                if not M.is_zero():
                    for b, a, v in M.items():
                        col = idx_src.get((i, src, a))
                        if col is None:
                            continue
                        entries.append((idx_tgt[(i2, h, b)], col, sign * v))
        # simplicial part of d_1
        i, j = i2 - 1, j2
        if i >= 0 and R.lo <= -j <= R.hi:
            sign = -1 if (i + j + 1) % 2 else 1
            for h in chains:
                x = vertex(G, h, i2)
                d = R.dim(x, -j)
                if not d:
                    continue
                for r in range(0, i + 1):
                    f = face(G, h, r)
                    s = sign if r % 2 == 0 else -sign
                    for a in range(d):
                        col = idx_src.get((i, f, a))
                        if col is None:
                            continue
                        entries.append((idx_tgt[(i2, h, a)], col, s))
    return RationalMatrix.from_entries(len(basis_tgt), len(basis_src), entries)


def build_complex(R: RepUpToHomotopy, cap: int, normalized=False, start=None) -> ComplexPresentation:
    """Bases for total degrees first..cap and differentials D_n for n < cap."""
    if cap < 1:
        raise CapError("cap must be at least 1")
    P = ComplexPresentation(R, cap, normalized)
    first = -R.hi if start is None else start
    for n in range(first, cap + 1):
        b = cochain_basis(R, n, normalized)
        P.bases[n] = b
        P.index[n] = {k: t for t, k in enumerate(b)}
    for n in range(first, cap):
        P.D[n] = differential_matrix(R, n, P.bases[n], P.bases[n + 1], P.index[n], P.index[n + 1],
                                     normalized)
    P.D[first - 1] = RationalMatrix.zeros(P.dim(first), 0)
    P.bases.setdefault(first - 1, [])
    P.index.setdefault(first - 1, {})
    return P


def cohomology_dims(G: FiniteGroupoid, R: RepUpToHomotopy, cap: int, normalized=False, start=None):
    """dim H^n(G, E) for n from start (default -hi) to cap - 1."""
    if R.base is not G:
        raise ValueError("representation lives over a different groupoid")
    P = build_complex(R, cap, normalized)
    return P.cohomology_dims(start=start)


def differential(c: Cochain, normalized=False) -> Cochain:
    P = build_complex(c.rep, max(c.degree + 1, 1), normalized)
    if c.degree not in P.D:
        raise CapError("degree outside the presented window")
    v = P.vector(c)
    return P.cochain(c.degree + 1, P.D[c.degree].apply(v))


def dual_differential_matrix(S: RepUpToHomotopy, n, P: ComplexPresentation):
    """D_n of C(G, S*) assembled from the blocks of S through the closed
    formulas for dual coefficients; must agree with P.D[n] for P built on
    dual_ruth(S)."""
    G = S.base
    entries = []
    idx_src, idx_tgt = P.index[n], P.index[n + 1]
    for (i2, h, b), row in idx_tgt.items():
        j2 = n + 1 - i2
        for m in range(0, S.max_m() + 1):
            i, j = i2 - m, j2 + m - 1
            if i < 0:
                continue
            sign = -1 if j % 2 else 1
            g = inverse_chain(G, back(G, h, m))
            M = S.block(m, g, j - m + 1)   # E_{j-m+1}^{t(h)} -> E_j^{x_i(h)}
            if M.is_zero():
                continue
            src = front(h, i)
            for a in range(M.nrows):
                v = M[a, b]
                if v:
                    col = idx_src.get((i, src, a))
                    if col is not None:
                        entries.append((row, col, sign * v))
        i, j = i2 - 1, j2
        if i >= 0:
            sign = -1 if (i + j + 1) % 2 else 1
            for r in range(0, i + 1):
                col = idx_src.get((i, face(G, h, r), b))
                if col is not None:
                    entries.append((row, col, sign if r % 2 == 0 else -sign))
    return RationalMatrix.from_entries(P.dim(n + 1), P.dim(n), entries)


# ----------------------------------------------------------------------
# module structure

def scalar_cochain(G, p, values):
    """A scalar p-cochain as {chain: value}."""
    return {g: Fraction(values.get(g, 0)) for g in G.nerve(p)}


def cup(G, f, q, g, p):
    """(f ∪ g)(x) = f(x τ_q) g(x ι_p) for f on G_q and g on G_p."""
    return {x: f[back(G, x, q)] * g[front(x, p)] for x in G.nerve(p + q)}


def module_action(c: Cochain, f, p):
    """(c·f)(g) = c(g τ_i) f(g ι_p) componentwise; raises the degree by p."""
    G = c.rep.base
    comps = {}
    for (i, j), sec in c.components.items():
        new = {}
        for g in G.nerve(i + p):
            vals = sec.get(back(G, g, i))
            if vals is None:
                continue
            s = f[front(g, p)]
            new[g] = [s * v for v in vals]
        comps[(i + p, j)] = new
    return Cochain(c.rep, c.degree + p, comps)


def scalar_differential(G, f, n):
    """δ(f)(x) = (-1)^{n+1} Σ_i (-1)^i f(x δ_i) on (n+1)-chains."""
    sign = -1 if (n + 1) % 2 else 1
    out = {}
    for x in G.nerve(n + 1):
        s = Fraction(0)
        for i in range(n + 2):
            t = f[face(G, x, i)]
            s += t if i % 2 == 0 else -t
        out[x] = sign * s
    return out


# ----------------------------------------------------------------------
# pullback

@dataclass
class PullbackResult:
    source: ComplexPresentation
    target: ComplexPresentation
    F: dict               # n -> matrix C^n(G, E) -> C^n(G', φ*E)
    maps: dict            # n -> SubquotientMap
    dims_source: dict
    dims_target: dict

    @property
    def quasi_iso(self):
        return all(m.bijective and m.bijective_by_ranks for m in self.maps.values())

    def bijective_at(self, n):
        return self.maps[n].bijective


def pullback_matrix(phi: GroupoidMorphism, P: ComplexPresentation, Q: ComplexPresentation, n):
    entries = []
    for row, (i, g, a) in enumerate(Q.bases[n]):
        col = P.index[n].get((i, phi.on_chain(g), a))
        if col is not None:
            entries.append((row, col, 1))
        elif not P.normalized:
            raise NotAChainMap("pullback lands outside the source basis")
    return RationalMatrix.from_entries(Q.dim(n), P.dim(n), entries)


def pullback_map(phi: GroupoidMorphism, R: RepUpToHomotopy, cap: int, normalized=False,
                 Rp: RepUpToHomotopy | None = None) -> PullbackResult:
    """Chain map c -> c∘φ from C(G, E) to C(G', φ*E) and its effect on cohomology."""
    if Rp is None:
        Rp = pullback_ruth(phi, R)
    P = build_complex(R, cap, normalized)
    Q = build_complex(Rp, cap, normalized, start=P.first_degree)
    F = {}
    for n in range(P.first_degree - 1, cap + 1):
        F[n] = pullback_matrix(phi, P, Q, n)
    for n in range(P.first_degree - 1, cap):
        if F[n + 1] @ P.differential(n) != Q.differential(n) @ F[n]:
            raise NotAChainMap(f"pullback does not commute with d in degree {n}")
    maps = {}
    for n in range(P.first_degree, cap):
        maps[n] = induced_cohomology_map(P.differential(n - 1), P.differential(n),
                                         Q.differential(n - 1), Q.differential(n), F[n],
                                         F_prev=F[n - 1], F_next=F[n + 1])
    return PullbackResult(P, Q, F, maps, P.cohomology_dims(), Q.cohomology_dims())
