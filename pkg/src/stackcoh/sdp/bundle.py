"""
The semi-direct product G ⋉_R E as a simplicial vector bundle over the nerve.

Level n over a chain g is the direct sum of E_k at vertex x_{alpha(k)}(g)
over the indices alpha: [k] -> [n] (injective, monotone, 0 -> 0, k <= top
degree).  Fibre coordinates are ordered by index, then by coordinate.

Faces and degeneracies act by coordinate rules:

    (d_i v)_beta = v_{delta_i beta}                      i > 0
    (s_j v)_beta = v_{sigma_j beta}   (0 if not injective)
    (d_0 v)_beta = sum_k (-1)^l R_{l+1-k}^{g beta' tau_{l+1-k}} v_{beta' iota_k}
                   - sum_{i=1}^{l} (-1)^i v_{beta' delta_i}
"""

from __future__ import annotations

from ..exactla import RationalMatrix
from ..groupoid import (FiniteGroupoid, GroupoidMorphism, chain_along, classify_morphism,
                        face, degeneracy, vertex)
from ..ordinal import OrdinalMap, compose, delta, prime, sdp_indices, sigma
from ..ruth import RepUpToHomotopy, back, pullback_ruth


class SdpPreconditionError(ValueError):
    pass


class CartesianError(RuntimeError):
    pass


class SdpBundle:
    def __init__(self, G: FiniteGroupoid, R: RepUpToHomotopy, cap: int):
        if R.base is not G:
            raise SdpPreconditionError("representation lives over a different groupoid")
        if R.lo < 0:
            raise SdpPreconditionError(
                f"the semi-direct product needs degrees >= 0 (got [{R.lo}, {R.hi}]); "
                f"use shift_ruth first")
        self.G, self.R, self.cap = G, R, cap
        self.top = R.hi
        self._indices = {}
        self._layout = {}
        self._faces = {}
        self._reindex = {}
        self._degens = {}

    # -- indices and fibres ----------------------------------------------------
    def indices(self, n):
        if n not in self._indices:
            lst = sdp_indices(n, self.top)
            self._indices[n] = (lst, {a: t for t, a in enumerate(lst)})
        return self._indices[n][0]

    def index_position(self, n):
        self.indices(n)
        return self._indices[n][1]

    def layout(self, g):
        """(offsets {alpha: (offset, dim)}, total dim, coordinate list [(alpha, a)])."""
        lay = self._layout.get(g)
        if lay is not None:
            return lay
        n = len(g) - 1
        offs, coords, off = {}, [], 0
        for a in self.indices(n):
            k = a.source_size
            d = self.R.dim(vertex(self.G, g, a.values[k]), k)
            offs[a] = (off, d)
            coords.extend((a, t) for t in range(d))
            off += d
        lay = (offs, off, coords)
        self._layout[g] = lay
        return lay

    def fiber_dim(self, g):
        return self.layout(g)[1]

    def level_dims(self, n):
        return [self.fiber_dim(g) for g in self.G.nerve(n)]

    # -- structure maps --------------------------------------------------------
    def face_matrix(self, i, g):
        """Matrix of d_i from the fibre over g to the fibre over d_i g."""
        key = (i, g)
        M = self._faces.get(key)
        if M is None:
            M = self._d0(g) if i == 0 else self._di(i, g)
            self._faces[key] = M
        return M

    def degeneracy_matrix(self, j, g):
        key = (j, g)
        M = self._degens.get(key)
        if M is None:
            M = self._sj(j, g)
            self._degens[key] = M
        return M

    def _di(self, i, g):
        n = len(g) - 1
        tgt = face(self.G, g, i)
        toffs, tdim, _ = self.layout(tgt)
        soffs, sdim, _ = self.layout(g)
        along = self._face_index(i, n)
        entries = []
        for beta, (ro, d) in toffs.items():
            co, _ = soffs[along[beta]]
            for t in range(d):
                entries.append((ro + t, co + t, 1))
        return RationalMatrix.from_entries(tdim, sdim, entries)

    def _face_index(self, i, n):
        """beta -> beta composed with delta_i, for the indices at level n - 1."""
        along = self._reindex.get((i, n))
        if along is None:
            d_i = delta(i, n)
            along = {beta: compose(beta, d_i) for beta in self.indices(n - 1)}
            self._reindex[(i, n)] = along
        return along

    def _sj(self, j, g):
        n = len(g) - 1
        tgt = degeneracy(self.G, g, j)
        toffs, tdim, _ = self.layout(tgt)
        soffs, sdim, _ = self.layout(g)
        s_j = sigma(j, n)
        entries = []
        for beta, (ro, d) in toffs.items():
            a = compose(beta, s_j)
            if not a.is_injective:
                continue
            co, _ = soffs[a]
            for t in range(d):
                entries.append((ro + t, co + t, 1))
        return RationalMatrix.from_entries(tdim, sdim, entries)

    def _d0(self, g):
        G, R = self.G, self.R
        n = len(g) - 1
        tgt = face(G, g, 0)
        toffs, tdim, _ = self.layout(tgt)
        soffs, sdim, _ = self.layout(g)
        entries = []
        for beta, (ro, d) in toffs.items():
            if d == 0:
                continue
            l = beta.source_size
            bp = prime(beta)
            gb = chain_along(G, g, bp)
            sgn = -1 if l % 2 else 1
            for k in range(0, l + 2):
                if k > self.top:
                    break
                q = l + 1 - k
                if q > R.max_m():
                    continue
                alpha = OrdinalMap(bp.values[:k + 1], n)
                M = R.block(q, back(G, gb, q), k)
                if M.is_zero():
                    continue
                co, _ = soffs[alpha]
                for a, b, v in M.items():
                    entries.append((ro + a, co + b, sgn * v))
            for i in range(1, l + 1):
                alpha = OrdinalMap(bp.values[:i] + bp.values[i + 1:], n)
                co, _ = soffs[alpha]
                s = 1 if i % 2 else -1      # -(-1)^i
                for t in range(d):
                    entries.append((ro + t, co + t, s))
        return RationalMatrix.from_entries(tdim, sdim, entries)

    def dump(self, n):
        """Level data in canonical order for external diffing."""
        G = self.G
        out = {"level": n, "indices": [list(a.values) for a in self.indices(n)], "chains": []}
        for g in G.nerve(n):
            rec = {"chain": G.label_chain(g), "fiber_dim": self.fiber_dim(g)}
            if n > 0:
                rec["faces"] = [self.face_matrix(i, g).to_strings() for i in range(n + 1)]
            out["chains"].append(rec)
        return out


def sdp_build(G, R, cap):
    return SdpBundle(G, R, cap)


def verify_simplicial_identities(V: SdpBundle, cap=None, first_only=True):
    """Check d_i d_j, s_i s_j and d_i s_j identities as matrices over every
    chain of level <= cap.  Returns a list of violations (empty when ok)."""
    cap = V.cap if cap is None else cap
    G = V.G
    out = []

    def fail(name, g, L, Rm):
        bad = (L - Rm).nonzero_rows()
        info = {"identity": name, "chain": G.label_chain(g)}
        if bad:
            info["row"] = bad[0]
        out.append(info)

    D, S = V.face_matrix, V.degeneracy_matrix
    for n in range(0, cap + 1):
        for g in G.nerve(n):
            if n >= 2:
                for j in range(1, n + 1):
                    for i in range(0, j):
                        L = D(i, face(G, g, j)) @ D(j, g)
                        Rm = D(j - 1, face(G, g, i)) @ D(i, g)
                        if L != Rm:
                            fail(f"d{i} d{j} = d{j - 1} d{i}", g, L, Rm)
                            if first_only:
                                return out
            if n + 2 <= cap:
                for j in range(0, n + 1):
                    for i in range(0, j + 1):
                        L = S(i, degeneracy(G, g, j)) @ S(j, g)
                        Rm = S(j + 1, degeneracy(G, g, i)) @ S(i, g)
                        if L != Rm:
                            fail(f"s{i} s{j} = s{j + 1} s{i}", g, L, Rm)
                            if first_only:
                                return out
            if n + 1 <= cap:
                for j in range(0, n + 1):
                    sg = degeneracy(G, g, j)
                    for i in range(0, n + 2):
                        L = D(i, sg) @ S(j, g)
                        if i < j:
                            Rm = S(j - 1, face(G, g, i)) @ D(i, g)
                        elif i in (j, j + 1):
                            Rm = RationalMatrix.identity(V.fiber_dim(g))
                        else:
                            Rm = S(j, face(G, g, i - 1)) @ D(i - 1, g)
                        if L != Rm:
                            fail(f"d{i} s{j}", g, L, Rm)
                            if first_only:
                                return out
    return out


class SdpPullback:
    def __init__(self, phi, bundle_target, bundle_source, cartesian, linear_hypercover, checked):
        self.phi = phi
        self.target = bundle_target
        self.source = bundle_source
        self.cartesian = cartesian
        self.linear_hypercover = linear_hypercover
        self.levels_checked = checked


def sdp_pullback(phi: GroupoidMorphism, R: RepUpToHomotopy, cap: int, Rp=None) -> SdpPullback:
    """Semi-direct product of the pulled-back representation together with a
    levelwise verification that it is the fibre product G' x_G (G ⋉ E)."""
    V = SdpBundle(phi.target, R, cap)
    if Rp is None:
        Rp = pullback_ruth(phi, R)
    W = SdpBundle(phi.source, Rp, cap)
    Gp = phi.source
    for n in range(0, cap + 1):
        if V.indices(n) != W.indices(n):
            raise CartesianError(f"index lists differ at level {n}")
        for g in Gp.nerve(n):
            h = phi.on_chain(g)
            # the coordinate map fibre(g) -> fibre(phi g) sends (alpha, a) to (alpha, a);
            # injective with equal cardinality means a bijection onto the fibre product
            cw, cv = W.layout(g)[2], V.layout(h)[2]
            if len(cw) != len(cv) or len(set(cw)) != len(cw) or set(cw) != set(cv):
                raise CartesianError(f"fibre over {Gp.label_chain(g)} is not the base change")
            if n > 0:
                for i in range(n + 1):
                    if W.face_matrix(i, g) != V.face_matrix(i, h):
                        raise CartesianError(f"face d{i} over {Gp.label_chain(g)} is not the base change")
            if n < cap:
                for j in range(n + 1):
                    if W.degeneracy_matrix(j, g) != V.degeneracy_matrix(j, h):
                        raise CartesianError(f"degeneracy s{j} over {Gp.label_chain(g)} differs")
    flags = classify_morphism(phi)
    return SdpPullback(phi, V, W, True, bool(flags["hypercover"]), cap)
