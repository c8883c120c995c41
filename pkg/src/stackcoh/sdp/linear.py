"""
Linear cochains on G ⋉ E, the embedding lambda and projectable cochains.

A linear n-cochain is a section of the dual of level n.  The basis is
ordered by index alpha, then chain, then fibre coordinate, and the
differential is the alternating sum of pullbacks along the faces.
"""

from __future__ import annotations

from fractions import Fraction

from ..cochain import build_complex
from ..exactla import RationalMatrix, rank
from ..groupoid import chain_along, face, vertex
from ..ordinal import OrdinalMap, compose, delta, prime
from ..ruth import back, dual_ruth
from .bundle import SdpBundle


class DomainError(ValueError):
    pass


def is_regular(alpha, m=None):
    """alpha is m-regular when alpha(p) = p for p <= min(k, m); with m None,
    regular means alpha = iota_k."""
    k = alpha.source_size
    top = k if m is None else min(k, m)
    return all(alpha.values[p] == p for p in range(top + 1))


class LinearComplex:
    def __init__(self, V: SdpBundle, cap=None, path="faces"):
        self.V = V
        self.G, self.R = V.G, V.R
        self.cap = V.cap if cap is None else cap
        if self.cap > V.cap:
            raise ValueError("linear cochains need the bundle up to the same cap")
        self.bases, self.index, self.D = {}, {}, {}
        for n in range(0, self.cap + 1):
            b = []
            for a in V.indices(n):
                k = a.source_size
                for g in self.G.nerve(n):
                    d = self.R.dim(vertex(self.G, g, a.values[k]), k)
                    b.extend((a, g, t) for t in range(d))
            self.bases[n] = b
            self.index[n] = {key: t for t, key in enumerate(b)}
        build = differential_from_faces if path == "faces" else differential_from_formula
        for n in range(0, self.cap):
            self.D[n] = build(self, n)
        self.D[-1] = RationalMatrix.zeros(self.dim(0), 0)
        self._masks = {}

    def dim(self, n):
        return len(self.bases.get(n, ()))

    def differential(self, n):
        if n in self.D:
            return self.D[n]
        return RationalMatrix.zeros(self.dim(n + 1), self.dim(n))

    def cohomology_dim(self, n):
        if n < 0:
            return 0
        if n > self.cap - 1:
            raise ValueError(f"degree {n} needs a larger cap (cap={self.cap})")
        return self.dim(n) - rank(self.D[n]) - rank(self.differential(n - 1))

    def cohomology_dims(self, stop=None):
        stop = self.cap - 1 if stop is None else stop
        return {n: self.cohomology_dim(n) for n in range(0, stop + 1)}

    def regular_positions(self, n, m=None):
        return [t for t, (a, g, c) in enumerate(self.bases[n]) if is_regular(a, m)]

    def regular_mask(self, n, m=None):
        """Per basis position, whether its index is m-regular (cached)."""
        key = (n, m)
        mask = self._masks.get(key)
        if mask is None:
            mask = self._masks[key] = [is_regular(a, m) for (a, g, c) in self.bases.get(n, ())]
        return mask

    def apply(self, n, vector):
        return self.D[n].apply(vector)

    def support(self, n, vector):
        return [self.bases[n][t] for t, x in enumerate(vector) if x]


def differential_from_faces(L: LinearComplex, n):
    """(delta c)(g, v) = sum_r (-1)^r c(d_r g, d_r v), assembled from the face matrices."""
    V, G = L.V, L.G
    idx0, idx1 = L.index[n], L.index[n + 1]
    entries = []
    for g in G.nerve(n + 1):
        cg = V.layout(g)[2]
        for r in range(n + 2):
            h = face(G, g, r)
            ch = V.layout(h)[2]
            odd = r % 2
            for ra, cb, v in V.face_matrix(r, g).items():
                a, s = ch[ra]
                b, t = cg[cb]
                entries.append((idx1[(b, g, t)], idx0[(a, h, s)], -v if odd else v))
    return RationalMatrix.from_entries(L.dim(n + 1), L.dim(n), entries)


def differential_from_formula(L: LinearComplex, n):
    """Same differential, built from the homogeneous formulas: for (c, beta)
    of bidegree (i, j),

        delta(c, beta)(g, v) = sum_{r>=1} (-1)^r c(d_r g)(v_{delta_r beta})
                             + sum_{r=1}^{j} (-1)^{r-1} c(d_0 g)(v_{beta' delta_r})
                             + (-1)^j sum_k c(d_0 g) R_{j+1-k}^{g beta' tau_{j+1-k}} (v_{beta' iota_k})
    """
    V, G, R = L.V, L.G, L.R
    idx0, idx1 = L.index[n], L.index[n + 1]
    entries = []
    for beta in V.indices(n):
        j = beta.source_size
        bp = prime(beta)
        sj = -1 if j % 2 else 1
        for g in G.nerve(n + 1):
            d0g = face(G, g, 0)
            xb = vertex(G, d0g, beta.values[j])
            dim_b = R.dim(xb, j)
            if dim_b == 0:
                continue
            for r in range(1, n + 2):
                img = compose(beta, delta(r, n + 1))
                h = face(G, g, r)
                sgn = -1 if r % 2 else 1
                for t in range(dim_b):
                    entries.append((idx1[(img, g, t)], idx0[(beta, h, t)], sgn))
            for r in range(1, j + 1):
                img = OrdinalMap(bp.values[:r] + bp.values[r + 1:], n + 1)
                sgn = 1 if r % 2 else -1
                for t in range(dim_b):
                    entries.append((idx1[(img, g, t)], idx0[(beta, d0g, t)], sgn))
            gb = chain_along(G, g, bp)
            for k in range(0, min(j + 1, V.top) + 1):
                q = j + 1 - k
                if q > R.max_m():
                    continue
                M = R.block(q, back(G, gb, q), k)
                img = OrdinalMap(bp.values[:k + 1], n + 1)
                for a, b, v in M.items():
                    entries.append((idx1[(img, g, b)], idx0[(beta, d0g, a)], sj * v))
    return RationalMatrix.from_entries(L.dim(n + 1), L.dim(n), entries)


def linear_complex(G, R, cap, path="faces"):
    V = SdpBundle(G, R, cap)
    return LinearComplex(V, cap, path)


# ----------------------------------------------------------------------
# the embedding lambda: C(G, E*) -> C_lin(G ⋉ E)

def transpose_chain(G, g, i, j):
    """T_{i,j}(g) = (g^{-1}) iota_i for g in G_{i+j}."""
    n = i + j
    return chain_along(G, g, OrdinalMap([n - p for p in range(i + 1)], n), allow_nonmonotone=True)


class LambdaMap:
    """lambda(c)(g, v) = c(g^{-1} iota_i)(v_{iota_j}) in every degree <= cap."""

    def __init__(self, L: LinearComplex, P=None):
        self.L = L
        G, R = L.G, L.R
        self.dual = dual_ruth(R)
        self.P = build_complex(self.dual, L.cap, start=min(0, -self.dual.hi)) if P is None else P
        self.M = {}
        for n in range(0, L.cap + 1):
            entries = []
            cidx, lidx = self.P.index[n], L.index[n]
            for i in range(0, n + 1):
                j = n - i
                if j < R.lo or j > R.hi:
                    continue
                ij = OrdinalMap(range(j + 1), n)
                for g in G.nerve(n):
                    h = transpose_chain(G, g, i, j)
                    for t in range(R.dim(vertex(G, g, j), j)):
                        entries.append((lidx[(ij, g, t)], cidx[(i, h, t)], 1))
            self.M[n] = RationalMatrix.from_entries(L.dim(n), self.P.dim(n), entries)

    def __call__(self, n, vector):
        return self.M[n].apply(vector)

    def chain_map_defects(self):
        """Degrees n where delta lambda != lambda d."""
        bad = []
        for n in range(0, self.L.cap):
            if self.L.D[n] @ self.M[n] != self.M[n + 1] @ self.P.differential(n):
                bad.append(n)
        return bad

    def inverse(self, n, vector):
        """Canonical preimage of a projectable cochain; DomainError otherwise."""
        if not is_projectable(self.L, n, vector):
            raise DomainError(f"degree {n} cochain is not projectable")
        G, R = self.L.G, self.L.R
        out = [Fraction(0)] * self.P.dim(n)
        lidx = self.L.index[n]
        for t, (i, h, a) in enumerate(self.P.bases[n]):
            j = n - i
            # any g with T_{i,j}(g) = h works: units first, then h reversed
            hinv = chain_along(G, h, OrdinalMap([i - p for p in range(i + 1)], i), allow_nonmonotone=True)
            g = chain_along(G, hinv, OrdinalMap([max(p - j, 0) for p in range(n + 1)], i))
            out[t] = vector[lidx[(OrdinalMap(range(j + 1), n), g, a)]]
        if self(n, out) != list(vector):
            raise DomainError(f"degree {n} cochain is not in the image of lambda")
        return out


def supported_on_regular(L: LinearComplex, n, vector, m=None):
    mask = L.regular_mask(n, m)
    if isinstance(vector, dict):
        return all(mask[t] for t in vector)
    return all(mask[t] for t, x in enumerate(vector) if x)


def is_projectable(L: LinearComplex, n, vector):
    if not supported_on_regular(L, n, vector):
        return False
    if n >= L.cap:
        raise ValueError("projectability needs delta, so n < cap")
    image = L.D[n].apply_sparse(vector) if isinstance(vector, dict) else L.D[n].apply(vector)
    return supported_on_regular(L, n + 1, image)


def is_m_projectable(L: LinearComplex, n, vector, m):
    """vector may be a dense list or a sparse dict."""
    if not supported_on_regular(L, n, vector, m):
        return False
    image = L.D[n].apply_sparse(vector) if isinstance(vector, dict) else L.D[n].apply(vector)
    return supported_on_regular(L, n + 1, image, m)


def independent_of_first_arrows(L: LinearComplex, n, vector, m=None):
    """Characterisation check: each alpha-component with alpha m-regular does
    not change when the first min(k, m) arrows are replaced by units."""
    G = L.G
    idx = L.index[n]
    for t, (a, g, c) in enumerate(L.bases[n]):
        k = a.source_size
        p = k if m is None else min(k, m)
        if p == 0 or not is_regular(a, m):
            continue
        g2 = chain_along(G, g, OrdinalMap([max(q, p) for q in range(n + 1)], n))
        if vector[idx[(a, g2, c)]] != vector[t]:
            return False
    return True


def projectable_dims(L: LinearComplex, stop=None):
    """dim H^n of the projectable subcomplex, by ranks."""
    from .filtration import filtered_cohomology_dim
    stop = L.cap - 1 if stop is None else stop
    return {n: filtered_cohomology_dim(L, n, None) for n in range(0, stop + 1)}


def face_pullback(L: LinearComplex, n, r):
    """Matrix of c -> c d_r from C^{n-1}_lin to C^n_lin."""
    V, G = L.V, L.G
    idx0, idx1 = L.index[n - 1], L.index[n]
    entries = []
    for g in G.nerve(n):
        cg = V.layout(g)[2]
        h = face(G, g, r)
        ch = V.layout(h)[2]
        for ra, cb, v in V.face_matrix(r, g).items():
            a, s = ch[ra]
            b, t = cg[cb]
            entries.append((idx1[(b, g, t)], idx0[(a, h, s)], v))
    return RationalMatrix.from_entries(L.dim(n), L.dim(n - 1), entries)


class InternalMismatch(RuntimeError):
    pass


def lin_delta(L: LinearComplex, n, vector, checked=True):
    """delta on a degree n linear cochain; in checked mode the homogeneous
    formula path is evaluated too and must agree."""
    out = L.D[n].apply(vector)
    if checked:
        other = differential_from_formula(L, n).apply(vector)
        if other != out:
            raise InternalMismatch(f"linear differential paths disagree in degree {n}")
    return out


def projectability(L: LinearComplex, n, vector):
    """{'regular_support', 'projectable'}; the direct test is cross-checked
    against independence of the first k arrows."""
    reg = supported_on_regular(L, n, vector)
    proj = reg and supported_on_regular(L, n + 1, L.D[n].apply(vector))
    if reg and proj != independent_of_first_arrows(L, n, vector):
        raise InternalMismatch("projectability routes disagree")
    return {"regular_support": reg, "projectable": proj}


def m_regularity(L: LinearComplex, n, vector, m):
    reg = supported_on_regular(L, n, vector, m)
    proj = reg and supported_on_regular(L, n + 1, L.D[n].apply(vector), m)
    if reg and proj != independent_of_first_arrows(L, n, vector, m):
        raise InternalMismatch("m-projectability routes disagree")
    return {"m_regular": reg, "m_projectable": proj}


def lambda_bijection(lam: LambdaMap, stop=None):
    """Per degree n <= stop (default cap-1): lambda is injective, every image
    column is projectable, and dim C_proj^n equals the rank of lambda."""
    from .filtration import hat_dim
    L = lam.L
    stop = L.cap - 1 if stop is None else stop
    out = {}
    for n in range(0, stop + 1):
        M = lam.M[n]
        r = rank(M)
        cols_ok = all(is_projectable(L, n, col) for col in M.columns_as_dicts())
        out[n] = {"source_dim": lam.P.dim(n), "rank": r, "proj_dim": hat_dim(L, n, None),
                  "image_projectable": cols_ok,
                  "bijective": cols_ok and r == lam.P.dim(n) == hat_dim(L, n, None)}
    return out

