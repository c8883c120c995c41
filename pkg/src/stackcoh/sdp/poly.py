"""
Polynomial cochains on G ⋉ E, split by polynomial degree.

A level-n cochain of polynomial degree r assigns to each chain g a
homogeneous polynomial of degree r on the fibre over g.  Monomials are
sorted tuples of fibre coordinates.  Pullback along the linear face maps
keeps the degree, so the complex splits as a direct sum over r; degree 1
recovers linear cochains and degree 0 the scalar cochains on the nerve.
"""

from __future__ import annotations

from itertools import combinations_with_replacement

from ..exactla import RationalMatrix, rank
from ..groupoid import face
from .bundle import SdpBundle


def monomials(dim, r):
    return list(combinations_with_replacement(range(dim), r))


def pullback_polynomial(poly, T):
    """poly on the target of T (dict monomial -> coefficient), pulled back to
    the source: each variable x_q becomes sum_p T[q, p] y_p."""
    forms = {}
    out = {}
    for mono, coef in poly.items():
        terms = {(): coef}
        for q in mono:
            lin = forms.get(q)
            if lin is None:
                lin = forms[q] = T.row(q)
            nxt = {}
            for m, c in terms.items():
                for p, v in lin.items():
                    key = tuple(sorted(m + (p,)))
                    nxt[key] = nxt.get(key, 0) + c * v
            terms = nxt
        for m, c in terms.items():
            if c:
                out[m] = out.get(m, 0) + c
    return {m: c for m, c in out.items() if c}


class PolynomialComplex:
    """Degree-r polynomial cochains up to the cap of the bundle."""

    def __init__(self, V: SdpBundle, r: int, cap=None):
        self.V, self.r = V, r
        self.cap = V.cap if cap is None else cap
        self.bases, self.index, self.D = {}, {}, {}
        self.leaks = []
        G = V.G
        for n in range(0, self.cap + 1):
            b = [(g, mono) for g in G.nerve(n) for mono in monomials(V.fiber_dim(g), r)]
            self.bases[n] = b
            self.index[n] = {k: t for t, k in enumerate(b)}
        for n in range(0, self.cap):
            self.D[n] = self._differential(n)
        self.D[-1] = RationalMatrix.zeros(self.dim(0), 0)

    def dim(self, n):
        return len(self.bases.get(n, ()))

    def _differential(self, n):
        V, G = self.V, self.V.G
        idx0, idx1 = self.index[n], self.index[n + 1]
        entries = []
        # (delta f)(g) = sum_r (-1)^r f(d_r g) o d_r
        for g in G.nerve(n + 1):
            for r in range(n + 2):
                h = face(G, g, r)
                T = V.face_matrix(r, g)
                sgn = -1 if r % 2 else 1
                for mono in monomials(V.fiber_dim(h), self.r):
                    pulled = pullback_polynomial({mono: 1}, T)
                    for m2, c in pulled.items():
                        if len(m2) != self.r:
                            self.leaks.append((n, G.label_chain(g), r, mono))
                            continue
                        entries.append((idx1[(g, m2)], idx0[(h, mono)], sgn * c))
        return RationalMatrix.from_entries(self.dim(n + 1), self.dim(n), entries)

    def cohomology_dim(self, n):
        if n < 0:
            return 0
        return self.dim(n) - rank(self.D[n]) - rank(self.D[n - 1])

    def cohomology_dims(self, stop=None):
        stop = self.cap - 1 if stop is None else stop
        return {n: self.cohomology_dim(n) for n in range(0, stop + 1)}

    def square_zero(self):
        return all((self.D[n + 1] @ self.D[n]).is_zero() for n in range(0, self.cap - 1))


def poly_split(V: SdpBundle, degrees, cap=None):
    """{r: PolynomialComplex} for each requested polynomial degree."""
    return {r: PolynomialComplex(V, r, cap) for r in degrees}


def linear_permutation(P: PolynomialComplex, L, n):
    """Positions of the degree-1 basis inside the linear-cochain basis."""
    out = []
    for g, (q,) in P.bases[n]:
        a, t = P.V.layout(g)[2][q]
        out.append(L.index[n][(a, g, t)])
    return out


def matches_linear(P: PolynomialComplex, L):
    """Degree 1 equals C_lin after reordering the basis."""
    if P.r != 1:
        raise ValueError("only degree 1 compares with linear cochains")
    for n in range(0, P.cap):
        src, tgt = linear_permutation(P, L, n), linear_permutation(P, L, n + 1)
        if L.D[n].select_rows(tgt).select_cols(src) != P.D[n]:
            return False
        if sorted(src) != list(range(L.dim(n))):
            return False
    return True


def matches_scalar(P: PolynomialComplex):
    """Degree 0 equals the scalar cochain complex of the nerve, whose
    differential carries the extra sign (-1)^{n+1}."""
    from ..cochain import scalar_differential
    if P.r != 0:
        raise ValueError("only degree 0 compares with scalar cochains")
    G = P.V.G
    for n in range(0, P.cap):
        for col, (h, _) in enumerate(P.bases[n]):
            f = {x: (1 if x == h else 0) for x in G.nerve(n)}
            df = scalar_differential(G, f, n)
            sign = -1 if (n + 1) % 2 else 1
            for g, v in df.items():
                if P.D[n][P.index[n + 1][(g, ())], col] != sign * v:
                    return False
    return True
