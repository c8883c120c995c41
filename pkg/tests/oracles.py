"""
Brute-force oracles, independent of the library's linear algebra and
complex builders.  They only read raw tables (arrow sources, targets,
composition, block matrices as nested lists) and recompute everything
with dense Fraction arithmetic.

dims_by_characters uses that rational cohomology of a finite groupoid is
concentrated in simplicial degree 0: the spectral sequence of the
simplicial filtration has E_2^{p,q} = H^p(G, H_fibre) which vanishes for
p > 0, so

    dim H^n(G, E) = sum over orbits of (1/|G_x|) sum_{g in G_x} tr(R_1(g) | H_{-n}(E^x, R_0)).

This file is frozen: tests compare library output against it.
"""

from fractions import Fraction
from itertools import product


# ----------------------------------------------------------------------
# dense linear algebra

def echelon(rows, ncols):
    """Row echelon form of a copy of rows; returns (rows, pivot columns)."""
    A = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def dense_rank(rows, ncols=None):
    if not rows:
        return 0
    ncols = len(rows[0]) if ncols is None else ncols
    return len(echelon(rows, ncols)[1])


def kernel_basis(rows, ncols):
    """Basis of {v : rows v = 0} as a list of vectors."""
    R, piv = echelon(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    out = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, c in zip(R, piv):
            v[c] = -r[f]
        out.append(v)
    return out


def mat_vec(M, v):
    return [sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in M]


def coordinates(basis, v):
    """Coefficients of v in the given basis (assumed to span v)."""
    n = len(v)
    rows = [[basis[j][i] for j in range(len(basis))] + [v[i]] for i in range(n)]
    R, piv = echelon(rows, len(basis) + 1)
    if len(basis) in piv:
        raise ValueError("vector not in span")
    x = [Fraction(0)] * len(basis)
    for r, c in zip(R, piv):
        x[c] = r[-1]
    return x


def cohomology_from_differentials(dims, D):
    """dims {n: size}; D {n: dense matrix C^n -> C^{n+1}} (rows = target)."""
    out = {}
    for n in sorted(dims):
        if n + 1 in D and n + 1 not in dims:
            continue
        rk_out = dense_rank(D[n], dims[n]) if n in D and dims.get(n + 1, 0) and dims[n] else 0
        rk_in = dense_rank(D[n - 1], dims.get(n - 1, 0)) if (n - 1) in D and dims[n] and dims.get(n - 1, 0) else 0
        out[n] = dims[n] - rk_out - rk_in
    return out


# ----------------------------------------------------------------------
# groupoids from raw tables

def composable_chains(G, n):
    """All (x0, g1, ..., gn) with s(g_{k+1}) = t(g_k), by brute force."""
    if n == 0:
        return [(x,) for x in range(G.n_objects)]
    out = []
    for gs in product(range(G.n_arrows), repeat=n):
        if all(G.src[gs[k + 1]] == G.tgt[gs[k]] for k in range(n - 1)):
            out.append((G.src[gs[0]],) + gs)
    return out


def last_vertex(G, c):
    return c[0] if len(c) == 1 else G.tgt[c[-1]]


def chain_face(G, c, r):
    """Standard nerve face on (x0, g1..gn)."""
    n = len(c) - 1
    gs = list(c[1:])
    if r == 0:
        rest = gs[1:]
        x = G.tgt[gs[0]]
    elif r == n:
        rest = gs[:-1]
        x = c[0]
    else:
        rest = gs[:r - 1] + [G.comp[(gs[r], gs[r - 1])]] + gs[r + 1:]
        x = c[0]
    return (x,) + tuple(rest)


def isotropy(G, x):
    return [g for g in range(G.n_arrows) if G.src[g] == x and G.tgt[g] == x]


def orbits(G):
    seen, out = set(), []
    for x in range(G.n_objects):
        if x in seen:
            continue
        orb = {G.tgt[g] for g in range(G.n_arrows) if G.src[g] == x} | {x}
        seen |= orb
        out.append(min(orb))
    return out


def trivial_cohomology(G, stop):
    """dim H^n(BG; Q) for n <= stop from brute-force chains."""
    chains = {n: composable_chains(G, n) for n in range(stop + 2)}
    idx = {n: {c: t for t, c in enumerate(chains[n])} for n in chains}
    D = {}
    for n in range(stop + 1):
        M = [[0] * len(chains[n]) for _ in chains[n + 1]]
        for row, c in enumerate(chains[n + 1]):
            for r in range(n + 2):
                M[row][idx[n][chain_face(G, c, r)]] += -1 if r % 2 else 1
        D[n] = M
    dims = {n: len(chains[n]) for n in range(stop + 2)}
    out = cohomology_from_differentials(dims, D)
    return {n: out[n] for n in range(stop + 1)}


def genuine_cohomology(G, action, dims, stop):
    """Cosimplicial complex of a genuine representation: action[g] is a
    dense matrix E_{s g} -> E_{t g}, dims[x] the fibre dimension; cochains
    take values in the fibre over the last vertex."""
    chains = {n: composable_chains(G, n) for n in range(stop + 2)}
    pos = {}
    size = {}
    for n, cs in chains.items():
        off = 0
        for c in cs:
            pos[(n, c)] = off
            off += dims[last_vertex(G, c)]
        size[n] = off
    D = {}
    for n in range(stop + 1):
        M = [[Fraction(0)] * size[n] for _ in range(size[n + 1])]
        for c in chains[n + 1]:
            ro = pos[(n + 1, c)]
            d = dims[last_vertex(G, c)]
            for r in range(n + 1):
                co = pos[(n, chain_face(G, c, r))]
                for a in range(d):
                    M[ro + a][co + a] += -1 if r % 2 else 1
            f = chain_face(G, c, n + 1)
            co = pos[(n, f)]
            A = action[c[-1]]
            sgn = -1 if (n + 1) % 2 else 1
            for a in range(d):
                for b in range(dims[last_vertex(G, f)]):
                    M[ro + a][co + b] += sgn * Fraction(A[a][b])
        D[n] = M
    for n in range(stop):
        prod = [[sum((D[n + 1][i][k] * D[n][k][j] for k in range(size[n + 1])), Fraction(0))
                 for j in range(size[n])] for i in range(size[n + 2])]
        assert all(x == 0 for row in prod for x in row), "oracle complex is not a complex"
    out = cohomology_from_differentials({n: size[n] for n in range(stop + 2)}, D)
    return {n: out[n] for n in range(stop + 1)}


# ----------------------------------------------------------------------
# representations up to homotopy, read as raw blocks

def _block(R, m, chain, n, rows, cols):
    M = R.blocks.get((m, chain, n))
    if M is None:
        return [[Fraction(0)] * cols for _ in range(rows)]
    return [[Fraction(x) for x in r] for r in M.to_lists()]


def fibre_dim(R, x, k):
    if k < R.lo or k > R.hi:
        return 0
    return R.dims[x][k - R.lo]


def fibre_homology_trace(R, x, k, g):
    """tr(R_1(g) | H_k(E^x, R_0)) for g in the isotropy of x."""
    d = fibre_dim(R, x, k)
    if d == 0:
        return Fraction(0)
    out_d = _block(R, 0, (x,), k, fibre_dim(R, x, k - 1), d)
    Z = kernel_basis(out_d, d) if fibre_dim(R, x, k - 1) else [
        [Fraction(int(i == j)) for i in range(d)] for j in range(d)]
    dk1 = fibre_dim(R, x, k + 1)
    into = _block(R, 0, (x,), k + 1, d, dk1) if dk1 else []
    B = []
    for j in range(dk1):
        col = [into[i][j] for i in range(d)]
        if dense_rank(B + [col], d) > len(B):
            B.append(col)
    C = []
    for z in Z:
        if dense_rank(B + C + [z], d) > len(B) + len(C):
            C.append(z)
    A = _block(R, 1, (x, g), k, d, d)
    basis = B + C
    tr = Fraction(0)
    for i, c in enumerate(C):
        coords = coordinates(basis, mat_vec(A, c))
        tr += coords[len(B) + i]
    return tr


def dims_by_characters(R, degrees):
    """{n: dim H^n(G, E)} for the given total degrees."""
    G = R.base
    out = {}
    for n in degrees:
        total = Fraction(0)
        for x in orbits(G):
            iso = isotropy(G, x)
            total += sum((fibre_homology_trace(R, x, -n, g) for g in iso), Fraction(0)) / len(iso)
        assert total.denominator == 1
        out[n] = int(total)
    return out


# ----------------------------------------------------------------------
# morphisms and simplicial sets

def fully_faithful(phi):
    """Each hom-set G(x, y) maps bijectively onto H(phi x, phi y)."""
    G, H = phi.source, phi.target
    for x in range(G.n_objects):
        for y in range(G.n_objects):
            src = [g for g in range(G.n_arrows) if G.src[g] == x and G.tgt[g] == y]
            tgt = {h for h in range(H.n_arrows)
                   if H.src[h] == phi.object_map[x] and H.tgt[h] == phi.object_map[y]}
            imgs = [phi.arrow_map[g] for g in src]
            if len(set(imgs)) != len(imgs) or set(imgs) != tgt:
                return False
    return True


def surjective_on_objects(phi):
    return set(phi.object_map) == set(range(phi.target.n_objects))


def sset_cohomology(X, stop):
    """Cohomology of a truncated simplicial set from its face tables."""
    D = {}
    for n in range(stop + 1):
        M = [[0] * X.size(n) for _ in range(X.size(n + 1))]
        for x in range(X.size(n + 1)):
            for i in range(n + 2):
                M[x][X.faces[n + 1][i][x]] += -1 if i % 2 else 1
        D[n] = M
    out = cohomology_from_differentials({n: X.size(n) for n in range(stop + 2)}, D)
    return {n: out[n] for n in range(stop + 1)}
