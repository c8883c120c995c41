"""
Representations up to homotopy of a finite groupoid on a bounded graded
bundle of rational vector spaces.

A representation carries, for each m >= 0 and each m-chain g, a graded map
R_m^g with blocks (R_m^g)_n : E_n^{s(g)} -> E_{n+m-1}^{t(g)}.  Blocks are
stored sparsely under the key (m, chain, n); a missing key means zero.
"""

from __future__ import annotations

from .exactla import RationalMatrix, InconsistentSystem, solve, to_fraction
from .groupoid import (FiniteGroupoid, GroupoidMorphism, face, inverse_chain,
                       vertex)


class RepError(ValueError):
    pass


class InfeasibleCompletion(ValueError):
    """No R_2 completes the given data; ``witness`` lists (coefficient,
    equation) pairs whose combination reads 0 = 1."""

    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


def front(chain, p):
    """g ι_p: the first p arrows."""
    return chain[:p + 1]


def back(G, chain, q):
    """g τ_q: the last q arrows."""
    n = len(chain) - 1
    if q == n:
        return chain
    start = vertex(G, chain, n - q)
    return (start,) + chain[n - q + 1:]


class RepUpToHomotopy:
    def __init__(self, base: FiniteGroupoid, lo: int, hi: int, dims, blocks=None,
                 name="", fill_units=True):
        """dims: per object (index or label) a list of dimensions for degrees lo..hi.
        blocks: {(m, chain, n): matrix}."""
        if hi < lo:
            raise RepError("empty degree range")
        self.base = base
        self.lo, self.hi = int(lo), int(hi)
        self.name = name
        self.dims = []
        if isinstance(dims, dict):
            rows = [dims[k] if k in dims else dims[base.object_labels[k]]
                    for k in range(base.n_objects)]
        else:
            rows = list(dims)
        if len(rows) != base.n_objects:
            raise RepError("one dimension vector per object is required")
        for r in rows:
            r = [int(d) for d in r]
            if len(r) != hi - lo + 1 or any(d < 0 for d in r):
                raise RepError(f"dimension vector {r} does not fit degrees [{lo}, {hi}]")
            self.dims.append(r)
        self.blocks = {}
        for (m, chain, n), M in (blocks or {}).items():
            if not isinstance(M, RationalMatrix):
                M = RationalMatrix.from_rows(M, ncols=self.dim(chain[0], n)) if M else \
                    RationalMatrix.zeros(self.dim(vertex(base, chain, m), n + m - 1), self.dim(chain[0], n))
            self.set_block(m, chain, n, M)
        if fill_units:
            for x in range(base.n_objects):
                u = base.unit_chain(x, 1)
                for n in range(self.lo, self.hi + 1):
                    if (1, u, n) not in self.blocks and self.dim(x, n):
                        self.blocks[(1, u, n)] = RationalMatrix.identity(self.dim(x, n))
        self._zero = {}

    # -- shape bookkeeping ---------------------------------------------------
    @property
    def width(self):
        return self.hi - self.lo

    def dim(self, x, n):
        if n < self.lo or n > self.hi:
            return 0
        return self.dims[x][n - self.lo]

    def total_dim(self, x):
        return sum(self.dims[x])

    def block_shape(self, m, chain, n):
        return (self.dim(vertex(self.base, chain, m), n + m - 1), self.dim(chain[0], n))

    def set_block(self, m, chain, n, M):
        if len(chain) != m + 1:
            raise RepError(f"R_{m} needs an {m}-chain, got {chain}")
        shape = self.block_shape(m, chain, n)
        if M.shape != shape:
            raise RepError(f"block R_{m} on {self.base.label_chain(chain)} at degree {n} has shape "
                           f"{M.shape}, expected {shape}")
        if M.is_zero():
            self.blocks.pop((m, chain, n), None)
        else:
            self.blocks[(m, chain, n)] = M

    def block(self, m, chain, n):
        M = self.blocks.get((m, chain, n))
        if M is not None:
            return M
        shape = self.block_shape(m, chain, n)
        z = self._zero.get(shape)
        if z is None:
            z = self._zero[shape] = RationalMatrix.zeros(*shape)
        return z

    def has_block(self, m, chain, n):
        return (m, chain, n) in self.blocks

    def max_m(self):
        """R_m vanishes for m > width + 1 by degree reasons."""
        return self.width + 1

    def copy(self, name=None):
        R = RepUpToHomotopy(self.base, self.lo, self.hi, self.dims, None,
                            name=self.name if name is None else name, fill_units=False)
        R.blocks = dict(self.blocks)
        return R

    def __repr__(self):
        return (f"<RepUpToHomotopy {self.name} over {self.base.name}, degrees [{self.lo}, {self.hi}], "
                f"{len(self.blocks)} blocks>")

    def same_data(self, other):
        return (self.base is other.base and self.lo == other.lo and self.hi == other.hi
                and self.dims == other.dims and self.blocks == other.blocks)


# ----------------------------------------------------------------------
# axioms

def check_ruth(R: RepUpToHomotopy, max_level=None, first_only=False):
    """List of violated axiom instances (empty when RH1 and RH2 hold).

    Each violation is a dict with keys axiom, m, chain, degree, detail."""
    G = R.base
    out = []
    N = R.width

    def add(axiom, m, chain, degree, detail):
        out.append({"axiom": axiom, "m": m, "chain": G.label_chain(chain),
                    "degree": degree, "detail": detail})

    # RH1
    for x in range(G.n_objects):
        u = G.unit_chain(x, 1)
        for n in range(R.lo, R.hi + 1):
            d = R.dim(x, n)
            if R.block(1, u, n) != RationalMatrix.identity(d):
                add("RH1", 1, u, n, "R_1 of a unit is not the identity")
    for (m, chain, n) in sorted(R.blocks, key=lambda k: (k[0], k[1], k[2])):
        if m >= 2 and G.is_degenerate(chain):
            add("RH1", m, chain, n, "R_m is nonzero on a degenerate chain")
    if out and first_only:
        return out
    top = 2 * (N + 1) if max_level is None else max_level
    for m in range(0, top + 1):
        for g in G.nerve(m):
            for n in range(R.lo, R.hi + 1):
                if m + n - 2 > R.hi or m + n - 2 < R.lo:
                    continue
                diff = rh2_defect(R, g, n)
                if diff is not None and not diff.is_zero():
                    add("RH2", m, g, n, f"LHS - RHS = {diff!r}")
                    if first_only:
                        return out
    return out


def rh2_defect(R, g, n):
    """LHS - RHS of RH2 on the chain g restricted to degree n."""
    G = R.base
    m = len(g) - 1
    rows, cols = R.dim(vertex(G, g, m), n + m - 2), R.dim(g[0], n)
    if rows == 0 or cols == 0:
        return None
    acc = RationalMatrix.zeros(rows, cols)
    for k in range(1, m):
        B = R.block(m - 1, face(G, g, k), n)
        if not B.is_zero():
            acc = acc + B if k % 2 == 0 else acc - B
    for k in range(0, m + 1):
        if k > R.width + 1 or m - k > R.width + 1:
            continue
        A = R.block(k, front(g, k), n)
        if A.is_zero():
            continue
        B = R.block(m - k, back(G, g, m - k), n + k - 1)
        if B.is_zero():
            continue
        P = B @ A
        acc = acc - P if k % 2 == 0 else acc + P
    return acc


# ----------------------------------------------------------------------
# constructions

def dual_ruth(R: RepUpToHomotopy) -> RepUpToHomotopy:
    """(R*)_m^g at degree j is the transpose of R_m^{g^{-1}} at degree -j-m+1."""
    G = R.base
    dims = [list(reversed(d)) for d in R.dims]
    D = RepUpToHomotopy(G, -R.hi, -R.lo, dims, None, name=f"dual({R.name})", fill_units=False)
    for (m, h, n), M in R.blocks.items():
        g = inverse_chain(G, h)
        D.blocks[(m, g, -n - m + 1)] = M.transpose()
    return D


def shift_ruth(R: RepUpToHomotopy, k: int) -> RepUpToHomotopy:
    """(E[k])_n = E_{n-k}; the structure maps are unchanged."""
    S = RepUpToHomotopy(R.base, R.lo + k, R.hi + k, R.dims, None,
                        name=f"{R.name}[{k}]" if k else R.name, fill_units=False)
    S.blocks = {(m, c, n + k): M for (m, c, n), M in R.blocks.items()}
    return S


def pullback_ruth(phi: GroupoidMorphism, R: RepUpToHomotopy) -> RepUpToHomotopy:
    """(φ*R)_m^{g'} = R_m^{φ(g')} with fibres copied along φ_0."""
    if phi.target is not R.base:
        raise RepError("morphism target is not the base of the representation")
    H = phi.source
    dims = [R.dims[phi.object_map[x]] for x in range(H.n_objects)]
    P = RepUpToHomotopy(H, R.lo, R.hi, dims, None, name=f"pullback({R.name})", fill_units=False)
    by_chain = {}
    for (m, c, n), M in R.blocks.items():
        by_chain.setdefault((m, c), []).append((n, M))
    for m in range(0, R.max_m() + 1):
        for g in H.nerve(m):
            for n, M in by_chain.get((m, phi.on_chain(g)), ()):
                P.blocks[(m, g, n)] = M
    return P


def trivial_rep(G: FiniteGroupoid, dim=1, degree=0, name="trivial"):
    dims = [[dim] for _ in range(G.n_objects)]
    blocks = {}
    for g in range(G.n_arrows):
        blocks[(1, (G.src[g], g), degree)] = RationalMatrix.identity(dim)
    return RepUpToHomotopy(G, degree, degree, dims, blocks, name=name)


def genuine_rep(G: FiniteGroupoid, dims, action, degree=0, name="rep"):
    """A representation on a single vector bundle: action[g] is the matrix of R_g."""
    dims = [[d] for d in dims]
    blocks = {}
    for g in range(G.n_arrows):
        M = action[g] if isinstance(action[g], RationalMatrix) else RationalMatrix.from_rows(action[g])
        blocks[(1, (G.src[g], g), degree)] = M
    return RepUpToHomotopy(G, degree, degree, dims, blocks, name=name)


def chain_complex_rep(G: FiniteGroupoid, lo, hi, dims, differentials, name="complex"):
    """Over a unit groupoid: differentials[x][n] is the matrix E_n^x -> E_{n-1}^x."""
    if any(not G.is_unit(g) for g in range(G.n_arrows)):
        raise RepError("chain complexes give representations only over unit groupoids")
    blocks = {}
    for x in range(G.n_objects):
        for n, M in (differentials[x] if not isinstance(differentials, dict) else
                     differentials.get(x, differentials.get(G.object_labels[x], {}))).items():
            if not isinstance(M, RationalMatrix):
                M = RationalMatrix.from_rows(M, ncols=dims[x][n - lo])
            blocks[(0, (x,), n)] = M
    return RepUpToHomotopy(G, lo, hi, dims, blocks, name=name)


def two_term_data(G, dims1, dims0, anchor, r1_deg1, r1_deg0, name="two-term"):
    """Degrees {0,1}; anchor[x] : E_1^x -> E_0^x; r1_deg*[g] the quasi-action on arrows."""
    def mat(M, r, c):
        return M if isinstance(M, RationalMatrix) else RationalMatrix.from_rows(M, ncols=c) \
            if M else RationalMatrix.zeros(r, c)
    dims = [[dims0[x], dims1[x]] for x in range(G.n_objects)]
    blocks = {}
    for x in range(G.n_objects):
        blocks[(0, (x,), 1)] = mat(anchor[x], dims0[x], dims1[x])
    for g in range(G.n_arrows):
        s, t = G.src[g], G.tgt[g]
        if g in r1_deg1:
            blocks[(1, (s, g), 1)] = mat(r1_deg1[g], dims1[t], dims1[s])
        if g in r1_deg0:
            blocks[(1, (s, g), 0)] = mat(r1_deg0[g], dims0[t], dims0[s])
    return RepUpToHomotopy(G, 0, 1, dims, blocks, name=name)


def complete_two_term(R: RepUpToHomotopy) -> RepUpToHomotopy:
    """Solve for R_2 on a 2-term bundle (degrees 0, 1) given R_0 and R_1.

    All RH2 equations at levels 2 and 3 are linear in R_2; the returned
    solution sets free variables to zero."""
    G = R.base
    if (R.lo, R.hi) != (0, 1):
        raise RepError("complete_two_term needs a bundle in degrees {0, 1}")
    for g in G.nerve(1):
        for n in (0, 1):
            d = rh2_defect(R, g, n)
            if d is not None and not d.is_zero():
                raise RepError(f"R_1 on {G.label_chain(g)} is not a chain map")
    bad = [v for v in check_ruth(R, max_level=1) if v["axiom"] == "RH1" or v["m"] <= 1]
    if bad:
        raise RepError(f"R_0/R_1 data violates the axioms: {bad[0]}")
    # unknowns: entries of R_2^g : E_0^{x0} -> E_1^{x2}, g nondegenerate
    var = {}
    nvar = 0
    for g in G.nondegenerate(2):
        r, c = R.dim(vertex(G, g, 2), 1), R.dim(g[0], 0)
        var[g] = (nvar, r, c)
        nvar += r * c
    rows, rhs, labels = [], [], []

    def eqn(terms, const, label):
        # terms: list of (coef, g, a, b) meaning coef * R_2^g[a, b]
        row = {}
        for coef, g, a, b in terms:
            if g not in var:
                continue
            off, r, c = var[g]
            k = off + a * c + b
            row[k] = row.get(k, 0) + coef
        row = {k: v for k, v in row.items() if v}
        const = to_fraction(const)
        if row or const:
            rows.append(row)
            rhs.append(const)
            labels.append(label)

    def r1(g, n):
        return R.block(1, g, n)

    for g in G.nerve(2):
        x0, x2 = g[0], vertex(G, g, 2)
        g1, g2 = front(g, 1), back(G, g, 1)
        comp = face(G, g, 1)
        target = {n: r1(g2, n) @ r1(g1, n) - r1(comp, n) for n in (0, 1)}
        d0, d2 = R.block(0, (x0,), 1), R.block(0, (x2,), 1)
        # degree 1: R_2^g ∂^{x0} = target_1 ; entries (a, b) of E_1^{x0} -> E_1^{x2}
        for a in range(R.dim(x2, 1)):
            for b in range(R.dim(x0, 1)):
                terms = [(d0[k, b], g, a, k) for k in range(R.dim(x0, 0)) if d0[k, b]]
                eqn(terms, target[1][a, b], ("m=2", G.label_chain(g), 1, a, b))
        # degree 0: ∂^{x2} R_2^g = target_0
        for a in range(R.dim(x2, 0)):
            for b in range(R.dim(x0, 0)):
                terms = [(d2[a, k], g, k, b) for k in range(R.dim(x2, 1)) if d2[a, k]]
                eqn(terms, target[0][a, b], ("m=2", G.label_chain(g), 0, a, b))
    for g in G.nerve(3):
        x0, x3 = g[0], vertex(G, g, 3)
        f1, f2 = face(G, g, 1), face(G, g, 2)
        t2, i2 = back(G, g, 2), front(g, 2)
        A = r1(front(g, 1), 0)        # E_0^{x0} -> E_0^{x1}
        B = r1(back(G, g, 1), 1)      # E_1^{x2} -> E_1^{x3}
        x1, x2 = vertex(G, g, 1), vertex(G, g, 2)
        for a in range(R.dim(x3, 1)):
            for b in range(R.dim(x0, 0)):
                terms = [(-1, f1, a, b), (1, f2, a, b)]
                # R_2^{gτ_2} R_1^{g1}: sum_k R_2[a,k] A[k,b]
                terms += [(A[k, b], t2, a, k) for k in range(R.dim(x1, 0)) if A[k, b]]
                # - R_1^{g3} R_2^{gι_2}
                terms += [(-B[a, k], i2, k, b) for k in range(R.dim(x2, 1)) if B[a, k]]
                eqn(terms, 0, ("m=3", G.label_chain(g), 0, a, b))
    A = RationalMatrix(len(rows), nvar, {i: r for i, r in enumerate(rows)})
    try:
        x = solve(A, rhs)
    except InconsistentSystem as e:
        wit = [(c, labels[i]) for i, c in enumerate(e.witness) if c]
        raise InfeasibleCompletion("no R_2 completes this quasi-action", wit) from None
    out = R.copy(name=R.name)
    for g, (off, r, c) in var.items():
        M = RationalMatrix.from_entries(r, c, [(a, b, x[off + a * c + b])
                                               for a in range(r) for b in range(c)])
        if not M.is_zero():
            out.blocks[(2, g, 0)] = M
    return out
