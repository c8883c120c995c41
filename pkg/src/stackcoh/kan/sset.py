"""
Finite simplicial sets truncated at a dimension cap.

Every simplex set X_n (n <= cap) is stored in full: simplices are integers
0..|X_n|-1 with face tables d_i and degeneracy tables s_j.  The
Eilenberg-Zilber normal form (nondegenerate simplex, surjection) is
derived from the tables and is what the file format records.
"""

from __future__ import annotations

from itertools import combinations

from ..groupoid import FiniteGroupoid, GroupoidMorphism, degeneracy, face
from ..ordinal import OrdinalMap, compose, delta, sigma


class SSetError(ValueError):
    def __init__(self, message, violations=None):
        super().__init__(message)
        self.violations = violations or []


class CapExceeded(ValueError):
    pass


def _surjections(n, p):
    """Monotone surjections [n] -> [p] in lexicographic order."""
    out = []
    for cut in combinations(range(1, n + 1), p):
        vals, level, cuts = [], 0, set(cut)
        for i in range(n + 1):
            if i in cuts:
                level += 1
            vals.append(level)
        out.append(OrdinalMap(vals, p))
    return out


def _split_surjective(rho):
    """rho = mu . e with e surjective and mu injective; returns (e, missing values of mu)."""
    image = sorted(set(rho.values))
    pos = {v: t for t, v in enumerate(image)}
    e = OrdinalMap([pos[v] for v in rho.values], len(image) - 1)
    missing = [v for v in range(rho.target_size + 1) if v not in pos]
    return e, missing


class TruncatedSSet:
    def __init__(self, cap, counts, faces, degens, name="", keys=None, validate=True):
        """counts[n] = |X_n|; faces[n][i][x] for n >= 1; degens[n][j][x] for n < cap."""
        self.cap = int(cap)
        self.name = name
        self.counts = [int(c) for c in counts]
        if len(self.counts) != self.cap + 1:
            raise SSetError("one simplex count per dimension 0..cap is required")
        self.faces = {n: [list(t) for t in faces[n]] for n in range(1, self.cap + 1)}
        self.degens = {n: [list(t) for t in degens[n]] for n in range(0, self.cap)}
        self.keys = keys
        self._face_index = {}
        if validate:
            bad = self.violations()
            if bad:
                raise SSetError(f"simplicial identities fail: {bad[0]}", bad)
        self._normal_forms()

    # -- basic access ----------------------------------------------------------
    def size(self, n):
        if n > self.cap:
            raise CapExceeded(f"dimension {n} above cap {self.cap}")
        return self.counts[n]

    def d(self, i, n, x):
        return self.faces[n][i][x]

    def s(self, j, n, x):
        if n >= self.cap:
            raise CapExceeded(f"degeneracy out of dimension {n} exceeds cap {self.cap}")
        return self.degens[n][j][x]

    def act(self, n, x, theta: OrdinalMap):
        """x . theta for monotone theta: [m] -> [n]."""
        if theta.target_size != n:
            raise ValueError("theta does not land in the simplex dimension")
        e, missing = _split_surjective(theta)
        for v in reversed(missing):
            x = self.faces[n][v][x]
            n -= 1
        m = e.source_size
        # e^* is the composite of s_i over the positions where e repeats
        for i in range(m):
            if e.values[i] == e.values[i + 1]:
                x = self.degens[n][i][x]
                n += 1
        return x

    def face_tuple(self, n, x):
        return tuple(self.faces[n][i][x] for i in range(n + 1))

    def face_index(self, n):
        """{(d_0 x, ..., d_n x): [x]} used to prune hom enumeration."""
        idx = self._face_index.get(n)
        if idx is None:
            idx = {}
            for x in range(self.counts[n]):
                idx.setdefault(self.face_tuple(n, x), []).append(x)
            self._face_index[n] = idx
        return idx

    # -- validation ------------------------------------------------------------
    def violations(self, first_only=True):
        out = []
        F, S = self.faces, self.degens
        for n in range(1, self.cap + 1):
            if len(F[n]) != n + 1:
                return [("face count", n)]
            for i in range(n + 1):
                if len(F[n][i]) != self.counts[n] or any(not 0 <= y < self.counts[n - 1] for y in F[n][i]):
                    return [("face range", n, i)]
        for n in range(0, self.cap):
            if len(S[n]) != n + 1:
                return [("degeneracy count", n)]
            for j in range(n + 1):
                if len(S[n][j]) != self.counts[n] or any(not 0 <= y < self.counts[n + 1] for y in S[n][j]):
                    return [("degeneracy range", n, j)]
        for n in range(2, self.cap + 1):
            for x in range(self.counts[n]):
                for j in range(1, n + 1):
                    for i in range(j):
                        if F[n - 1][i][F[n][j][x]] != F[n - 1][j - 1][F[n][i][x]]:
                            out.append((f"d{i} d{j} = d{j - 1} d{i}", n, x))
                            if first_only:
                                return out
        for n in range(0, self.cap - 1):
            for x in range(self.counts[n]):
                for j in range(n + 1):
                    for i in range(j + 1):
                        if S[n + 1][i][S[n][j][x]] != S[n + 1][j + 1][S[n][i][x]]:
                            out.append((f"s{i} s{j} = s{j + 1} s{i}", n, x))
                            if first_only:
                                return out
        for n in range(0, self.cap):
            for x in range(self.counts[n]):
                for j in range(n + 1):
                    y = S[n][j][x]
                    for i in range(n + 2):
                        got = F[n + 1][i][y]
                        if i < j:
                            want = S[n - 1][j - 1][F[n][i][x]]
                        elif i in (j, j + 1):
                            want = x
                        else:
                            want = S[n - 1][j][F[n][i - 1][x]]
                        if got != want:
                            out.append((f"d{i} s{j}", n, x))
                            if first_only:
                                return out
        return out

    # -- normal forms ----------------------------------------------------------
    def _normal_forms(self):
        self.nondeg = {}
        self.normal = {}
        for n in range(0, self.cap + 1):
            image = set()
            if n > 0:
                for j in range(n):
                    image.update(self.degens[n - 1][j])
            self.nondeg[n] = [x for x in range(self.counts[n]) if x not in image]
            nf = [None] * self.counts[n]
            for x in self.nondeg[n]:
                nf[x] = (n, x, OrdinalMap(range(n + 1), n))
            if n > 0:
                for j in range(n):
                    s_j = sigma(j, n - 1)
                    for y, x in enumerate(self.degens[n - 1][j]):
                        if nf[x] is None:
                            p, z, tau = self.normal[n - 1][y]
                            nf[x] = (p, z, compose(s_j, tau))
            self.normal[n] = nf
        self.nondeg_pos = {n: {x: t for t, x in enumerate(self.nondeg[n])} for n in self.nondeg}

    def dimension(self):
        top = 0
        for n in range(self.cap + 1):
            if self.nondeg[n]:
                top = n
        return top

    def nondegenerate(self):
        """[(n, x)] by dimension then index."""
        return [(n, x) for n in range(self.cap + 1) for x in self.nondeg[n]]

    def face_records(self, n, x):
        """Faces of a nondegenerate simplex as (nondeg simplex, surjection)."""
        out = []
        for i in range(n + 1):
            p, z, tau = self.normal[n - 1][self.faces[n][i][x]]
            out.append((p, z, tau))
        return out

    def label(self, n, x):
        if self.keys is not None:
            return self.keys[n][x]
        return (n, x)

    def __repr__(self):
        return f"TruncatedSSet({self.name or '?'}, counts={self.counts})"


def from_normal_forms(cap, nondeg_counts, face_records, name="", validate=True):
    """Build the full tables from nondegenerate simplices and their face records.

    nondeg_counts[p] = number of nondegenerate p-simplices (ids 0..c-1);
    face_records[p][y] = [(q, z, tau) for i = 0..p] where tau: [p-1] -> [q]
    is a surjection and z a nondegenerate q-simplex.
    """
    nondeg_counts = list(nondeg_counts) + [0] * (cap + 1 - len(nondeg_counts))
    bad = []
    for p in range(1, cap + 1):
        for y in range(nondeg_counts[p]):
            recs = face_records[p][y]
            if len(recs) != p + 1:
                bad.append(("face record count", p, y))
                continue
            for i, (q, z, tau) in enumerate(recs):
                tau = tau if isinstance(tau, OrdinalMap) else OrdinalMap(tau, q)
                if not (0 <= q <= p - 1 and 0 <= z < nondeg_counts[q] and tau.source_size == p - 1
                        and tau.target_size == q and tau.is_surjective and tau.is_monotone):
                    bad.append(("malformed face record", p, y, i))
    if bad:
        raise SSetError(f"bad face records: {bad[0]}", bad)

    def rec(p, y, i):
        q, z, tau = face_records[p][y][i]
        return q, z, tau if isinstance(tau, OrdinalMap) else OrdinalMap(tau, q)

    def act_nf(p, y, rho):
        # y . rho for rho: [m] -> [p]
        while True:
            if rho.is_surjective:
                return (p, y, rho)
            image = set(rho.values)
            v = max(u for u in range(p + 1) if u not in image)
            rho2 = OrdinalMap([u if u < v else u - 1 for u in rho.values], p - 1)
            q, z, tau = rec(p, y, v)
            p, y, rho = q, z, compose(rho2, tau)

    # simplicial identities on nondegenerate simplices, through normal forms
    for p in range(2, cap + 1):
        for y in range(nondeg_counts[p]):
            for j in range(1, p + 1):
                for i in range(j):
                    q1, z1, t1 = rec(p, y, j)
                    q2, z2, t2 = rec(p, y, i)
                    a = act_nf(q1, z1, compose(delta(i, p - 1), t1))
                    b = act_nf(q2, z2, compose(delta(j - 1, p - 1), t2))
                    if (a[0], a[1], a[2].values) != (b[0], b[1], b[2].values):
                        bad.append((f"d{i} d{j} = d{j - 1} d{i}", p, y))
    if bad:
        raise SSetError(f"simplicial identities fail: {bad[0]}", bad)

    keys, index = {}, {}
    for n in range(cap + 1):
        lst = [(n, y, tuple(range(n + 1))) for y in range(nondeg_counts[n])]
        for p in range(n - 1, -1, -1):
            for e in _surjections(n, p):
                lst.extend((p, y, e.values) for y in range(nondeg_counts[p]))
        keys[n] = lst
        index[n] = {k: t for t, k in enumerate(lst)}

    def key_of(p, y, rho):
        return (p, y, rho.values)

    faces, degens = {}, {}
    for n in range(1, cap + 1):
        faces[n] = []
        for i in range(n + 1):
            d_i = delta(i, n)
            col = []
            for (p, y, vals) in keys[n]:
                col.append(index[n - 1][key_of(*act_nf(p, y, compose(d_i, OrdinalMap(vals, p))))])
            faces[n].append(col)
    for n in range(0, cap):
        degens[n] = []
        for j in range(n + 1):
            s_j = sigma(j, n)
            degens[n].append([index[n + 1][(p, y, compose(s_j, OrdinalMap(vals, p)).values)]
                              for (p, y, vals) in keys[n]])
    return TruncatedSSet(cap, [len(keys[n]) for n in range(cap + 1)], faces, degens,
                         name=name, keys=keys, validate=validate)


def to_normal_form_data(X: TruncatedSSet):
    """Nondegenerate counts and face records (inverse of from_normal_forms)."""
    counts = [len(X.nondeg[n]) for n in range(X.cap + 1)]
    records = {}
    for p in range(1, X.cap + 1):
        records[p] = []
        for y in X.nondeg[p]:
            records[p].append([(q, X.nondeg_pos[q][z], tau) for q, z, tau in X.face_records(p, y)])
    return counts, records


def from_tables(cap, keys, face_fn, degen_fn, name=""):
    """Build from explicit simplex keys and face/degeneracy functions on keys."""
    index = {n: {k: t for t, k in enumerate(keys[n])} for n in range(cap + 1)}
    faces = {n: [[index[n - 1][face_fn(n, i, k)] for k in keys[n]] for i in range(n + 1)]
             for n in range(1, cap + 1)}
    degens = {n: [[index[n + 1][degen_fn(n, j, k)] for k in keys[n]] for j in range(n + 1)]
              for n in range(0, cap)}
    return TruncatedSSet(cap, [len(keys[n]) for n in range(cap + 1)], faces, degens,
                         name=name, keys=keys)


# ----------------------------------------------------------------------
# ordered simplicial complexes: simplices, horns, boundaries, prisms

class OrderedComplex:
    """A simplicial complex on an ordered vertex set; simplices are strictly
    increasing vertex tuples closed under taking faces."""

    def __init__(self, vertices, simplices, name=""):
        self.vertices = list(vertices)
        self.vpos = {v: t for t, v in enumerate(self.vertices)}
        simp = set()
        for s in simplices:
            s = tuple(sorted(s, key=self.vpos.__getitem__))
            for r in range(1, len(s) + 1):
                simp.update(combinations(s, r))
        self.by_dim = {}
        for s in simp:
            self.by_dim.setdefault(len(s) - 1, []).append(s)
        for p in self.by_dim:
            self.by_dim[p].sort(key=lambda s: [self.vpos[v] for v in s])
        self.name = name
        self.dim = max(self.by_dim) if self.by_dim else -1
        self.simplices = [s for p in sorted(self.by_dim) for s in self.by_dim[p]]
        self.pos = {s: (len(s) - 1, t) for p in self.by_dim for t, s in enumerate(self.by_dim[p])}

    def contains(self, s):
        return tuple(s) in self.pos

    def sset(self, cap=None):
        cap = max(self.dim, 0) if cap is None else cap
        counts = [len(self.by_dim.get(p, [])) for p in range(cap + 1)]
        records = {}
        for p in range(1, cap + 1):
            records[p] = []
            for s in self.by_dim.get(p, []):
                records[p].append([(p - 1, self.pos[s[:i] + s[i + 1:]][1], OrdinalMap(range(p), p - 1))
                                   for i in range(p + 1)])
        return from_normal_forms(cap, counts, records, name=self.name, validate=False)


def simplex(n):
    return OrderedComplex(range(n + 1), [tuple(range(n + 1))], name=f"Delta^{n}")


def boundary(n):
    return OrderedComplex(range(n + 1), [tuple(v for v in range(n + 1) if v != i) for i in range(n + 1)]
                          if n > 0 else [], name=f"dDelta^{n}")


def horn(n, k):
    if not 0 <= k <= n or n < 1:
        raise ValueError("horn needs n >= 1 and 0 <= k <= n")
    return OrderedComplex(range(n + 1), [tuple(v for v in range(n + 1) if v != i)
                                         for i in range(n + 1) if i != k], name=f"Lambda^{n}_{k}")


def skeleton(n, m):
    if m < 0:
        return OrderedComplex(range(n + 1), [], name=f"sk_{m}Delta^{n}")
    return OrderedComplex(range(n + 1), list(combinations(range(n + 1), min(m, n) + 1)),
                          name=f"sk_{m}Delta^{n}")


def prism(n):
    """Delta^n x Delta^1 with vertices (i, e) in product order."""
    verts = [(i, e) for e in (0, 1) for i in range(n + 1)]
    verts.sort()
    tops = []
    for j in range(n + 1):
        tops.append(tuple([(i, 0) for i in range(j + 1)] + [(i, 1) for i in range(j, n + 1)]))
    return OrderedComplex(verts, tops, name=f"Delta^{n}xDelta^1")


def point(cap):
    return from_tables(cap, {n: [()] for n in range(cap + 1)},
                       lambda n, i, k: (), lambda n, j, k: (), name="point")


# ----------------------------------------------------------------------
# simplicial maps

class SimplicialMap:
    def __init__(self, source: TruncatedSSet, target: TruncatedSSet, tables, name="", validate=True):
        self.source, self.target, self.name = source, target, name
        self.cap = min(source.cap, target.cap)
        self.f = {n: list(tables[n]) for n in range(self.cap + 1)}
        if validate:
            bad = self.violations()
            if bad:
                raise SSetError(f"map does not commute with the structure: {bad[0]}", bad)

    def violations(self):
        X, Y, f = self.source, self.target, self.f
        out = []
        for n in range(self.cap + 1):
            if len(f[n]) != X.size(n) or any(not 0 <= y < Y.size(n) for y in f[n]):
                return [("table shape", n)]
        for n in range(1, self.cap + 1):
            for i in range(n + 1):
                for x in range(X.size(n)):
                    if f[n - 1][X.faces[n][i][x]] != Y.faces[n][i][f[n][x]]:
                        return [(f"d{i}", n, x)]
        for n in range(0, self.cap):
            for j in range(n + 1):
                for x in range(X.size(n)):
                    if f[n + 1][X.degens[n][j][x]] != Y.degens[n][j][f[n][x]]:
                        return [(f"s{j}", n, x)]
        return out

    def __call__(self, n, x):
        return self.f[n][x]

    def then(self, other: "SimplicialMap"):
        return SimplicialMap(self.source, other.target,
                             {n: [other.f[n][y] for y in self.f[n]] for n in range(min(self.cap, other.cap) + 1)},
                             name=f"{other.name}.{self.name}")

    def fibers(self, n):
        out = {}
        for x, y in enumerate(self.f[n]):
            out.setdefault(y, []).append(x)
        return out


def identity_map(X: TruncatedSSet):
    return SimplicialMap(X, X, {n: list(range(X.size(n))) for n in range(X.cap + 1)}, name="id",
                         validate=False)


def terminal_map(X: TruncatedSSet, P=None):
    P = point(X.cap) if P is None else P
    return SimplicialMap(X, P, {n: [0] * X.size(n) for n in range(X.cap + 1)}, name="to-point",
                         validate=False)


def map_from_normal_forms(X, Y, assignment, name=""):
    """assignment {(n, x nondeg): y in Y_n} extended through normal forms."""
    tables = {}
    for n in range(min(X.cap, Y.cap) + 1):
        row = []
        for x in range(X.size(n)):
            p, z, tau = X.normal[n][x]
            row.append(Y.act(p, assignment[(p, z)], tau))
        tables[n] = row
    return SimplicialMap(X, Y, tables, name=name)


def fiber_product(f: SimplicialMap, g: SimplicialMap, name=""):
    """X x_Y Z for f: X -> Y and g: Z -> Y, with both projections."""
    X, Z = f.source, g.source
    cap = min(f.cap, g.cap)
    keys = {}
    for n in range(cap + 1):
        fz = g.fibers(n)
        keys[n] = [(x, z) for x in range(X.size(n)) for z in fz.get(f.f[n][x], [])]
    P = from_tables(cap, keys,
                    lambda n, i, k: (X.faces[n][i][k[0]], Z.faces[n][i][k[1]]),
                    lambda n, j, k: (X.degens[n][j][k[0]], Z.degens[n][j][k[1]]), name=name)
    p1 = SimplicialMap(P, X, {n: [k[0] for k in keys[n]] for n in range(cap + 1)}, validate=False)
    p2 = SimplicialMap(P, Z, {n: [k[1] for k in keys[n]] for n in range(cap + 1)}, validate=False)
    return P, p1, p2


# ----------------------------------------------------------------------
# nerves

def nerve_sset(G: FiniteGroupoid, cap) -> TruncatedSSet:
    keys = {n: list(G.nerve(n)) for n in range(cap + 1)}
    return from_tables(cap, keys, lambda n, i, c: face(G, c, i),
                       lambda n, j, c: degeneracy(G, c, j), name=f"N({G.name})")


def nerve_map(phi: GroupoidMorphism, X: TruncatedSSet, Y: TruncatedSSet) -> SimplicialMap:
    cap = min(X.cap, Y.cap)
    tables = {}
    for n in range(cap + 1):
        idx = {k: t for t, k in enumerate(Y.keys[n])}
        tables[n] = [idx[phi.on_chain(c)] for c in X.keys[n]]
    return SimplicialMap(X, Y, tables, name=f"N({phi.name})")


# ----------------------------------------------------------------------
# hom spaces

def hom_space(K: TruncatedSSet, X: TruncatedSSet, constraint=None):
    """All simplicial maps K -> X, as tuples indexed like K.nondegenerate().

    constraint, if given, is (f, prescribed) with f: X -> Y a SimplicialMap
    and prescribed[(p, y)] the required image in Y_p of each nondegenerate
    simplex of K; only lifts are enumerated.
    """
    gens = K.nondegenerate()
    if gens and gens[-1][0] > X.cap:
        raise CapExceeded(f"domain has a {gens[-1][0]}-simplex but the target stops at {X.cap}")
    slot = {g: t for t, g in enumerate(gens)}
    f, pres = constraint if constraint is not None else (None, None)
    plan = []
    for (p, y) in gens:
        if p == 0:
            plan.append((p, y, None))
        else:
            req = []
            for q, z, tau in K.face_records(p, y):
                req.append((slot[(q, z)], q, tau))
            plan.append((p, y, req))
    out = []
    assign = [0] * len(gens)
    vertex_pool = list(range(X.size(0)))

    def rec(t):
        if t == len(plan):
            out.append(tuple(assign))
            return
        p, y, req = plan[t]
        if req is None:
            cands = vertex_pool
        else:
            ft = tuple(X.act(q, assign[s], tau) for s, q, tau in req)
            cands = X.face_index(p).get(ft, ())
        if f is not None:
            want = pres[(p, y)]
            cands = [c for c in cands if f.f[p][c] == want]
        for c in cands:
            assign[t] = c
            rec(t + 1)

    rec(0)
    return HomSpace(K, X, gens, out)


class HomSpace:
    def __init__(self, K, X, gens, maps):
        self.K, self.X, self.gens, self.maps = K, X, gens, maps
        self.slot = {g: t for t, g in enumerate(gens)}

    def __len__(self):
        return len(self.maps)

    def __iter__(self):
        return iter(self.maps)


def restrict_simplex(X: TruncatedSSet, n, x, C: OrderedComplex):
    """Restriction of x in X_n to a subcomplex C of Delta^n, as a tuple indexed
    like C.sset().nondegenerate()."""
    return tuple(X.act(n, x, OrdinalMap(s, n)) for s in C.simplices)


def compose_hom(f: SimplicialMap, K, phi_tuple):
    """f o phi for phi given on the nondegenerate simplices of K."""
    return tuple(f.f[p][x] for (p, _), x in zip(K.nondegenerate(), phi_tuple))


def relative_hom(f: SimplicialMap, K: OrderedComplex, L: OrderedComplex):
    """Commutative squares (K -> X, L -> Y): pairs (a, b) with f a = b|_K."""
    KS, LS = K.sset(), L.sset()
    XK = hom_space(KS, f.source)
    YL = hom_space(LS, f.target)
    kpos = [LS.nondegenerate().index(L.pos[s]) for s in K.simplices]
    by_restriction = {}
    for b in YL:
        by_restriction.setdefault(tuple(b[t] for t in kpos), []).append(b)
    out = []
    for a in XK:
        for b in by_restriction.get(compose_hom(f, KS, a), []):
            out.append((a, b))
    return out
