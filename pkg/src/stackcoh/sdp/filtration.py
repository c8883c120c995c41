"""
The filtration of linear cochains by m-regularity and the regularization map.

F_m C^n holds the cochains supported on m-regular indices; the subcomplex
hat F_m C^n adds the condition that delta c is m-regular too.  The
regularization map I = id + h* delta + delta h* moves hat F_m into itself
and strictly lowers the defect, so I^n lands in hat F_{m+1}.
"""

from __future__ import annotations

from fractions import Fraction

from ..exactla import RationalMatrix, rank
from ..groupoid import chain_along, face
from ..ordinal import OrdinalMap, compose, delta, sigma
from ..groupoid import eta_values
from .linear import DomainError, LinearComplex, face_pullback, is_m_projectable, is_regular


def _split(L, n, m):
    reg, non = [], []
    for t, (a, g, c) in enumerate(L.bases.get(n, ())):
        (reg if is_regular(a, m) else non).append(t)
    return reg, non


def _sub(M, rows, cols):
    return M.select_rows(rows).select_cols(cols)


def hat_dim(L: LinearComplex, n, m):
    """dim hat F_m C^n (m None: projectable cochains)."""
    reg, _ = _split(L, n, m)
    _, non1 = _split(L, n + 1, m)
    return len(reg) - rank(_sub(L.D[n], non1, reg))


def filtered_cohomology_dim(L: LinearComplex, n, m):
    """dim H^n(hat F_m C) from ranks:
    |F^n| - rank(D_n|F^n) - rank(D_{n-1}|F^{n-1}) + rank(P_non D_{n-1}|F^{n-1})."""
    if n < 0:
        return 0
    if n > L.cap - 1:
        raise ValueError(f"degree {n} needs a larger cap (cap={L.cap})")
    reg, non = _split(L, n, m)
    d = len(reg) - rank(L.D[n].select_cols(reg))
    if n > 0:
        reg0, _ = _split(L, n - 1, m)
        Dp = L.D[n - 1].select_cols(reg0)
        d -= rank(Dp) - rank(Dp.select_rows(non))
    return d


def filtration_table(L: LinearComplex, ms, stop=None):
    stop = L.cap - 1 if stop is None else stop
    return {m: {n: filtered_cohomology_dim(L, n, m) for n in range(0, stop + 1)} for m in ms}


def eta_map(m, n):
    return OrdinalMap(eta_values(m, n), n)


class Regularization:
    """The homotopy h for a fixed m and the map I on C_lin up to the cap."""

    def __init__(self, L: LinearComplex, m: int):
        self.L, self.m = L, m
        self.H = {}
        for n in range(0, L.cap):
            self.H[n] = self._h_star(n)
        self.H[-1] = RationalMatrix.zeros(0, L.dim(0))
        self.I = {}
        for n in range(0, L.cap):
            M = RationalMatrix.identity(L.dim(n)) + self.H[n] @ L.D[n]
            if n > 0:
                M = M + L.D[n - 1] @ self.H[n - 1]
            self.I[n] = M

    def _h_star(self, n):
        """h*: C^{n+1} -> C^n, (h* c)(e, alpha, g) = (-1)^{m+1} c(e, delta_{m+1} alpha, g eta)."""
        L, m, G = self.L, self.m, self.L.G
        entries = []
        if n > m:
            eta = eta_map(m, n)
            d = delta(m + 1, n + 1)
            s = -1 if (m + 1) % 2 else 1
            idx1 = L.index[n + 1]
            chains = {}
            for t, (a, g, c) in enumerate(L.bases[n]):
                if a.values[-1] <= m:
                    continue
                ge = chains.get(g)
                if ge is None:
                    ge = chains[g] = chain_along(G, g, eta, allow_nonmonotone=True)
                entries.append((t, idx1[(compose(a, d), ge, c)], s))
        return RationalMatrix.from_entries(L.dim(n), L.dim(n + 1), entries)

    def apply(self, n, vector):
        return self.I[n].apply(vector)

    def defect(self, n, vector):
        """Largest gap alpha(m+1) - (m+1) in the support; requires m-regular
        support.  vector is a dense list or a sparse dict."""
        m = self.m
        out = 0
        support = vector if isinstance(vector, dict) else (t for t, x in enumerate(vector) if x)
        for t in support:
            a = self.L.bases[n][t][0]
            if not is_regular(a, m):
                raise DomainError("defect needs an m-regular cochain")
            if a.source_size >= m + 1:
                out = max(out, a.values[m + 1] - (m + 1))
        return out

    def regularize(self, n, vector, iterations=None):
        """I^t(c) for c in hat F_m C^n (t defaults to n) with a primitive b such
        that I^t(c) - c = delta b whenever c is closed."""
        L = self.L
        if n >= L.cap:
            raise ValueError(f"regularization in degree {n} needs cap > {n}")
        c = {t: Fraction(x) for t, x in enumerate(vector) if x}
        if not is_m_projectable(L, n, c, self.m):
            raise DomainError(f"cochain is not {self.m}-projectable")
        t = n if iterations is None else iterations
        prim = {}
        trace = [self.defect(n, c)]
        for _ in range(t):
            if n > 0:
                for k, v in self.H[n - 1].apply_sparse(c).items():
                    prim[k] = prim.get(k, 0) + v
            c = self.I[n].apply_sparse(c)
            trace.append(self.defect(n, c))
        return RegularizationResult(n, _dense(c, L.dim(n)),
                                    _dense(prim, L.dim(n - 1) if n > 0 else 0), trace)


def _dense(vec, size):
    out = [Fraction(0)] * size
    for t, v in vec.items():
        out[t] = Fraction(v)
    return out


class RegularizationResult:
    def __init__(self, degree, cochain, primitive, defects):
        self.degree = degree
        self.cochain = cochain
        self.primitive = primitive
        self.defects = defects


def hat_basis(L: LinearComplex, n, m):
    """Columns spanning hat F_m C^n, as dense vectors."""
    from ..exactla import kernel
    reg, _ = _split(L, n, m)
    _, non1 = _split(L, n + 1, m)
    K = kernel(_sub(L.D[n], non1, reg))
    out = []
    for col in K.columns_as_dicts():
        v = [Fraction(0)] * L.dim(n)
        for r, x in col.items():
            v[reg[r]] = x
        out.append(v)
    return out


def lemma_h_failures(L: LinearComplex, m: int, n: int, reg: Regularization = None):
    """Evaluate clauses a)-f) for h and faces on every homogeneous basis vector
    of level n, against every m-regular cochain.  Returns violations."""
    if reg is None:
        reg = Regularization(L, m)
    if n + 1 > L.cap or n < 1:
        raise ValueError("lemma checks need 1 <= n < cap")
    G = L.G
    out = []
    regs, non = _split(L, n, m)
    regset = set(regs)
    idx = L.index[n]
    Fn = {r: face_pullback(L, n, r) for r in range(n + 1)}
    Fn1 = {r: face_pullback(L, n + 1, r) for r in range(n + 2)}
    hd = {r: Fn[r] @ reg.H[n - 1] for r in range(n + 1)}          # c -> c h d_r
    dh = {r: reg.H[n] @ Fn1[r] for r in range(n + 2)}             # c -> c d_r h

    def restricted_row(M, t):
        return {c: v for c, v in M.row(t).items() if c in regset}

    s_m1 = -1 if (m + 1) % 2 else 1
    for r in range(n + 2):
        # a)
        if r > m + 1 and r <= n and not _sub(hd[r], non, regs).is_zero():
            out.append(("a", "c h d_r", r))
        if r > m and not _sub(dh[r], non, regs).is_zero():
            out.append(("a", "c d_r h", r))
        # b)
        if m < r < n and hd[r] != dh[r + 1]:
            out.append(("b", r))
        # c)
        if 0 < r <= m and not dh[r].select_cols(regs).is_zero():
            out.append(("c", r))
    for t, (a, g, c) in enumerate(L.bases[n]):
        missing = sorted(set(range(m + 2)) - set(a.values))
        for r in range(1, min(m, n) + 1):
            row = restricted_row(hd[r], t)
            if not row:
                continue
            if not (n - 1 > m and missing == [r]):
                out.append(("d", r, "conditions", t))
                continue
            b = compose(compose(a, sigma(r - 1, n - 1)), delta(m + 1, n))
            gg = chain_along(G, face(G, g, r), eta_map(m, n - 1), allow_nonmonotone=True)
            want = {idx[(b, gg, c)]: s_m1} if idx[(b, gg, c)] in regset else {}
            if row != want:
                out.append(("d", r, "value", t))
        if is_regular(a, m + 1):
            continue
        row = restricted_row(dh[0], t)
        if row:
            ok = n - 1 > m and is_regular(a, m)
            if ok:
                gg = face(G, chain_along(G, g, eta_map(m, n), allow_nonmonotone=True), 0)
                want = {idx[(a, gg, c)]: -1} if idx[(a, gg, c)] in regset else {}
                ok = row == want
            if not ok:
                out.append(("e", t))
        row = restricted_row(hd[0], t)
        if row:
            ok = n - 1 > m and len(missing) == 1
            if ok:
                r = missing[0]
                b = compose(compose(a, sigma(r - 1, n - 1)), delta(m + 1, n))
                gg = chain_along(G, face(G, g, 0), eta_map(m, n - 1), allow_nonmonotone=True)
                sgn = -1 if (m + r) % 2 else 1
                want = {idx[(b, gg, c)]: sgn} if idx[(b, gg, c)] in regset else {}
                ok = row == want
            if not ok:
                out.append(("f", t))
    return out


def filtration_cohomology(G, R, cap, ms=None, L=None):
    """Table dim H^n(hat F_m C) for m in ms (default 0..cap) and n <= cap-1,
    plus the C_lin and C_proj rows."""
    if L is None:
        from .bundle import SdpBundle
        L = LinearComplex(SdpBundle(G, R, cap), cap)
    ms = list(range(0, cap + 1)) if ms is None else list(ms)
    table = filtration_table(L, ms)
    return {"table": table,
            "lin": L.cohomology_dims(),
            "proj": {n: filtered_cohomology_dim(L, n, None) for n in range(0, L.cap)},
            "constant": all(table[m] == table[ms[0]] for m in ms)}


def closed_basis(L: LinearComplex, n, m):
    """Cocycles supported on m-regular indices (these lie in hat F_m)."""
    from ..exactla import kernel
    reg, _ = _split(L, n, m)
    K = kernel(L.D[n].select_cols(reg))
    out = []
    for col in K.columns_as_dicts():
        v = [Fraction(0)] * L.dim(n)
        for r, x in col.items():
            v[reg[r]] = x
        out.append(v)
    return out


class RegularizationReport:
    def __init__(self, m):
        self.m = m
        self.failures = []
        self.tested = 0
        self.positive_defects = 0
        self.certificates = 0

    @property
    def passed(self):
        return not self.failures


def regularization_report(L: LinearComplex, m, stop=None, reg=None):
    """Run I on a basis of hat F_m C^n and on a basis of its cocycles for
    n <= stop: I keeps hat F_m, lowers a positive defect, I^n lands in
    hat F_{m+1}, and I^n c - c = delta(primitive) for closed c."""
    reg = Regularization(L, m) if reg is None else reg
    stop = L.cap - 1 if stop is None else stop
    out = RegularizationReport(m)
    for n in range(0, stop + 1):
        for closed, basis in ((False, hat_basis(L, n, m)), (True, closed_basis(L, n, m))):
            for v in basis:
                out.tested += 1
                sv = {t: x for t, x in enumerate(v) if x}
                w = reg.I[n].apply_sparse(sv)
                if not is_m_projectable(L, n, w, m):
                    out.failures.append(("preserves", n))
                d0, d1 = reg.defect(n, sv), reg.defect(n, w)
                if d0 > 0:
                    out.positive_defects += 1
                    if not d1 < d0:
                        out.failures.append(("decreases", n, d0, d1))
                elif d1 != 0:
                    out.failures.append(("stays regular", n))
                res = reg.regularize(n, v)
                if not is_m_projectable(L, n, res.cochain, m + 1):
                    out.failures.append(("lands", n))
                if closed:
                    diff = [a - b for a, b in zip(res.cochain, v)]
                    got = L.D[n - 1].apply(res.primitive) if n > 0 else [Fraction(0)] * len(v)
                    if got != diff:
                        out.failures.append(("certificate", n))
                    else:
                        out.certificates += 1
    return out
