"""
Fibration, hypercover and simplicity flags for maps of finite simplicial
sets, and the surjectivity check for relative hom spaces.

For f: X -> Y the relative matching map is
    X_n -> X^{dDelta^n} x_{Y^{dDelta^n}} Y_n
and the relative horn maps use Lambda^n_k instead of the boundary; at
n = 0 both reduce to f_0.
"""

from __future__ import annotations

from collections import Counter

from .sset import (OrderedComplex, SimplicialMap, boundary, compose_hom, hom_space, horn,
                   restrict_simplex)


class InvalidCollapse(ValueError):
    pass


def relative_restriction(f: SimplicialMap, n, K: OrderedComplex):
    """Compare X_n with X^K x_{Y^K} Y_n for K a subcomplex of Delta^n.

    Returns (surjective, injective, fibre-size histogram of the map)."""
    X, Y = f.source, f.target
    if n == 0 and not K.simplices:
        image = Counter(f.f[0])
        pairs = set(range(Y.size(0)))
        hits = Counter({y: image.get(y, 0) for y in pairs})
    else:
        KS = K.sset()
        XK = hom_space(KS, X)
        yidx = {}
        for y in range(Y.size(n)):
            yidx.setdefault(restrict_simplex(Y, n, y, K), []).append(y)
        pairs = set()
        for a in XK:
            for y in yidx.get(compose_hom(f, KS, a), ()):
                pairs.add((a, y))
        image = Counter((restrict_simplex(X, n, x, K), f.f[n][x]) for x in range(X.size(n)))
        hits = Counter({p: image.get(p, 0) for p in pairs})
    surjective = all(v > 0 for v in hits.values())
    injective = all(v <= 1 for v in hits.values())
    hist = Counter(hits.values())
    return surjective, injective, dict(sorted(hist.items()))


def classify_sset_map(f: SimplicialMap, cap=None):
    """Per-level flags and the list of m for which f is an m-simple hypercover."""
    cap = f.cap if cap is None else min(cap, f.cap)
    levels = {}
    for n in range(0, cap + 1):
        s, i, hist = relative_restriction(f, n, boundary(n) if n > 0 else OrderedComplex([0], []))
        if n == 0:
            fib = s
        else:
            fib = all(relative_restriction(f, n, horn(n, k))[0] for k in range(n + 1))
        levels[n] = {"fibration": fib, "hypercover": s, "bijective": s and i, "fibers": hist}
    hyper = all(v["hypercover"] for v in levels.values())
    fibr = all(v["fibration"] for v in levels.values())
    simple = [m for m in range(0, cap + 1)
              if hyper and all(levels[n]["bijective"] for n in levels if n != m)]
    return {"levels": levels, "fibration": fibr, "hypercover": hyper, "m_simple": simple}


def verify_collapses(L: OrderedComplex, K: OrderedComplex, steps):
    """Check that L collapses onto K through the elementary steps (sigma, k):
    sigma is a maximal simplex whose k-th face is free, so the current
    complex is the previous one with Delta^n glued along Lambda^n_k."""
    current = set(L.simplices)
    for t, (sig, k) in enumerate(steps):
        sig = tuple(sig)
        n = len(sig) - 1
        if n < 1 or not 0 <= k <= n:
            raise InvalidCollapse(f"step {t}: bad dimension or face index")
        tau = sig[:k] + sig[k + 1:]
        if sig not in current or tau not in current:
            raise InvalidCollapse(f"step {t}: {sig} or its face {tau} is missing")
        for s in current:
            if s != sig and set(sig) < set(s):
                raise InvalidCollapse(f"step {t}: {sig} is not maximal")
            if s not in (sig, tau) and set(tau) < set(s):
                raise InvalidCollapse(f"step {t}: face {tau} is not free")
        rest = current - {sig, tau}
        for s in rest:
            for i in range(len(s)):
                if len(s) > 1 and s[:i] + s[i + 1:] not in rest:
                    raise InvalidCollapse(f"step {t}: remainder is not a subcomplex")
        # the removed part is Delta^n minus Lambda^n_k: every other face stays
        for i in range(n + 1):
            if i != k and sig[:i] + sig[i + 1:] not in rest:
                raise InvalidCollapse(f"step {t}: horn Lambda^{n}_{k} is not in the remainder")
        current = rest
    if current != set(K.simplices):
        raise InvalidCollapse("the collapses do not end at the subcomplex")
    return True


def prop_hom_check(f: SimplicialMap, K: OrderedComplex, L: OrderedComplex, certificate=None):
    """Surjectivity of X^L -> X^K x_{Y^K} Y^L for K inside L.

    Case a: f is a hypercover.  Case b: f is a fibration and the caller
    supplies elementary collapses from L down to K."""
    if not set(K.simplices) <= set(L.simplices):
        raise ValueError("K is not a subcomplex of L")
    flags = classify_sset_map(f, max(L.dim, 0))
    if certificate is not None:
        verify_collapses(L, K, certificate)
        case = "b"
        applicable = flags["fibration"]
    else:
        case = "a"
        applicable = flags["hypercover"]
    X, Y = f.source, f.target
    KS, LS = K.sset(), L.sset()
    kpos = [LS.nondegenerate().index(L.pos[s]) for s in K.simplices]
    XL = hom_space(LS, X)
    image = set()
    for a in XL:
        image.add((tuple(a[t] for t in kpos), compose_hom(f, LS, a)))
    YL = hom_space(LS, Y)
    by_res = {}
    for b in YL:
        by_res.setdefault(tuple(b[t] for t in kpos), []).append(b)
    pairs = [(a, b) for a in hom_space(KS, X) for b in by_res.get(compose_hom(f, KS, a), ())]
    surjective = all(p in image for p in pairs)
    return {"case": case, "hypothesis": applicable, "surjective": surjective,
            "pairs": len(pairs), "maps": len(XL)}
