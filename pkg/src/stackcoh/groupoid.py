"""
Finite groupoids, their nerves and morphisms.

Objects and arrows are stored as consecutive integers; the user-facing
labels are kept alongside.  An n-chain is the tuple (x0, g1, ..., gn)
with src(g1) = x0 and src(g_{i+1}) = tgt(g_i); x0 is redundant for n >= 1
but keeps 0-chains uniform.  Vertex i of a chain is x_i = tgt(g_i).

Chains at a level are listed lexicographically in (g1, ..., gn), which is
the basis order used for every matrix downstream.
"""

from __future__ import annotations

from .ordinal import OrdinalMap


class GroupoidError(ValueError):
    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class FiniteGroupoid:
    def __init__(self, object_labels, arrow_labels, src, tgt, compose, name=""):
        self.object_labels = list(object_labels)
        self.arrow_labels = list(arrow_labels)
        self.src = list(src)
        self.tgt = list(tgt)
        self.comp = dict(compose)          # (h, g) -> h∘g, defined when src(h) = tgt(g)
        self.name = name
        self.object_index = {lab: i for i, lab in enumerate(self.object_labels)}
        self.arrow_index = {lab: i for i, lab in enumerate(self.arrow_labels)}
        violations = _check_axioms(self)
        if violations:
            raise GroupoidError(f"groupoid axioms fail ({len(violations)} violations)", violations)
        self.unit = _find_units(self)
        self.inv = _find_inverses(self)
        self._out = [[] for _ in self.object_labels]
        for g in range(len(self.arrow_labels)):
            self._out[self.src[g]].append(g)
        self._is_unit = [False] * len(self.arrow_labels)
        for e in self.unit:
            self._is_unit[e] = True
        self._nerve = {}
        self._index = {}

    # -- sizes -----------------------------------------------------------
    @property
    def n_objects(self):
        return len(self.object_labels)

    @property
    def n_arrows(self):
        return len(self.arrow_labels)

    def __repr__(self):
        nm = f" {self.name}" if self.name else ""
        return f"<FiniteGroupoid{nm}: {self.n_objects} objects, {self.n_arrows} arrows>"

    def is_unit(self, g):
        return self._is_unit[g]

    def mul(self, h, g):
        """h∘g (first g, then h)."""
        try:
            return self.comp[(h, g)]
        except KeyError:
            raise GroupoidError(f"arrows {self.arrow_labels[h]!r} and "
                                f"{self.arrow_labels[g]!r} are not composable") from None

    # -- nerve -----------------------------------------------------------
    def nerve(self, n):
        """All n-chains (x0, g1, ..., gn) in canonical order."""
        if n < 0:
            raise ValueError("nerve level must be >= 0")
        if n in self._nerve:
            return self._nerve[n]
        if n == 0:
            chains = [(x,) for x in range(self.n_objects)]
        else:
            chains = []
            for c in self.nerve(n - 1):
                last = vertex(self, c, n - 1)
                for g in self._out[last]:
                    chains.append(c + (g,))
            if n == 1:
                chains = [(self.src[g], g) for g in range(self.n_arrows)]
        self._nerve[n] = chains
        self._index[n] = {c: k for k, c in enumerate(chains)}
        return chains

    def chain_index(self, chain):
        n = len(chain) - 1
        if n not in self._index:
            self.nerve(n)
        return self._index[n][chain]

    def is_degenerate(self, chain):
        return any(self._is_unit[g] for g in chain[1:])

    def nondegenerate(self, n):
        return [c for c in self.nerve(n) if not self.is_degenerate(c)]

    def make_chain(self, arrows):
        """Chain from arrow ids (g1, ..., gn), checking composability."""
        arrows = tuple(arrows)
        if not arrows:
            raise ValueError("use (x,) for a 0-chain")
        for a, b in zip(arrows, arrows[1:]):
            if self.src[b] != self.tgt[a]:
                raise GroupoidError(f"arrows {self.arrow_labels[a]!r}, {self.arrow_labels[b]!r} "
                                    f"are not composable")
        return (self.src[arrows[0]],) + arrows

    def unit_chain(self, x, n):
        return (x,) + (self.unit[x],) * n

    def label_chain(self, chain):
        if len(chain) == 1:
            return [self.object_labels[chain[0]]]
        return [self.arrow_labels[g] for g in chain[1:]]


def vertex(G, chain, i):
    """x_i of the chain."""
    if i == 0:
        return chain[0]
    return G.tgt[chain[i]]


def source(G, chain):
    return chain[0]


def target(G, chain):
    return vertex(G, chain, len(chain) - 1)


def arrow_between(G, chain, a, b):
    """The arrow x_a -> x_b obtained by composing along the chain and
    inverting when b < a."""
    if a == b:
        return G.unit[vertex(G, chain, a)]
    if a > b:
        return G.inv[arrow_between(G, chain, b, a)]
    g = chain[a + 1]
    for k in range(a + 2, b + 1):
        g = G.comp[(chain[k], g)]
    return g


def chain_along(G, chain, beta, allow_nonmonotone=False):
    """Reindex a chain along any function beta: [l] -> [n].

    The i-th arrow of the result goes from x_{beta(i-1)} to x_{beta(i)}.
    ``beta`` is an OrdinalMap or a sequence of values."""
    values = beta.values if isinstance(beta, OrdinalMap) else tuple(beta)
    if not allow_nonmonotone and any(values[i] > values[i + 1] for i in range(len(values) - 1)):
        raise ValueError("non-monotone reindexing requires allow_nonmonotone=True")
    n = len(chain) - 1
    if any(v < 0 or v > n for v in values):
        raise ValueError(f"reindexing values {values} leave [0, {n}]")
    out = [vertex(G, chain, values[0])]
    for i in range(1, len(values)):
        out.append(arrow_between(G, chain, values[i - 1], values[i]))
    return tuple(out)


def face(G, chain, i):
    n = len(chain) - 1
    if n == 0:
        raise ValueError("a 0-chain has no faces")
    if type(chain) is not tuple:
        chain = tuple(chain)
    if i == 0:
        return (G.tgt[chain[1]],) + chain[2:]
    if i == n:
        return chain[:n]
    return chain[:i] + (G.comp[(chain[i + 1], chain[i])],) + chain[i + 2:]


def degeneracy(G, chain, j):
    n = len(chain) - 1
    return chain_along(G, chain, [v if v <= j else v - 1 for v in range(n + 2)])


def inverse_chain(G, chain):
    """g^{-1} = (g_1^{-1}, ..., g_n^{-1}), i.e. reindexing along i -> n - i."""
    n = len(chain) - 1
    return chain_along(G, chain, [n - i for i in range(n + 1)], allow_nonmonotone=True)


def eta_values(m, n):
    """The function eta: [n+1] -> [n] of the regularisation homotopy:
    i -> i for i < m, m -> n, i -> i - 1 for i > m; sigma_n when n <= m."""
    if n <= m:
        return tuple(v if v <= n else v - 1 for v in range(n + 2))
    vals = []
    for i in range(n + 2):
        if i < m:
            vals.append(i)
        elif i == m:
            vals.append(n)
        else:
            vals.append(i - 1)
    return tuple(vals)


# ----------------------------------------------------------------------
# axioms

def _check_axioms(G):
    v = []
    no, na = len(G.object_labels), len(G.arrow_labels)
    if len(set(G.object_labels)) != no:
        v.append("duplicate object labels")
    if len(set(G.arrow_labels)) != na:
        v.append("duplicate arrow labels")
    for g in range(na):
        if not (0 <= G.src[g] < no and 0 <= G.tgt[g] < no):
            v.append(f"arrow {G.arrow_labels[g]!r} has an unknown endpoint")
    if v:
        return v
    lab = G.arrow_labels
    for (h, g), hg in G.comp.items():
        if G.src[h] != G.tgt[g]:
            v.append(f"composition {lab[h]!r}∘{lab[g]!r} given but arrows are not composable")
        elif not 0 <= hg < na:
            v.append(f"composition {lab[h]!r}∘{lab[g]!r} is not an arrow")
        elif G.src[hg] != G.src[g] or G.tgt[hg] != G.tgt[h]:
            v.append(f"composition {lab[h]!r}∘{lab[g]!r} = {lab[hg]!r} has wrong endpoints")
    for g in range(na):
        for h in range(na):
            if G.src[h] == G.tgt[g] and (h, g) not in G.comp:
                v.append(f"composition {lab[h]!r}∘{lab[g]!r} missing")
    if v:
        return v
    for g in range(na):
        for h in range(na):
            if G.src[h] != G.tgt[g]:
                continue
            hg = G.comp[(h, g)]
            for k in range(na):
                if G.src[k] != G.tgt[h]:
                    continue
                if G.comp[(k, hg)] != G.comp[(G.comp[(k, h)], g)]:
                    v.append(f"associativity fails on ({lab[k]!r}, {lab[h]!r}, {lab[g]!r})")
    if v:
        return v
    units = {}
    for x in range(no):
        cands = [e for e in range(na) if G.src[e] == x and G.tgt[e] == x
                 and all(G.comp[(e, g)] == g for g in range(na) if G.tgt[g] == x)
                 and all(G.comp[(h, e)] == h for h in range(na) if G.src[h] == x)]
        if len(cands) != 1:
            v.append(f"object {G.object_labels[x]!r} has {len(cands)} unit arrows")
        else:
            units[x] = cands[0]
    if v:
        return v
    for g in range(na):
        ok = any(G.src[h] == G.tgt[g] and G.tgt[h] == G.src[g]
                 and G.comp[(h, g)] == units[G.src[g]] and G.comp[(g, h)] == units[G.tgt[g]]
                 for h in range(na))
        if not ok:
            v.append(f"arrow {lab[g]!r} has no inverse")
    return v


def _find_units(G):
    out = []
    for x in range(G.n_objects):
        for e in range(G.n_arrows):
            if G.src[e] == x and G.tgt[e] == x and G.comp[(e, e)] == e:
                out.append(e)
                break
    return out


def _find_inverses(G):
    out = [None] * G.n_arrows
    for g in range(G.n_arrows):
        e = G.unit[G.src[g]]
        for h in range(G.n_arrows):
            if G.src[h] == G.tgt[g] and G.comp[(h, g)] == e:
                out[g] = h
                break
    return out


def validate_groupoid(data) -> list:
    """Violation list for groupoid data (a dict in the file layout or a
    FiniteGroupoid); empty means all axioms hold."""
    if isinstance(data, FiniteGroupoid):
        return []
    try:
        from_data(data)
    except GroupoidError as e:
        return e.violations or [str(e)]
    except (KeyError, TypeError, ValueError) as e:
        return [f"malformed groupoid data: {e}"]
    return []


def from_data(data) -> FiniteGroupoid:
    """Build from {'objects': [...], 'arrows': [{'id','src','tgt'}...],
    'compose': [[h, g, hg]...], optional 'units' {x: e}, 'inverses' {g: h}}."""
    objects = list(data["objects"])
    oidx = {o: i for i, o in enumerate(objects)}
    arrows, src, tgt = [], [], []
    for a in data["arrows"]:
        arrows.append(a["id"])
        if a["src"] not in oidx or a["tgt"] not in oidx:
            raise GroupoidError(f"arrow {a['id']!r} references an unknown object",
                                [f"arrow {a['id']!r} references an unknown object"])
        src.append(oidx[a["src"]])
        tgt.append(oidx[a["tgt"]])
    aidx = {a: i for i, a in enumerate(arrows)}
    comp = {}
    bad = []
    for t in data["compose"]:
        h, g, hg = t
        if h not in aidx or g not in aidx or hg not in aidx:
            bad.append(f"composition triple {t!r} references an unknown arrow")
            continue
        key = (aidx[h], aidx[g])
        if key in comp and comp[key] != aidx[hg]:
            bad.append(f"composition {h!r}∘{g!r} given twice with different values")
        comp[key] = aidx[hg]
    if bad:
        raise GroupoidError("malformed composition table", bad)
    G = FiniteGroupoid(objects, arrows, src, tgt, comp, name=data.get("name", ""))
    extra = []
    for x, e in (data.get("units") or {}).items():
        if x not in oidx or e not in aidx or G.unit[oidx[x]] != aidx[e]:
            extra.append(f"declared unit {e!r} of {x!r} is not the unit")
    for g, h in (data.get("inverses") or {}).items():
        if g not in aidx or h not in aidx or G.inv[aidx[g]] != aidx[h]:
            extra.append(f"declared inverse {h!r} of {g!r} is not the inverse")
    if extra:
        raise GroupoidError("declared units or inverses disagree with the table", extra)
    return G


def to_data(G: FiniteGroupoid) -> dict:
    lab = G.arrow_labels
    return {
        "kind": "groupoid",
        "name": G.name,
        "objects": list(G.object_labels),
        "arrows": [{"id": lab[g], "src": G.object_labels[G.src[g]], "tgt": G.object_labels[G.tgt[g]]}
                   for g in range(G.n_arrows)],
        "compose": [[lab[h], lab[g], lab[hg]] for (h, g), hg in sorted(G.comp.items())],
    }


# ----------------------------------------------------------------------
# examples

def unit_groupoid(objects, name=None):
    objects = list(objects)
    n = len(objects)
    return FiniteGroupoid(objects, [f"1_{o}" for o in objects], range(n), range(n),
                          {(i, i): i for i in range(n)}, name=name or f"unit({len(objects)})")


def pair_groupoid(objects, name=None):
    objects = list(objects)
    n = len(objects)
    arrows, src, tgt, idx = [], [], [], {}
    for y in range(n):
        for x in range(n):
            idx[(y, x)] = len(arrows)
            arrows.append(f"({objects[y]},{objects[x]})")
            src.append(x)
            tgt.append(y)
    comp = {}
    for (z, y1), h in idx.items():
        for (y2, x), g in idx.items():
            if y1 == y2:
                comp[(h, g)] = idx[(z, x)]
    return FiniteGroupoid(objects, arrows, src, tgt, comp, name=name or f"Pair({n})")


def cech_groupoid(p, base=None, name=None, allow_nonsurjective=False):
    """Submersion groupoid U x_M U of a map p: U -> M given as a dict."""
    U = list(p)
    base = sorted(set(p.values()), key=str) if base is None else list(base)
    missing = [m for m in base if m not in set(p.values())]
    if missing and not allow_nonsurjective:
        raise GroupoidError(f"map is not surjective: {missing!r} not hit",
                            [f"base point {m!r} has empty fiber" for m in missing])
    arrows, src, tgt, idx = [], [], [], {}
    for j, v in enumerate(U):
        for i, u in enumerate(U):
            if p[u] == p[v]:
                idx[(j, i)] = len(arrows)
                arrows.append(f"({v},{u})")
                src.append(i)
                tgt.append(j)
    comp = {}
    for (k, j1), h in idx.items():
        for (j2, i), g in idx.items():
            if j1 == j2:
                comp[(h, g)] = idx[(k, i)]
    return FiniteGroupoid(U, arrows, src, tgt, comp, name=name or f"Cech({len(U)}->{len(base)})")


def group_groupoid(elements, mul, name=None, obj="*"):
    """One-object groupoid of a finite group; mul(a, b) is the product ab."""
    elements = list(elements)
    idx = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    comp = {(idx[a], idx[b]): idx[mul(a, b)] for a in elements for b in elements}
    return FiniteGroupoid([obj], [str(e) for e in elements], [0] * n, [0] * n, comp,
                          name=name or f"group({n})")


def cyclic_group(n, name=None):
    return group_groupoid(range(n), lambda a, b: (a + b) % n, name=name or f"Z{n}")


def action_groupoid(elements, mul, points, act, name=None):
    """Arrows (g, x): x -> g.x, composed as (h, g.x)(g, x) = (hg, x)."""
    elements, points = list(elements), list(points)
    pidx = {x: i for i, x in enumerate(points)}
    arrows, src, tgt, idx = [], [], [], {}
    for g in elements:
        for x in points:
            idx[(g, x)] = len(arrows)
            arrows.append(f"({g},{x})")
            src.append(pidx[x])
            tgt.append(pidx[act(g, x)])
    comp = {}
    for (h, y), a in idx.items():
        for (g, x), b in idx.items():
            if act(g, x) == y:
                comp[(a, b)] = idx[(mul(h, g), x)]
    return FiniteGroupoid(points, arrows, src, tgt, comp, name=name or "action")


def product_groupoid(G, H, name=None):
    objs = [(a, b) for a in range(G.n_objects) for b in range(H.n_objects)]
    oidx = {o: i for i, o in enumerate(objs)}
    arrows, src, tgt, idx = [], [], [], {}
    for g in range(G.n_arrows):
        for h in range(H.n_arrows):
            idx[(g, h)] = len(arrows)
            arrows.append(f"{G.arrow_labels[g]}x{H.arrow_labels[h]}")
            src.append(oidx[(G.src[g], H.src[h])])
            tgt.append(oidx[(G.tgt[g], H.tgt[h])])
    comp = {}
    for (g2, h2), a in idx.items():
        for (g1, h1), b in idx.items():
            if (g2, g1) in G.comp and (h2, h1) in H.comp:
                comp[(a, b)] = idx[(G.comp[(g2, g1)], H.comp[(h2, h1)])]
    labels = [f"{G.object_labels[a]}x{H.object_labels[b]}" for a, b in objs]
    return FiniteGroupoid(labels, arrows, src, tgt, comp, name=name or f"{G.name}x{H.name}")


def build_example(kind, params=None, **kw):
    """kind in {unit, pair, cech, group, action, product}."""
    params = dict(params or {}, **kw)
    if kind == "unit":
        return unit_groupoid(params["objects"], params.get("name"))
    if kind == "pair":
        return pair_groupoid(params["objects"], params.get("name"))
    if kind == "cech":
        return cech_groupoid(params["map"], params.get("base"), params.get("name"),
                             params.get("allow_nonsurjective", False))
    if kind == "group":
        if "order" in params:
            return cyclic_group(params["order"], params.get("name"))
        table = params["table"]
        els = params.get("elements", list(range(len(table))))
        pos = {e: i for i, e in enumerate(els)}
        return group_groupoid(els, lambda a, b: table[pos[a]][pos[b]], params.get("name"))
    if kind == "action":
        els, table = params["elements"], params["table"]
        pos = {e: i for i, e in enumerate(els)}
        pts, acts = params["points"], params["act"]
        ppos = {x: i for i, x in enumerate(pts)}
        return action_groupoid(els, lambda a, b: table[pos[a]][pos[b]], pts,
                               lambda g, x: acts[pos[g]][ppos[x]], params.get("name"))
    if kind == "product":
        return product_groupoid(params["left"], params["right"], params.get("name"))
    raise ValueError(f"unknown groupoid kind {kind!r}")


# ----------------------------------------------------------------------
# morphisms

class GroupoidMorphism:
    def __init__(self, source, target, object_map, arrow_map, name=""):
        self.source = source
        self.target = target
        self.object_map = list(object_map)
        self.arrow_map = list(arrow_map)
        self.name = name

    def violations(self):
        G, H = self.source, self.target
        v = []
        if len(self.object_map) != G.n_objects or len(self.arrow_map) != G.n_arrows:
            return ["object or arrow map has the wrong length"]
        for g in range(G.n_arrows):
            a = self.arrow_map[g]
            if H.src[a] != self.object_map[G.src[g]] or H.tgt[a] != self.object_map[G.tgt[g]]:
                v.append(f"arrow {G.arrow_labels[g]!r} is not sent over its endpoints")
        for (h, g), hg in G.comp.items():
            a, b = self.arrow_map[h], self.arrow_map[g]
            if (a, b) not in H.comp or H.comp[(a, b)] != self.arrow_map[hg]:
                v.append(f"composition {G.arrow_labels[h]!r}∘{G.arrow_labels[g]!r} not preserved")
        for x in range(G.n_objects):
            if self.arrow_map[G.unit[x]] != H.unit[self.object_map[x]]:
                v.append(f"unit of {G.object_labels[x]!r} not preserved")
        return v

    def on_chain(self, chain):
        if len(chain) == 1:
            return (self.object_map[chain[0]],)
        return (self.object_map[chain[0]],) + tuple(self.arrow_map[g] for g in chain[1:])

    def then(self, other):
        """self followed by other."""
        return GroupoidMorphism(self.source, other.target,
                                [other.object_map[x] for x in self.object_map],
                                [other.arrow_map[g] for g in self.arrow_map],
                                name=f"{other.name}∘{self.name}")

    def __repr__(self):
        return f"<GroupoidMorphism {self.name or ''} {self.source!r} -> {self.target!r}>"


def identity_morphism(G):
    return GroupoidMorphism(G, G, range(G.n_objects), range(G.n_arrows), name="id")


def cech_projection(G, p, base_groupoid):
    """The morphism from the Cech groupoid of p to the unit groupoid of the base."""
    B = base_groupoid
    om = [B.object_index[p[u]] for u in G.object_labels]
    am = [B.unit[om[G.src[g]]] for g in range(G.n_arrows)]
    return GroupoidMorphism(G, B, om, am, name="cech")


def morphism_from_maps(G, H, object_map, arrow_map, name=""):
    """Build from label dictionaries."""
    om = [H.object_index[object_map[o]] for o in G.object_labels]
    am = [H.arrow_index[arrow_map[a]] for a in G.arrow_labels]
    return GroupoidMorphism(G, H, om, am, name=name)


def classify_morphism(phi: GroupoidMorphism) -> dict:
    flags = {k: False for k in ("functor_ok", "F1", "F2", "ES", "FF",
                                "fibration", "morita", "hypercover")}
    bad = phi.violations()
    if bad:
        flags["violations"] = bad
        return flags
    flags["functor_ok"] = True
    G, H = phi.source, phi.target
    om, am = phi.object_map, phi.arrow_map
    flags["F1"] = set(om) == set(range(H.n_objects))
    # F2: G_1 -> G_0 x_{H_0} H_1, g -> (s g, phi g)
    need = {(x, h) for x in range(G.n_objects) for h in range(H.n_arrows) if H.src[h] == om[x]}
    have = {(G.src[g], am[g]) for g in range(G.n_arrows)}
    flags["F2"] = need <= have
    # ES: (h, x) with s(h) = phi(x) -> t(h)
    reach = {H.tgt[h] for h in range(H.n_arrows) for x in range(G.n_objects) if H.src[h] == om[x]}
    flags["ES"] = reach == set(range(H.n_objects))
    # FF: G_1 -> (G_0 x G_0) x_{H_0 x H_0} H_1 bijective
    counts = {}
    for g in range(G.n_arrows):
        key = (G.src[g], G.tgt[g], am[g])
        counts[key] = counts.get(key, 0) + 1
    total = sum(1 for x in range(G.n_objects) for y in range(G.n_objects)
                for h in range(H.n_arrows) if H.src[h] == om[x] and H.tgt[h] == om[y])
    flags["FF"] = all(c == 1 for c in counts.values()) and len(counts) == total
    flags["fibration"] = flags["F1"] and flags["F2"]
    flags["morita"] = flags["ES"] and flags["FF"]
    flags["hypercover"] = flags["F1"] and flags["FF"]
    return flags
