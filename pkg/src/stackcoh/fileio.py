"""
JSON files for groupoids, morphisms, representations and simplicial sets.

Every file is an object with a "kind" field.  References to other objects
are either inline objects, paths relative to the referring file, or
"corpus:<name>" for a bundled example.  Rationals are strings "p/q" or
"p"; integers are also accepted.  Output uses sorted keys so that files
and reports are byte-stable.

kinds:
  groupoid   objects, arrows [{id, src, tgt}], compose [[h, g, hg]],
             optional units [[x, e]] and inverses [[g, h]]
  morphism   source, target, object_map [[x, y]], arrow_map [[g, h]]
  rep        groupoid, degree_range [lo, hi], dims [{object, dims}],
             blocks [{m, chain, degree, matrix}], optional fill_units;
             a chain is [x0, g1, ..., gm] with x0 an object label
  sset       cap, nondegenerate [[ids in dim 0], [ids in dim 1], ...],
             faces {id: [{id, map}]}; map is the surjection [p-1] -> [q]
             (omitted when q = p - 1)
  sset_map   source, target, assignment {id: {id, map}}
  nerve      groupoid, cap
  nerve_map  morphism, cap
  terminal_map  source
"""

from __future__ import annotations

import hashlib
import json
import os
from fractions import Fraction

from .exactla import RationalMatrix, format_rational
from .groupoid import FiniteGroupoid, GroupoidError, GroupoidMorphism, from_data, to_data
from .ordinal import OrdinalMap
from .ruth import RepError, RepUpToHomotopy


class FileFormatError(ValueError):
    """Malformed input; ``location`` names the file and the JSON path."""

    def __init__(self, location, message):
        super().__init__(f"{location}: {message}")
        self.location = location
        self.message = message


class ValidationError(ValueError):
    """Well-formed input whose content violates the axioms."""

    def __init__(self, location, message, violations=()):
        super().__init__(f"{location}: {message}")
        self.location = location
        self.violations = list(violations)


def digest(path):
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def dumps(data):
    return json.dumps(data, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def parse_rational(x, where):
    if isinstance(x, bool) or isinstance(x, float):
        raise FileFormatError(where, f"expected a rational string, got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if not isinstance(x, str):
        raise FileFormatError(where, f"expected a rational string, got {x!r}")
    try:
        return Fraction(x.strip())
    except (ValueError, ZeroDivisionError):
        raise FileFormatError(where, f"cannot read {x!r} as a rational") from None


def matrix_to_data(M: RationalMatrix):
    return [[format_rational(M[i, j]) for j in range(M.ncols)] for i in range(M.nrows)]


class Loader:
    """Resolves references and keeps track of every file read, for digests."""

    def __init__(self):
        self.files = {}          # path -> sha256
        self.cache = {}

    # -- plumbing ------------------------------------------------------------
    def read(self, path):
        path = os.path.normpath(path)
        if path in self.cache:
            return self.cache[path]
        try:
            with open(path, "rb") as fh:
                raw = fh.read()
        except OSError as e:
            raise FileFormatError(path, f"cannot read file ({e.strerror})") from None
        self.files[path] = hashlib.sha256(raw).hexdigest()
        try:
            data = json.loads(raw.decode("utf-8"))
        except UnicodeDecodeError as e:
            raise FileFormatError(path, f"not UTF-8 (byte {e.start})") from None
        except json.JSONDecodeError as e:
            raise FileFormatError(f"{path}:{e.lineno}:{e.colno}", f"JSON syntax error: {e.msg}") from None
        obj = self.build(data, path, "$")
        self.cache[path] = obj
        return obj

    def ref(self, value, base, where, kind=None):
        if isinstance(value, str):
            if value.startswith("corpus:"):
                obj = corpus_object(value[len("corpus:"):], where, kind)
            else:
                obj = self.read(os.path.join(os.path.dirname(base), value))
        elif isinstance(value, dict):
            obj = self.build(value, base, where)
        else:
            raise FileFormatError(f"{base} {where}", "expected a reference (path, corpus:name or object)")
        if kind is not None and object_kind(obj) != kind:
            raise FileFormatError(f"{base} {where}", f"expected a {kind}, got a {object_kind(obj)}")
        return obj

    def build(self, data, base, where):
        if not isinstance(data, dict):
            raise FileFormatError(f"{base} {where}", "expected an object")
        kind = data.get("kind")
        fn = {"groupoid": self.groupoid, "morphism": self.morphism, "rep": self.rep,
              "sset": self.sset, "sset_map": self.sset_map, "nerve": self.nerve,
              "nerve_map": self.nerve_map, "terminal_map": self.terminal_map}.get(kind)
        if fn is None:
            raise FileFormatError(f"{base} {where}.kind", f"unknown kind {kind!r}")
        return fn(data, base, where)

    @staticmethod
    def need(data, key, base, where, types=None):
        if key not in data:
            raise FileFormatError(f"{base} {where}", f"missing field {key!r}")
        v = data[key]
        if types is not None and not isinstance(v, types):
            raise FileFormatError(f"{base} {where}.{key}", f"expected {_type_name(types)}")
        return v

    # -- groupoids and morphisms ----------------------------------------------
    def groupoid(self, data, base, where):
        objects = self.need(data, "objects", base, where, list)
        arrows = self.need(data, "arrows", base, where, list)
        comp = self.need(data, "compose", base, where, list)
        for k, a in enumerate(arrows):
            if not isinstance(a, dict) or not {"id", "src", "tgt"} <= set(a):
                raise FileFormatError(f"{base} {where}.arrows[{k}]", "expected {id, src, tgt}")
        for k, t in enumerate(comp):
            if not isinstance(t, list) or len(t) != 3:
                raise FileFormatError(f"{base} {where}.compose[{k}]", "expected [h, g, h∘g]")
        d = {"objects": objects, "arrows": arrows, "compose": comp, "name": data.get("name", "")}
        for key in ("units", "inverses"):
            if key in data:
                pairs = self.need(data, key, base, where, list)
                for k, p in enumerate(pairs):
                    if not isinstance(p, list) or len(p) != 2:
                        raise FileFormatError(f"{base} {where}.{key}[{k}]", "expected a pair")
                d[key] = {p[0]: p[1] for p in pairs}
        try:
            return from_data(d)
        except GroupoidError as e:
            raise ValidationError(f"{base} {where}", str(e), e.violations) from None

    def morphism(self, data, base, where):
        G = self.ref(self.need(data, "source", base, where), base, where + ".source", "groupoid")
        H = self.ref(self.need(data, "target", base, where), base, where + ".target", "groupoid")
        om = self._pairs(data, "object_map", base, where, G.object_index, H.object_index)
        am = self._pairs(data, "arrow_map", base, where, G.arrow_index, H.arrow_index)
        if len(om) != G.n_objects or len(am) != G.n_arrows:
            raise FileFormatError(f"{base} {where}", "object_map and arrow_map must cover the source")
        phi = GroupoidMorphism(G, H, [om[x] for x in range(G.n_objects)],
                               [am[g] for g in range(G.n_arrows)], name=data.get("name", ""))
        bad = phi.violations()
        if bad:
            raise ValidationError(f"{base} {where}", "not a functor", bad)
        return phi

    def _pairs(self, data, key, base, where, src_index, tgt_index):
        out = {}
        for k, p in enumerate(self.need(data, key, base, where, list)):
            loc = f"{base} {where}.{key}[{k}]"
            if not isinstance(p, list) or len(p) != 2:
                raise FileFormatError(loc, "expected a pair")
            if p[0] not in src_index or p[1] not in tgt_index:
                raise FileFormatError(loc, f"unknown label in {p!r}")
            out[src_index[p[0]]] = tgt_index[p[1]]
        return out

    # -- representations --------------------------------------------------------
    def rep(self, data, base, where):
        G = self.ref(self.need(data, "groupoid", base, where), base, where + ".groupoid", "groupoid")
        rng = self.need(data, "degree_range", base, where, list)
        if len(rng) != 2 or not all(isinstance(v, int) and not isinstance(v, bool) for v in rng):
            raise FileFormatError(f"{base} {where}.degree_range", "expected [lo, hi] integers")
        lo, hi = rng
        dims = [None] * G.n_objects
        for k, e in enumerate(self.need(data, "dims", base, where, list)):
            loc = f"{base} {where}.dims[{k}]"
            if not isinstance(e, dict) or "object" not in e or "dims" not in e:
                raise FileFormatError(loc, "expected {object, dims}")
            if e["object"] not in G.object_index:
                raise FileFormatError(loc, f"unknown object {e['object']!r}")
            dims[G.object_index[e["object"]]] = e["dims"]
        if any(d is None for d in dims):
            raise FileFormatError(f"{base} {where}.dims", "every object needs a dimension vector")
        try:
            R = RepUpToHomotopy(G, lo, hi, dims, None, name=data.get("name", ""), fill_units=False)
        except RepError as e:
            raise ValidationError(f"{base} {where}.dims", str(e)) from None
        for k, b in enumerate(self.need(data, "blocks", base, where, list)):
            loc = f"{base} {where}.blocks[{k}]"
            if not isinstance(b, dict) or not {"m", "chain", "degree", "matrix"} <= set(b):
                raise FileFormatError(loc, "expected {m, chain, degree, matrix}")
            m, n = b["m"], b["degree"]
            chain = self._chain(G, b["chain"], loc)
            if m != len(chain) - 1:
                raise FileFormatError(loc, f"m = {m} but the chain has {len(chain) - 1} arrows")
            rows = b["matrix"]
            if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
                raise FileFormatError(loc + ".matrix", "expected a list of rows")
            shape = R.block_shape(m, chain, n)
            if len(rows) != shape[0] or any(len(r) != shape[1] for r in rows):
                got = (len(rows), len(rows[0]) if rows else 0)
                raise ValidationError(loc, f"RH-shape violation: block R_{m} at degree {n} has shape "
                                      f"{got}, expected {shape}")
            M = RationalMatrix.from_entries(shape[0], shape[1], [
                (i, j, parse_rational(x, f"{loc}.matrix[{i}][{j}]"))
                for i, r in enumerate(rows) for j, x in enumerate(r)])
            if (m, chain, n) in R.blocks:
                raise FileFormatError(loc, "block given twice")
            R.set_block(m, chain, n, M)
        if data.get("fill_units"):
            for x in range(G.n_objects):
                u = G.unit_chain(x, 1)
                for n in range(lo, hi + 1):
                    if (1, u, n) not in R.blocks and R.dim(x, n):
                        R.blocks[(1, u, n)] = RationalMatrix.identity(R.dim(x, n))
        return R

    @staticmethod
    def _chain(G, chain, loc):
        if not isinstance(chain, list) or not chain:
            raise FileFormatError(loc + ".chain", "expected [object, arrow, ...]")
        if chain[0] not in G.object_index:
            raise FileFormatError(loc + ".chain[0]", f"unknown object {chain[0]!r}")
        ids = []
        for k, a in enumerate(chain[1:], 1):
            if a not in G.arrow_index:
                raise FileFormatError(f"{loc}.chain[{k}]", f"unknown arrow {a!r}")
            ids.append(G.arrow_index[a])
        if not ids:
            return (G.object_index[chain[0]],)
        try:
            c = G.make_chain(ids)
        except GroupoidError as e:
            raise FileFormatError(loc + ".chain", str(e)) from None
        if c[0] != G.object_index[chain[0]]:
            raise FileFormatError(loc + ".chain", "the first arrow does not start at the given object")
        return c

    # -- simplicial sets ------------------------------------------------------------
    def sset(self, data, base, where):
        from .kan.sset import SSetError, from_normal_forms
        cap = self.need(data, "cap", base, where, int)
        nd = self.need(data, "nondegenerate", base, where, list)
        if len(nd) > cap + 1:
            raise FileFormatError(f"{base} {where}.nondegenerate", "more dimensions than the cap")
        pos = {}
        for p, ids in enumerate(nd):
            if not isinstance(ids, list):
                raise FileFormatError(f"{base} {where}.nondegenerate[{p}]", "expected a list of ids")
            for t, s in enumerate(ids):
                if s in pos:
                    raise FileFormatError(f"{base} {where}.nondegenerate[{p}]", f"duplicate id {s!r}")
                pos[s] = (p, t)
        faces = self.need(data, "faces", base, where, dict)
        records = {}
        for p in range(1, cap + 1):
            records[p] = []
            for s in (nd[p] if p < len(nd) else []):
                loc = f"{base} {where}.faces.{s}"
                recs = faces.get(str(s))
                if not isinstance(recs, list) or len(recs) != p + 1:
                    raise FileFormatError(loc, f"expected {p + 1} face records")
                row = []
                for i, r in enumerate(recs):
                    if not isinstance(r, dict) or r.get("id") not in pos:
                        raise FileFormatError(f"{loc}[{i}]", "face record needs a known id")
                    q, z = pos[r["id"]]
                    vals = r.get("map", list(range(p)))
                    try:
                        tau = OrdinalMap(vals, q)
                    except (ValueError, TypeError) as e:
                        raise FileFormatError(f"{loc}[{i}].map", str(e)) from None
                    row.append((q, z, tau))
                records[p].append(row)
        counts = [len(nd[p]) if p < len(nd) else 0 for p in range(cap + 1)]
        try:
            X = from_normal_forms(cap, counts, records, name=data.get("name", ""))
        except SSetError as e:
            raise ValidationError(f"{base} {where}", str(e), e.violations) from None
        X.ids = {(p, X.nondeg[p][t]): s for s, (p, t) in pos.items()}
        X.id_pos = pos
        return X

    def sset_map(self, data, base, where):
        from .kan.sset import SSetError, SimplicialMap
        X = self.ref(self.need(data, "source", base, where), base, where + ".source", "sset")
        Y = self.ref(self.need(data, "target", base, where), base, where + ".target", "sset")
        asg = self.need(data, "assignment", base, where, dict)
        xpos, ypos = _positions(X, f"{base} {where}.source"), _positions(Y, f"{base} {where}.target")
        images = {}
        for s, (p, t) in xpos.items():
            loc = f"{base} {where}.assignment.{s}"
            r = asg.get(str(s))
            if not isinstance(r, dict) or r.get("id") not in ypos:
                raise FileFormatError(loc, "needs the id of a target simplex")
            q, u = ypos[r["id"]]
            try:
                tau = OrdinalMap(r.get("map", list(range(q + 1))), q)
            except (ValueError, TypeError) as e:
                raise FileFormatError(loc + ".map", str(e)) from None
            if tau.source_size != p:
                raise FileFormatError(loc + ".map", f"expected a map from [{p}]")
            images[(p, X.nondeg[p][t])] = Y.act(q, Y.nondeg[q][u], tau)
        tables = {}
        for n in range(min(X.cap, Y.cap) + 1):
            tables[n] = [Y.act(p, images[(p, z)], tau) for (p, z, tau) in X.normal[n]]
        try:
            return SimplicialMap(X, Y, tables, name=data.get("name", ""))
        except SSetError as e:
            raise ValidationError(f"{base} {where}", str(e), e.violations) from None

    def nerve(self, data, base, where):
        from .kan.sset import nerve_sset
        G = self.ref(self.need(data, "groupoid", base, where), base, where + ".groupoid", "groupoid")
        return nerve_sset(G, self.need(data, "cap", base, where, int))

    def nerve_map(self, data, base, where):
        from .kan.sset import nerve_map, nerve_sset
        phi = self.ref(self.need(data, "morphism", base, where), base, where + ".morphism", "morphism")
        cap = self.need(data, "cap", base, where, int)
        return nerve_map(phi, nerve_sset(phi.source, cap), nerve_sset(phi.target, cap))

    def terminal_map(self, data, base, where):
        from .kan.sset import terminal_map
        X = self.ref(self.need(data, "source", base, where), base, where + ".source", "sset")
        return terminal_map(X)


def _positions(X, where):
    pos = getattr(X, "id_pos", None)
    if pos is None:
        pos = {f"{p}:{t}": (p, t) for p in range(X.cap + 1) for t in range(len(X.nondeg[p]))}
    return pos


def _type_name(types):
    names = {list: "a list", dict: "an object", int: "an integer", str: "a string"}
    if isinstance(types, tuple):
        return " or ".join(names.get(t, t.__name__) for t in types)
    return names.get(types, types.__name__)


def object_kind(obj):
    from .kan.sset import SimplicialMap, TruncatedSSet
    if isinstance(obj, FiniteGroupoid):
        return "groupoid"
    if isinstance(obj, GroupoidMorphism):
        return "morphism"
    if isinstance(obj, RepUpToHomotopy):
        return "rep"
    if isinstance(obj, TruncatedSSet):
        return "sset"
    if isinstance(obj, SimplicialMap):
        return "sset_map"
    return type(obj).__name__


def corpus_object(name, where="corpus", kind=None):
    """A bundled example; names shared by several kinds resolve to ``kind``
    when given (groupoids first otherwise)."""
    from . import corpus
    tables = {"groupoid": corpus.groupoids, "morphism": corpus.morphisms, "rep": corpus.ruths,
              "sset_map": corpus.sset_maps}
    order = list(tables)
    if kind in tables:
        order.remove(kind)
        order.insert(0, kind)
    for k in order:
        t = tables[k]()
        if name in t:
            return t[name]
    raise FileFormatError(where, f"no bundled example named {name!r}")


def load(path):
    """(object, {path: sha256}) for a file or a corpus reference."""
    L = Loader()
    if path.startswith("corpus:"):
        obj = corpus_object(path[len("corpus:"):], path)
        return obj, {path: object_digest(obj)}
    obj = L.read(path)
    return obj, dict(sorted(L.files.items()))


def object_digest(obj):
    """sha256 of the canonical JSON serialisation of a bundled object."""
    data = to_file_data(obj)
    return hashlib.sha256(dumps(data).encode("utf-8")).hexdigest()


# ----------------------------------------------------------------------
# writing

def to_file_data(obj):
    kind = object_kind(obj)
    writer = {"groupoid": groupoid_to_data, "morphism": morphism_to_data, "rep": rep_to_data,
              "sset": sset_to_data, "sset_map": sset_map_to_data}.get(kind)
    if writer is None:
        raise TypeError(f"cannot serialise a {kind}")
    return writer(obj)


def groupoid_to_data(G: FiniteGroupoid):
    d = to_data(G)
    if not d["name"]:
        d.pop("name")
    return d


def morphism_to_data(phi: GroupoidMorphism, source=None, target=None):
    G, H = phi.source, phi.target
    return {"kind": "morphism", "name": phi.name,
            "source": source if source is not None else groupoid_to_data(G),
            "target": target if target is not None else groupoid_to_data(H),
            "object_map": [[G.object_labels[x], H.object_labels[phi.object_map[x]]]
                           for x in range(G.n_objects)],
            "arrow_map": [[G.arrow_labels[g], H.arrow_labels[phi.arrow_map[g]]]
                          for g in range(G.n_arrows)]}


def rep_to_data(R: RepUpToHomotopy, groupoid=None):
    G = R.base
    blocks = []
    for (m, chain, n), M in sorted(R.blocks.items()):
        blocks.append({"m": m, "chain": [G.object_labels[chain[0]]] + [G.arrow_labels[g] for g in chain[1:]],
                       "degree": n, "matrix": matrix_to_data(M)})
    return {"kind": "rep", "name": R.name,
            "groupoid": groupoid if groupoid is not None else groupoid_to_data(G),
            "degree_range": [R.lo, R.hi],
            "dims": [{"object": G.object_labels[x], "dims": list(R.dims[x])} for x in range(G.n_objects)],
            "blocks": blocks}


def sset_to_data(X):
    """Nondegenerate simplices get ids "p:t" (t-th nondegenerate p-simplex)."""
    ids = {(p, z): f"{p}:{t}" for p in range(X.cap + 1) for t, z in enumerate(X.nondeg[p])}
    faces = {}
    for p in range(1, X.cap + 1):
        for z in X.nondeg[p]:
            recs = []
            for q, w, tau in X.face_records(p, z):
                r = {"id": ids[(q, w)]}
                if q != p - 1:
                    r["map"] = list(tau.values)
                recs.append(r)
            faces[ids[(p, z)]] = recs
    return {"kind": "sset", "name": X.name, "cap": X.cap,
            "nondegenerate": [[ids[(p, z)] for z in X.nondeg[p]] for p in range(X.cap + 1)],
            "faces": faces}


def sset_map_to_data(f, source=None, target=None):
    X, Y = f.source, f.target
    xd = sset_to_data(X) if source is None else source
    yd = sset_to_data(Y) if target is None else target
    yids = {(p, z): f"{p}:{t}" for p in range(Y.cap + 1) for t, z in enumerate(Y.nondeg[p])}
    asg = {}
    for p in range(X.cap + 1):
        for t, z in enumerate(X.nondeg[p]):
            q, w, tau = Y.normal[p][f.f[p][z]]
            r = {"id": yids[(q, w)]}
            if q != p:
                r["map"] = list(tau.values)
            asg[f"{p}:{t}"] = r
    return {"kind": "sset_map", "name": f.name, "source": xd, "target": yd, "assignment": asg}
