"""
Command line front end.

    stackcoh validate FILE...
    stackcoh cohomology GROUPOID REP [--max-degree N] [--normalized]
    stackcoh morita MORPHISM REP [--max-degree N]
    stackcoh descent SSET_MAP [--max-degree N]
    stackcoh cosk-tower SSET_MAP [--max-degree N]
    stackcoh sdp-check REP [--max-degree N]
    stackcoh filtration-check REP [--max-degree N]
    stackcoh lambda-check REP [--max-degree N]

Inputs are JSON files (see stackcoh.fileio) or "corpus:<name>" for a
bundled example.  Every command prints one report, as text or as JSON
(--format machine); both carry the same content.  Exit status: 0 all
checks pass, 1 a mathematical claim failed on valid input, 2 input or
validation error, 3 two evaluation paths disagree.

STACKCOH_THREADS sets the number of worker threads; it never changes the
report.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from .exactla import format_rational, RationalMatrix
from .fileio import FileFormatError, Loader, ValidationError, corpus_object, object_digest, object_kind

EXIT_OK, EXIT_CLAIM, EXIT_INPUT, EXIT_CONSISTENCY = 0, 1, 2, 3
DEFAULT_CAP = 4
THREADS_ENV = "STACKCOH_THREADS"


class InputError(ValueError):
    """Raised by a command for an input that fails a precondition."""


def jsonable(x):
    """Plain JSON data with canonical orders for reports."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, RationalMatrix):
        return x.to_strings()
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in sorted(x.items(), key=lambda kv: _sort_key(kv[0]))}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return [jsonable(v) for v in sorted(x, key=_sort_key)]
    return str(x)


def _sort_key(k):
    return (0, k, "") if isinstance(k, int) and not isinstance(k, bool) else (1, 0, str(k))


def degree_table(dims):
    """{n: dim} -> {"degrees": [...], "dims": [...]}."""
    keys = sorted(dims)
    return {"degrees": keys, "dims": [dims[n] for n in keys]}


class RunReport:
    def __init__(self, command):
        self.command = command
        self.inputs = {}
        self.checks = []
        self.tables = {}
        self.certificates = {}

    def check(self, name, ok, category="claim", detail=None):
        rec = {"name": name, "category": category, "verdict": "pass" if ok else "fail"}
        if detail is not None:
            rec["detail"] = jsonable(detail)
        self.checks.append(rec)
        return ok

    def fail(self, name, category, detail):
        return self.check(name, False, category, detail)

    @property
    def exit_status(self):
        failed = {c["category"] for c in self.checks if c["verdict"] == "fail"}
        if "input" in failed:
            return EXIT_INPUT
        if "consistency" in failed:
            return EXIT_CONSISTENCY
        if "claim" in failed:
            return EXIT_CLAIM
        return EXIT_OK

    def to_data(self):
        return {"command": self.command, "inputs": dict(sorted(self.inputs.items())),
                "checks": self.checks, "tables": jsonable(self.tables),
                "certificates": jsonable(self.certificates), "exit_status": self.exit_status}

    def render(self, fmt="human"):
        data = self.to_data()
        if fmt == "machine":
            return json.dumps(data, sort_keys=True, indent=1, ensure_ascii=False) + "\n"
        return render_human(data)


def render_human(data):
    """Text rendering of report data; every field of the JSON appears."""
    out = [f"command: {data['command']}"]
    for path, h in data["inputs"].items():
        out.append(f"input: {path} sha256={h}")
    for c in data["checks"]:
        line = f"check: {c['verdict'].upper():4} [{c['category']}] {c['name']}"
        if "detail" in c:
            line += " -- " + _compact(c["detail"])
        out.append(line)
    for section in ("tables", "certificates"):
        for key, value in data[section].items():
            out.append(f"{section[:-1]}: {key}")
            out.extend("  " + s for s in _lines(value))
    out.append(f"exit status: {data['exit_status']}")
    return "\n".join(out) + "\n"


def _compact(x):
    return json.dumps(x, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _lines(value):
    if isinstance(value, dict):
        if set(value) == {"degrees", "dims"}:
            return [f"n={n}: {d}" for n, d in zip(value["degrees"], value["dims"])]
        return [f"{k}: {_compact(v)}" for k, v in value.items()]
    return [_compact(value)]


# ----------------------------------------------------------------------
# helpers

def threads():
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise InputError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def ordered_map(fn, items):
    """fn over items on the configured threads; results keep input order."""
    items = list(items)
    n = threads()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


class Inputs:
    """One loader per command so shared files resolve to the same object."""

    def __init__(self, report):
        self.report = report
        self.loader = Loader()

    def get(self, path, kind=None):
        if path.startswith("corpus:"):
            obj = corpus_object(path[len("corpus:"):], path, kind)
            self.report.inputs[path] = object_digest(obj)
        else:
            obj = self.loader.read(path)
            self.report.inputs.update(self.loader.files)
        if kind is not None and object_kind(obj) != kind:
            raise InputError(f"{path}: expected a {kind}, got a {object_kind(obj)}")
        return obj


def _cap(args):
    if args.max_degree < 1:
        raise InputError("--max-degree must be at least 1")
    return args.max_degree


def _require_ruth(report, R, label="rep"):
    from .ruth import check_ruth
    bad = check_ruth(R, first_only=True)
    if bad:
        raise ValidationError(label, "the representation violates the axioms", bad)
    report.check("rep axioms (RH1, RH2)", True, "input")


def _require_nonnegative(R):
    if R.lo < 0:
        raise InputError(f"degrees [{R.lo}, {R.hi}] include negative degrees; "
                         f"the semi-direct product needs degrees >= 0 (shift the representation)")


# ----------------------------------------------------------------------
# commands

def cmd_validate(args, report):
    def one(path):
        sub = RunReport(None)
        ins = Inputs(sub)
        try:
            obj = ins.get(path)
            kind = object_kind(obj)
            sub.tables[path] = {"kind": kind}
            _validate_object(sub, path, kind, obj)
        except Exception as e:                      # noqa: BLE001 - reported per file
            _record_exception(sub, e, prefix=f"{path}: ")
        return sub

    for sub in ordered_map(one, args.paths):
        report.inputs.update(sub.inputs)
        report.checks.extend(sub.checks)
        report.tables.update(sub.tables)
        report.certificates.update(sub.certificates)


def _validate_object(report, path, kind, obj):
    from .groupoid import classify_morphism, validate_groupoid, to_data
    from .ruth import check_ruth
    if kind == "groupoid":
        bad = validate_groupoid(to_data(obj))
        report.check(f"{path}: groupoid axioms", not bad, "input", bad or None)
        report.tables[path].update({"objects": obj.n_objects, "arrows": obj.n_arrows})
    elif kind == "morphism":
        bad = obj.violations()
        report.check(f"{path}: functor", not bad, "input", bad or None)
        if not bad:
            flags = classify_morphism(obj)
            report.tables[path]["classification"] = flags
    elif kind == "rep":
        bad = check_ruth(obj)
        report.check(f"{path}: rep axioms (RH1, RH2)", not bad, "input", bad[:5] or None)
        report.tables[path].update({"degree_range": [obj.lo, obj.hi], "blocks": len(obj.blocks)})
    elif kind == "sset":
        bad = obj.violations()
        report.check(f"{path}: simplicial identities", not bad, "input", bad or None)
        report.tables[path]["sizes"] = [obj.size(n) for n in range(obj.cap + 1)]
    elif kind == "sset_map":
        bad = obj.violations()
        report.check(f"{path}: simplicial map", not bad, "input", bad or None)
    else:
        report.fail(f"{path}: kind", "input", f"nothing to validate for a {kind}")


def cmd_cohomology(args, report):
    from .cochain import build_complex
    cap = _cap(args)
    ins = Inputs(report)
    G = ins.get(args.groupoid, "groupoid")
    R = ins.get(args.rep, "rep")
    if R.base is not G:
        from .groupoid import to_data
        if to_data(R.base) != to_data(G):
            raise InputError("the representation lives over a different groupoid")
    _require_ruth(report, R, args.rep)
    P = build_complex(R, cap, args.normalized)
    bad = P.check_square_zero()
    report.check("D^2 = 0", not bad, "claim", {"degrees": bad} if bad else None)
    dims = P.cohomology_dims()
    other = build_complex(R, cap, not args.normalized).cohomology_dims()
    report.check("normalized and full cochains agree", dims == other, "consistency",
                 None if dims == other else {"other": other})
    report.tables["cohomology"] = degree_table(dims)
    report.certificates["complex"] = {"normalized": args.normalized, "cap": cap,
                                      "cochain_dims": {n: P.dim(n) for n in sorted(P.bases) if n >= P.first_degree}}
    if args.dump_matrices:
        report.certificates["differentials"] = {n: P.differential(n) for n in sorted(P.D)
                                                if n >= P.first_degree}


_MORITA_CATEGORY = {"hypercover": "input", "pipelines_agree": "consistency"}


def cmd_morita(args, report):
    from .groupoid import classify_morphism
    from .morita import NotHypercover, morita_pipeline
    cap = _cap(args)
    ins = Inputs(report)
    phi = ins.get(args.morphism, "morphism")
    R = ins.get(args.rep, "rep")
    flags = classify_morphism(phi)
    if not flags.get("hypercover"):
        raise NotHypercover("the morphism is not a hypercover", flags)
    if R.base is not phi.target:
        raise InputError("the representation must live over the target of the morphism")
    _require_ruth(report, R, args.rep)
    M = morita_pipeline(phi, R, cap)
    for name, ok in M.verdicts.items():
        report.check(name, ok, _MORITA_CATEGORY.get(name, "claim"))
    for name in ("direct", "proj", "lin"):
        for side in ("source", "target"):
            report.tables[f"{name}/{side}"] = {"degrees": M.degrees, "dims": M.row(name, side)}
    report.certificates["classification"] = M.flags
    report.certificates["linear_cap"] = M.linear_cap
    report.certificates["filtration"] = M.filtration
    report.certificates["direct_bijective"] = M.direct_bijective
    report.certificates["lin_bijective"] = M.lin_bijective
    report.certificates["lambda_defects"] = M.lambda_defects
    if args.dump_matrices:
        report.certificates["pullback"] = {n: F for n, F in sorted(M.direct.F.items())}


def _sset_map(ins, path):
    return ins.get(path, "sset_map")


def _descent_checks(report, prefix, D):
    for name, ok in D.verdicts.items():
        report.check(f"{prefix}{name}", ok, "claim")
    report.check(f"{prefix}path space unital and cartesian", D.path_ok, "claim")


def _descent_certificate(D, dump):
    cert = {"m": D.m, "alpha_choice": D.squares, "path_space_sizes": D.path_sizes,
            "fibres": D.fibers, "weights": D.mu}
    if dump:
        cert["homotopy"] = D.h
        cert["pushforward"] = D.mu_star
    return cert


def cmd_descent(args, report):
    from .kan.classify import classify_sset_map
    from .kan.descent import descent_tower, descent_verify
    ins = Inputs(report)
    f = _sset_map(ins, args.map)
    cap = min(_cap(args), f.cap)
    flags = classify_sset_map(f, cap)
    report.certificates["classification"] = flags
    if not flags["hypercover"]:
        raise InputError("the map is not a hypercover; see certificate 'classification'")
    report.check("hypercover", True, "input")
    if flags["m_simple"]:
        D = descent_verify(f, cap, flags["m_simple"][0])
        _descent_checks(report, "", D)
        report.tables["source"] = degree_table(D.dims_x)
        report.tables["target"] = degree_table(D.dims_y)
        report.certificates["descent"] = _descent_certificate(D, args.dump_matrices)
        return
    tower, reports = descent_tower(f, cap)
    report.certificates["tower_nontrivial_steps"] = tower.nontrivial()
    for m, D in reports:
        _descent_checks(report, f"step {m}: ", D)
        report.certificates[f"step {m}"] = _descent_certificate(D, args.dump_matrices)
    from .kan.descent import cohomology_dims
    hx, hy = cohomology_dims(f.source, cap - 1), cohomology_dims(f.target, cap - 1)
    report.check("dims", hx == hy, "claim")
    report.tables["source"] = degree_table(hx)
    report.tables["target"] = degree_table(hy)


def cmd_cosk_tower(args, report):
    from .kan.cosk import coskeleton_tower
    from .kan.descent import descent_verify
    ins = Inputs(report)
    f = _sset_map(ins, args.map)
    cap = min(_cap(args), f.cap)
    tower = coskeleton_tower(f, cap)
    report.check("factors through the tower", True, "claim")
    for st in tower.steps:
        report.check(f"step {st.m}: {st.m}-simple hypercover", st.verified, "claim",
                     None if st.verified else st.flags)
        report.check(f"step {st.m}: squares cartesian", st.verified and len(st.squares) == cap - st.m,
                     "claim")
        report.certificates[f"step {st.m}"] = {
            "alpha_choice": st.squares, "trivial": st.trivial,
            "sizes": [st.map.source.size(n) for n in range(cap + 1)]}

    def run(st):
        return descent_verify(st.map, cap, st.m) if st.verified else None

    for st, D in zip(tower.steps, ordered_map(run, tower.steps)):
        if D is not None:
            _descent_checks(report, f"step {st.m}: descent ", D)
    report.tables["nontrivial_steps"] = tower.nontrivial()


def _linear(args, report, ins):
    from .sdp.bundle import SdpBundle
    from .sdp.linear import LinearComplex
    cap = _cap(args)
    R = ins.get(args.rep, "rep")
    _require_ruth(report, R, args.rep)
    _require_nonnegative(R)
    V = SdpBundle(R.base, R, cap)
    return R, V, LinearComplex(V, cap)


def cmd_sdp_check(args, report):
    from .sdp.bundle import verify_simplicial_identities
    from .sdp.linear import differential_from_formula
    R, V, L = _linear(args, report, Inputs(report))
    bad = verify_simplicial_identities(V, L.cap)
    report.check("simplicial identities", not bad, "claim", bad[:5] or None)
    agree = [n for n in range(L.cap) if differential_from_formula(L, n) != L.D[n]]
    report.check("face and formula differentials agree", not agree, "consistency",
                 {"degrees": agree} if agree else None)
    sq = [n for n in range(L.cap - 1) if not (L.D[n + 1] @ L.D[n]).is_zero()]
    report.check("delta^2 = 0 on linear cochains", not sq, "claim", {"degrees": sq} if sq else None)
    report.tables["linear_cochain_dims"] = degree_table({n: L.dim(n) for n in range(L.cap + 1)})
    report.tables["linear_cohomology"] = degree_table(L.cohomology_dims())
    if args.dump_matrices:
        report.certificates["levels"] = [V.dump(n) for n in range(L.cap + 1)]
        report.certificates["differentials"] = {n: L.D[n] for n in range(L.cap)}


def cmd_filtration_check(args, report):
    from .sdp.filtration import Regularization, filtration_table, regularization_report
    R, V, L = _linear(args, report, Inputs(report))
    ms = list(range(0, min(L.cap, 4)))
    table = filtration_table(L, ms)
    constant = all(table[m] == table[ms[0]] for m in ms)
    report.check("filtration cohomology constant in m", constant, "claim")
    for m in ms:
        rep = regularization_report(L, m, reg=Regularization(L, m))
        report.check(f"regularization I at m={m}", rep.passed, "claim", rep.failures[:5] or None)
        report.certificates[f"m={m}"] = {"tested": rep.tested, "positive_defects": rep.positive_defects,
                                         "primitives_verified": rep.certificates}
    for m in ms:
        report.tables[f"m={m}"] = degree_table(table[m])


def cmd_lambda_check(args, report):
    from .sdp.linear import LambdaMap, lambda_bijection, projectable_dims
    R, V, L = _linear(args, report, Inputs(report))
    lam = LambdaMap(L)
    defects = lam.chain_map_defects()
    report.check("delta lambda = lambda d", not defects, "claim", {"degrees": defects} if defects else None)
    bij = lambda_bijection(lam)
    for n, rec in bij.items():
        report.check(f"lambda bijective onto C_proj in degree {n}", rec["bijective"], "claim")
    report.certificates["bijection"] = bij
    proj = projectable_dims(L)
    dual = lam.P.cohomology_dims(start=0)
    report.check("H(C_proj) = H(G, E*)", proj == dual, "claim")
    report.tables["projectable"] = degree_table(proj)
    report.tables["dual"] = degree_table(dual)
    if args.dump_matrices:
        report.certificates["lambda"] = {n: M for n, M in sorted(lam.M.items())}


COMMANDS = {
    "validate": cmd_validate,
    "cohomology": cmd_cohomology,
    "morita": cmd_morita,
    "descent": cmd_descent,
    "cosk-tower": cmd_cosk_tower,
    "sdp-check": cmd_sdp_check,
    "filtration-check": cmd_filtration_check,
    "lambda-check": cmd_lambda_check,
}


def _record_exception(report, e, prefix=""):
    from .cochain import CapError
    from .exactla import NotAChainMap
    from .groupoid import GroupoidError
    from .kan.cosk import CartesianError as TowerError, UnsupportedTruncation
    from .kan.descent import NotSimple
    from .kan.sset import CapExceeded, SSetError
    from .morita import NotHypercover, PipelineMismatch
    from .ruth import InfeasibleCompletion, RepError
    from .sdp.bundle import CartesianError as BaseChangeError, SdpPreconditionError
    from .sdp.linear import InternalMismatch
    if isinstance(e, FileFormatError):
        report.fail(prefix + "parse", "input", {"location": e.location, "message": e.message})
    elif isinstance(e, ValidationError):
        report.fail(prefix + "validation", "input", {"location": e.location, "message": str(e),
                                                     "violations": e.violations[:5]})
    elif isinstance(e, NotHypercover):
        report.fail(prefix + "hypercover", "input", {"message": str(e), "classification": e.flags})
    elif isinstance(e, (InputError, SdpPreconditionError, UnsupportedTruncation, NotSimple, CapError,
                        CapExceeded, RepError, GroupoidError, SSetError, InfeasibleCompletion)):
        report.fail(prefix + "input", "input", str(e))
    elif isinstance(e, (TowerError, BaseChangeError)):
        report.fail(prefix + "cartesian", "claim", str(e))
    elif isinstance(e, (InternalMismatch, PipelineMismatch, NotAChainMap)):
        report.fail(prefix + "consistency", "consistency", str(e))
    else:
        report.fail(prefix + "internal error", "consistency", f"{type(e).__name__}: {e}")


def build_parser():
    p = argparse.ArgumentParser(prog="stackcoh", description="Exact cohomology of finite groupoids with "
                                "coefficients in representations up to homotopy.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-degree", type=int, default=DEFAULT_CAP, metavar="N",
                        help="degree cap: cohomology is reported in degrees < N (default %(default)s)")
    common.add_argument("--normalized", action="store_true", help="use normalized cochains")
    common.add_argument("--dump-matrices", action="store_true", help="include matrices in the report")
    common.add_argument("--format", choices=("human", "machine"), default="human")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("validate", parents=[common], help="load files and run their validators")
    s.add_argument("paths", nargs="+")
    s = sub.add_parser("cohomology", parents=[common], help="dim H^n(G, E)")
    s.add_argument("groupoid")
    s.add_argument("rep")
    s = sub.add_parser("morita", parents=[common], help="Morita invariance along a hypercover")
    s.add_argument("morphism")
    s.add_argument("rep")
    for name, text in (("descent", "descent along a hypercover of simplicial sets"),
                       ("cosk-tower", "the coskeleton tower of a hypercover")):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("map")
    for name, text in (("sdp-check", "semi-direct product and linear cochains"),
                       ("filtration-check", "regularity filtration and the operator I"),
                       ("lambda-check", "the embedding lambda onto projectable cochains")):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("rep")
    return p


def run(argv):
    """(report, exit status) for an argument list."""
    args = build_parser().parse_args(argv)
    report = RunReport(" ".join(["stackcoh"] + list(argv)))
    try:
        threads()
        COMMANDS[args.command](args, report)
    except Exception as e:                          # noqa: BLE001 - every failure is reported
        _record_exception(report, e)
    return report, args


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    report, args = run(argv)
    sys.stdout.write(report.render(args.format))
    return report.exit_status


if __name__ == "__main__":
    sys.exit(main())
