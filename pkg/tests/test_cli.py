import json
import os
import subprocess
import sys

import pytest

from stackcoh import cli
from stackcoh.corpus import ruths
from stackcoh.fileio import dumps, to_file_data

DATA = os.path.join(os.path.dirname(__file__), os.pardir, "data")


def data(name):
    return os.path.join(DATA, name + ".json")


def machine(argv):
    report, _ = cli.run(argv + ["--format", "machine"])
    return json.loads(report.render("machine")), report.exit_status


def row(out, table="cohomology"):
    t = out["tables"][table]
    return dict(zip(t["degrees"], t["dims"]))


def test_cohomology_z3():
    out, code = machine(["cohomology", "corpus:z3", "corpus:z3_trivial", "--max-degree", "3"])
    assert code == 0 and row(out) == {0: 1, 1: 0, 2: 0}


def test_cohomology_pair3_from_files():
    out, code = machine(["cohomology", data("groupoid_pair3"), data("rep_pair3_trivial")])
    assert code == 0 and row(out) == {0: 1, 1: 0, 2: 0, 3: 0}
    assert set(out["inputs"]) == {os.path.normpath(data("groupoid_pair3")),
                                  os.path.normpath(data("rep_pair3_trivial"))}


def test_cohomology_normalized_and_point_two_term():
    out, code = machine(["cohomology", "corpus:unit1", "corpus:point_two_term_zero", "--normalized",
                         "--max-degree", "1"])
    assert code == 0 and row(out) == {-1: 1, 0: 1}


def test_morita_cech_trivial(tmp_path):
    from stackcoh.corpus import groupoids
    from stackcoh.ruth import trivial_rep
    p = tmp_path / "t.json"
    d = to_file_data(trivial_rep(groupoids()["unit2"]))
    d["groupoid"] = "corpus:unit2"
    p.write_text(dumps(d))
    out, code = machine(["morita", "corpus:cech5", str(p), "--max-degree", "3"])
    assert code == 0
    for name in ("direct", "proj", "lin"):
        for side in ("source", "target"):
            assert out["tables"][f"{name}/{side}"]["dims"] == [2, 0, 0]


def test_morita_refuses_non_hypercover():
    out, code = machine(["morita", "corpus:z2_point", "corpus:point_two_term_zero", "--max-degree", "2"])
    assert code == 2
    fail = [c for c in out["checks"] if c["verdict"] == "fail"][0]
    assert fail["name"] == "hypercover" and fail["detail"]["classification"]["FF"] is False


@pytest.mark.parametrize("target", ["corpus:pair3_point", "corpus:graph_point", "corpus:id_z2",
                                    "corpus:cech4_unit2"])
def test_descent(target):
    out, code = machine(["descent", target, "--max-degree", "3"])
    assert code == 0
    assert out["tables"]["source"] == out["tables"]["target"]


def test_cosk_tower_logs_alpha_choice():
    out, code = machine(["cosk-tower", "corpus:cech4_unit2", "--max-degree", "3"])
    assert code == 0
    assert out["certificates"]["step 0"]["alpha_choice"] == {"1": "injective", "2": "injective",
                                                             "3": "injective"}


@pytest.mark.parametrize("cmd", ["sdp-check", "lambda-check", "filtration-check"])
def test_linear_checks(cmd):
    out, code = machine([cmd, "corpus:pair2_two_term", "--max-degree", "3"])
    assert code == 0, out["checks"]


@pytest.mark.parametrize("cmd", ["sdp-check", "lambda-check", "filtration-check"])
def test_linear_checks_refuse_negative_degrees(cmd):
    out, code = machine([cmd, "corpus:pair2_two_term_dual", "--max-degree", "3"])
    assert code == 2


def test_validate():
    paths = sorted(os.path.join(DATA, n) for n in os.listdir(DATA))
    out, code = machine(["validate"] + paths)
    assert code == 0
    assert len(out["inputs"]) == len(paths)


def test_input_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{\n  oops\n}\n")
    out, code = machine(["validate", str(bad)])
    assert code == 2
    assert out["checks"][-1]["detail"]["location"].endswith(":2:3")
    _, code = machine(["cohomology", "corpus:z2", "corpus:pair3_trivial"])
    assert code == 2
    _, code = machine(["cohomology", "corpus:z2", "corpus:z2_trivial", "--max-degree", "0"])
    assert code == 2
    _, code = machine(["cohomology", "corpus:z2_trivial", "corpus:z2_trivial"])
    assert code == 2


def test_axiom_violation_is_an_input_error(tmp_path):
    d = to_file_data(ruths()["z2_two_term"])
    d["blocks"] = [b for b in d["blocks"] if b["m"] != 2]
    p = tmp_path / "r.json"
    p.write_text(dumps(d))
    out, code = machine(["cohomology", "corpus:z2", str(p)])
    assert code == 2
    assert out["checks"][-1]["name"] == "validation"


def test_claim_failure_exit_1(monkeypatch):
    # no bundled input violates a theorem, so the check itself is forced to fail
    from stackcoh.cochain import ComplexPresentation
    monkeypatch.setattr(ComplexPresentation, "check_square_zero", lambda self: [0])
    out, code = machine(["cohomology", "corpus:z2", "corpus:z2_trivial"])
    assert code == 1
    assert [c["category"] for c in out["checks"] if c["verdict"] == "fail"] == ["claim"]


def test_consistency_failure_exit_3(monkeypatch):
    from stackcoh.exactla import RationalMatrix
    import stackcoh.sdp.linear as lin

    def wrong(L, n):
        return RationalMatrix.zeros(L.dim(n + 1), L.dim(n))
    monkeypatch.setattr(lin, "differential_from_formula", wrong)
    out, code = machine(["sdp-check", "corpus:pair2_two_term", "--max-degree", "2"])
    assert code == 3


def test_internal_error_exit_3(monkeypatch):
    import stackcoh.cochain as coch

    def boom(*a, **k):
        raise ZeroDivisionError("boom")
    monkeypatch.setattr(coch, "build_complex", boom)
    out, code = machine(["cohomology", "corpus:z2", "corpus:z2_trivial"])
    assert code == 3 and out["checks"][-1]["name"] == "internal error"


def test_precedence():
    r = cli.RunReport("x")
    r.check("a", False, "claim")
    assert r.exit_status == 1
    r.check("b", False, "consistency")
    assert r.exit_status == 3
    r.check("c", False, "input")
    assert r.exit_status == 2


def test_human_and_machine_carry_the_same_content():
    report, _ = cli.run(["cohomology", "corpus:pair2", "corpus:pair2_two_term", "--max-degree", "3"])
    text = report.render("human")
    d = report.to_data()
    for c in d["checks"]:
        assert c["name"] in text
    for h in d["inputs"].values():
        assert h in text
    for n, v in zip(d["tables"]["cohomology"]["degrees"], d["tables"]["cohomology"]["dims"]):
        assert f"n={n}: {v}" in text
    assert text.endswith(f"exit status: {d['exit_status']}\n")


def _proc(args, env=None):
    e = dict(os.environ)
    e.update(env or {})
    return subprocess.run([sys.executable, "-m", "stackcoh"] + args, capture_output=True, env=e)


def test_subprocess_byte_identical_and_threads():
    args = ["cosk-tower", "corpus:pair3_point", "--max-degree", "3", "--format", "machine"]
    a = _proc(args)
    b = _proc(args)
    c = _proc(args, {"STACKCOH_THREADS": "4"})
    assert a.returncode == 0
    assert a.stdout == b.stdout == c.stdout
    d = _proc(args, {"STACKCOH_THREADS": "zero"})
    assert d.returncode == 2
    assert b"STACKCOH_THREADS" in d.stdout


def test_validate_threads_identical():
    paths = sorted(os.path.join(DATA, n) for n in os.listdir(DATA))[:12]
    a = _proc(["validate"] + paths)
    b = _proc(["validate"] + paths, {"STACKCOH_THREADS": "3"})
    assert a.returncode == 0 and a.stdout == b.stdout


def test_dump_matrices():
    out, code = machine(["cohomology", "corpus:z2", "corpus:z2_trivial", "--max-degree", "2",
                         "--dump-matrices"])
    assert code == 0
    assert out["certificates"]["differentials"]["0"] == [["0"], ["0"]]   # two 1-chains over Z2
