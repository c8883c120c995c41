import json
import os
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from stackcoh.corpus import groupoids, morphisms, ruths, sset_maps, write_files
from stackcoh.fileio import (FileFormatError, ValidationError, corpus_object, dumps, load,
                             object_digest, parse_rational, to_file_data)
from stackcoh.groupoid import pair_groupoid, to_data
from stackcoh.kan.sset import SimplicialMap, TruncatedSSet
from stackcoh.ruth import check_ruth

DATA = os.path.join(os.path.dirname(__file__), os.pardir, "data")


def _write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(dumps(data) if not isinstance(data, str) else data, encoding="utf-8")
    return str(p)


def _same(a, b):
    """Equal up to the identity of the underlying objects."""
    if hasattr(a, "blocks"):
        return (to_data(a.base) == to_data(b.base) and (a.lo, a.hi, a.dims) == (b.lo, b.hi, b.dims)
                and a.blocks == b.blocks)
    if isinstance(a, SimplicialMap):
        return (_same(a.source, b.source) and _same(a.target, b.target)
                and [sorted(Counter(a.f[n]).values()) for n in a.f] == [sorted(Counter(b.f[n]).values()) for n in b.f])
    if isinstance(a, TruncatedSSet):
        return [a.size(n) for n in range(a.cap + 1)] == [b.size(n) for n in range(b.cap + 1)]
    if hasattr(a, "object_map"):
        return (a.object_map, a.arrow_map) == (b.object_map, b.arrow_map) and _same(a.source, b.source)
    return to_data(a) == to_data(b)


@pytest.mark.parametrize("table,name", [(t, n) for t, f in (("groupoid", groupoids), ("morphism", morphisms),
                                                           ("rep", ruths), ("sset_map", sset_maps))
                                        for n in sorted(f())])
def test_round_trip(tmp_path, table, name):
    obj = corpus_object(name, kind=table)
    path = _write(tmp_path, "x.json", to_file_data(obj))
    back, files = load(path)
    assert _same(obj, back)
    assert list(files) == [os.path.normpath(path)]
    assert to_file_data(back) == to_file_data(obj)


def test_bundled_data_files_load():
    names = sorted(os.listdir(DATA))
    assert len(names) >= 30
    for n in names:
        obj, _ = load(os.path.join(DATA, n))
        if n.startswith("rep_"):
            assert check_ruth(obj) == []


def test_written_files_match_bundled(tmp_path):
    write_files(str(tmp_path))
    for n in sorted(os.listdir(DATA)):
        with open(os.path.join(DATA, n), encoding="utf-8") as a:
            assert a.read() == (tmp_path / n).read_text(encoding="utf-8"), n


def test_corpus_refs_and_kinds():
    assert corpus_object("cech5", kind="groupoid") is groupoids()["cech5"]
    assert corpus_object("cech5", kind="morphism") is morphisms()["cech5"]
    obj, files = load("corpus:pair2_two_term")
    assert obj is ruths()["pair2_two_term"]
    assert files == {"corpus:pair2_two_term": object_digest(obj)}
    with pytest.raises(FileFormatError):
        load("corpus:nothing")


def test_reference_to_corpus_groupoid(tmp_path):
    data = to_file_data(ruths()["z2_sign"])
    data["groupoid"] = "corpus:z2"
    obj, _ = load(_write(tmp_path, "r.json", data))
    assert _same(obj, ruths()["z2_sign"])


def test_reference_kind_mismatch(tmp_path):
    data = to_file_data(ruths()["z2_sign"])
    data["groupoid"] = "corpus:z2_trivial"
    with pytest.raises(FileFormatError, match="expected a groupoid"):
        load(_write(tmp_path, "r.json", data))


def test_json_syntax_error_location(tmp_path):
    path = _write(tmp_path, "bad.json", '{\n  "kind": "groupoid",\n  "objects": [1,, 2]\n}\n')
    with pytest.raises(FileFormatError) as e:
        load(path)
    assert e.value.location == f"{path}:3:17"


def test_float_rejected():
    with pytest.raises(FileFormatError):
        parse_rational(0.5, "here")
    assert parse_rational("-3/6", "here") == parse_rational(" -1/2", "here")


def test_shape_violation(tmp_path):
    data = to_file_data(ruths()["pair2_two_term"])
    data["blocks"][0]["matrix"] = [["1", "2", "3"]]
    with pytest.raises(ValidationError, match="RH-shape violation"):
        load(_write(tmp_path, "r.json", data))


def test_broken_groupoid_is_a_validation_error(tmp_path):
    data = to_data(pair_groupoid(range(2)))
    data["compose"] = [t for t in data["compose"] if t[0] != t[1]]
    with pytest.raises((ValidationError, FileFormatError)):
        load(_write(tmp_path, "g.json", data))


def test_broken_sset_face(tmp_path):
    data = to_file_data(sset_maps()["pair3_point"].source)
    some = sorted(k for k in data["faces"] if k.startswith("2:"))[0]
    recs = data["faces"][some]
    recs[0], recs[2] = recs[2], recs[0]
    with pytest.raises(ValidationError):
        load(_write(tmp_path, "s.json", data))


def test_missing_field_named(tmp_path):
    data = to_file_data(morphisms()["cech5"])
    del data["arrow_map"]
    with pytest.raises(FileFormatError, match="arrow_map"):
        load(_write(tmp_path, "m.json", data))


def test_relative_paths(tmp_path):
    sub = tmp_path / "g"
    sub.mkdir()
    _write(sub, "z2.json", to_file_data(groupoids()["z2"]))
    data = to_file_data(ruths()["z2_sign"])
    data["groupoid"] = "g/z2.json"
    obj, files = load(_write(tmp_path, "r.json", data))
    assert _same(obj, ruths()["z2_sign"])
    assert len(files) == 2


@settings(max_examples=30, deadline=None)
@given(st.integers(-50, 50), st.integers(1, 50))
def test_rational_strings_round_trip(p, q):
    from fractions import Fraction
    from stackcoh.exactla import format_rational
    x = Fraction(p, q)
    assert parse_rational(format_rational(x), "x") == x
    assert json.loads(dumps({"x": format_rational(x)}))["x"] == format_rational(x)
