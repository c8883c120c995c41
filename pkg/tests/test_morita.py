import pytest

from stackcoh.corpus import morphisms, ruths
from stackcoh.morita import NotHypercover, dual_shift, morita_pipeline
from stackcoh.ruth import check_ruth, trivial_rep


@pytest.mark.parametrize("name,rep,cap", [("pair3_point", None, 3), ("id_z3", "z3_trivial", 3),
                                          ("pair2xz2_z2", "z2_trivial", 3),
                                          ("pair2xz2_z2", "z2_two_term", 2),
                                          ("cech4", "unit2_two_term", 3),
                                          ("pair3_pair2", "pair2_two_term", 3)])
def test_pipelines_agree(name, rep, cap):
    phi = morphisms()[name]
    R = ruths()[rep] if rep else trivial_rep(phi.target)
    out = morita_pipeline(phi, R, cap=cap)
    assert out.passed, out.verdicts
    assert out.row("direct", "source") == out.row("direct", "target")


def test_trivial_rep_on_cech():
    phi = morphisms()["cech5"]
    out = morita_pipeline(phi, trivial_rep(phi.target), cap=3)
    assert out.passed
    assert out.row("direct") == [2, 0, 0]


def test_refuses_non_hypercover():
    phi = morphisms()["z2_point"]
    with pytest.raises(NotHypercover) as e:
        morita_pipeline(phi, ruths()["point_two_term_zero"], cap=2)
    assert e.value.flags["FF"] is False


def test_refuses_rep_over_wrong_groupoid():
    with pytest.raises(ValueError):
        morita_pipeline(morphisms()["cech5"], ruths()["z2_trivial"], cap=2)


@pytest.mark.parametrize("name", sorted(ruths()))
def test_dual_shift_is_nonnegative(name):
    R = ruths()[name]
    F = dual_shift(R)
    assert (F.lo, F.hi) == (0, R.hi - R.lo)
    assert check_ruth(F) == []
