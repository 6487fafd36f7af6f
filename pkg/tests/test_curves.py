import pytest

from hacalc.curves import (LocalizedRing, compare_with_leavitt_torus, de_rham, parse_poly,
                           pformat, pmul, split_roots, verify_antiderivative)
from hacalc.errors import PreconditionError
from hacalc.leavitt import DirectedGraph, rose


def test_parse_poly():
    assert parse_poly("x^2-x") == parse_poly("(x)(x-1)")
    assert parse_poly("(x-1)(x+2)") == pmul(parse_poly("x-1"), parse_poly("x+2"))
    assert pformat(parse_poly("x^3 - x")) == "x^3-x"
    with pytest.raises(PreconditionError):
        parse_poly("x^^2")


def test_split_roots():
    assert sorted(split_roots(parse_poly("x^3-x"))) == [-1, 0, 1]


def test_affine_line():
    rep = de_rham(LocalizedRing.from_poly("1", 5))
    assert rep.dims() == (1, 0) and rep.h1_basis == []


def test_torus():
    R = LocalizedRing.from_poly("x", 5)
    rep = de_rham(R)
    assert rep.dims() == (1, 1)
    assert rep.h1_basis == ["dx/x"]
    assert rep.stable
    assert all(verify_antiderivative(R, e) for e in rep.reduction_log)


@pytest.mark.parametrize("f,p,basis", [
    ("x^2-x", 5, {"dx/x", "dx/(x-1)"}),
    ("x^2-x", 3, {"dx/x", "dx/(x-1)"}),
    ("(x-1)(x+2)", 7, {"dx/(x-1)", "dx/(x+2)"}),
])
def test_punctured_lines(f, p, basis):
    R = LocalizedRing.from_poly(f, p)
    rep = de_rham(R)
    assert rep.dims() == (1, len(basis))
    assert set(rep.h1_basis) == basis
    assert all(verify_antiderivative(R, e) for e in rep.reduction_log)


@pytest.mark.parametrize("f", ["x^2", "x^2+1", "2x"])
def test_rejected_polynomials(f):
    with pytest.raises(PreconditionError):
        LocalizedRing.from_poly(f, 5)


def test_roots_colliding_mod_p_rejected():
    with pytest.raises(PreconditionError):
        LocalizedRing.from_poly("(x-1)(x-6)", 5)


def test_compare_with_leavitt():
    assert compare_with_leavitt_torus()
    assert compare_with_leavitt_torus(DirectedGraph.make(["v"]), f="1")
    assert not compare_with_leavitt_torus(rose(2))


def test_json_report():
    d = de_rham(LocalizedRing.from_poly("x", 5)).to_json()
    assert (d["h0"], d["h1"], d["h1_basis"]) == (1, 1, ["dx/x"])
