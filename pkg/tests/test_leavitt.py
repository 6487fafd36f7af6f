import pytest
from hypothesis import given, settings, strategies as st

from hacalc.errors import PreconditionError
from hacalc.leavitt import (DirectedGraph, build_NE, cycle, ha_cohn, ha_leavitt, parse_graph,
                            regular_vertices, rose, single_edge)

ISOLATED = DirectedGraph.make(["v"])


def test_regular_vertices():
    assert regular_vertices(rose(1)) == ["v"]
    assert regular_vertices(ISOLATED) == []
    assert regular_vertices(single_edge()) == ["v"]


def test_NE_examples():
    assert build_NE(rose(1)).dense() == [[0]]
    for n in (2, 3, 5):
        assert build_NE(rose(n)).dense() == [[1 - n]]
    assert build_NE(single_edge()).dense() == [[1], [-1]]


@pytest.mark.parametrize("E,dims", [
    (rose(1), (1, 1)), (rose(2), (0, 0)), (rose(3), (0, 0)), (ISOLATED, (1, 0)),
    (cycle(2), (1, 1)), (single_edge(), (1, 0)),
])
def test_leavitt_values(E, dims):
    assert ha_leavitt(E).dims() == dims


def test_cohn():
    three = DirectedGraph.make(["a", "b", "c"], [("a", "b"), ("b", "b")])
    assert ha_cohn(three).dims() == (3, 0)
    assert ha_cohn(rose(4)).dims() == (1, 0)


def test_integer_invariants_of_rose():
    assert ha_leavitt(rose(3)).integer_invariants == [2]


def test_parse_graph():
    text = "# comment\nvertices: a b\n\nedge: a b\nedge: b b\n"
    E = parse_graph(text)
    assert E.vertices == ("a", "b") and E.edges == (("a", "b"), ("b", "b"))
    assert parse_graph(E.to_text()) == E


@pytest.mark.parametrize("text,line", [
    ("vertices: a\nedge: a c\n", 2),
    ("edge: a a\n", 1),
    ("vertices: a\nlink a a\n", 2),
    ("vertices: a\nvertices: b\n", 2),
])
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(PreconditionError, match=f"line {line}"):
        parse_graph(text)


@st.composite
def graphs(draw):
    n = draw(st.integers(1, 5))
    vs = [f"v{i}" for i in range(n)]
    edges = draw(st.lists(st.tuples(st.sampled_from(vs), st.sampled_from(vs)), max_size=8))
    return DirectedGraph.make(vs, edges)


@settings(max_examples=80, deadline=None)
@given(graphs())
def test_euler_characteristic(E):
    rep = ha_leavitt(E)
    assert rep.h0 - rep.h1 == len(E.vertices) - len(regular_vertices(E))


@settings(max_examples=50, deadline=None)
@given(graphs(), st.randoms(use_true_random=False))
def test_relabeling_invariance(E, rnd):
    names = [f"w{i}" for i in range(len(E.vertices))]
    rnd.shuffle(names)
    F = E.relabel(dict(zip(E.vertices, names)))
    assert ha_leavitt(F).dims() == ha_leavitt(E).dims()


@settings(max_examples=50, deadline=None)
@given(graphs())
def test_isolated_vertex_adds_one(E):
    h0, h1 = ha_leavitt(E).dims()
    assert ha_leavitt(E.with_vertex("extra")).dims() == (h0 + 1, h1)
