import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from properad import graphcore as gc
from properad.graphcore import CompositionError, DirectedGraph, GraphError, ResourceError

DECS = {"mu": (2, 1), "delta": (1, 2)}
POOL = [g for j in (1, 2) for k in (1, 2) for g in gc.enumerate_graphs(j, k, 3, DECS)]


def test_parse_example():
    text = "v0:mu(2,1)\nv1:delta(1,2)\ne:0.0->1.0\nin:0.0,0.1\nout:1.0,1.1\n"
    g = gc.parse_graph(text)
    assert (g.n_inputs, g.n_outputs, g.n_vertices) == (2, 2, 2)
    assert gc.loop_genus(g) == 0
    assert gc.parse_graph(g.serialize()) == g


@pytest.mark.parametrize("text, message", [
    ("v0:mu(2,1)\nin:0.0\nout:0.0\n", "dangling"),
    ("v0:mu(2,1)\nv1:mu(2,1)\nin:0.0,0.1,1.0,1.1\nout:0.0,1.0\n", "disconnected"),
    ("v0:mu(2,1)\nin:0.0,0.0\nout:0.0\n", "used twice"),
    ("v0:mu(2,1)\nin:0.0,0.1\nout:0.0\ne:0.0->3.0\n", "missing"),
])
def test_rejections(text, message):
    with pytest.raises(GraphError, match=message):
        gc.parse_graph(text)


def test_cycle_rejected():
    verts = (("delta", 1, 2), ("mu", 2, 1))
    with pytest.raises(GraphError, match="cycle"):
        DirectedGraph(verts, (((0, 0), (1, 0)), ((1, 0), (0, 0))), ((1, 1),), ((0, 1),))


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(POOL), st.randoms(use_true_random=False))
def test_canonical_form_ignores_vertex_order(g, rnd):
    perm = list(range(g.n_vertices))
    rnd.shuffle(perm)
    h = g.relabel(perm)
    assert gc.canonical_form(h) == gc.canonical_form(g)
    assert gc.is_isomorphic(g, h)
    assert gc.parse_graph(h.serialize()) == h


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(POOL))
def test_contraction_lowers_genus_by_extra_edges(g):
    for a, b in gc.contractible_pairs(g):
        m = g.adjacency()[(a, b)]
        h = gc.contract(g, a, b, "x")
        assert gc.loop_genus(h) == gc.loop_genus(g) - (m - 1)
        assert (h.n_inputs, h.n_outputs) == (g.n_inputs, g.n_outputs)


def test_contract_refuses_cycle():
    # a -> b directly and through c: merging a, b would loop through c
    verts = (("delta", 1, 2), ("delta", 1, 2), ("mu", 2, 1))
    g = DirectedGraph(verts, (((0, 0), (1, 0)), ((0, 1), (2, 0)), ((1, 0), (2, 1))),
                      ((0, 0),), ((1, 1), (2, 0)))
    assert (0, 2) not in gc.contractible_pairs(g)
    with pytest.raises(CompositionError):
        gc.contract(g, 0, 2, "x")


def test_automorphisms_of_parallel_pair():
    g = DirectedGraph((("mu", 2, 1), ("mu", 2, 1), ("mu", 2, 1)),
                      (((0, 0), (2, 0)), ((1, 0), (2, 1))),
                      ((0, 0), (0, 1), (1, 0), (1, 1)), ((2, 0),))
    # the legs pin every vertex
    assert gc.automorphisms(g) == [[0, 1, 2]]


def test_enumeration_counts():
    # legs are ordered, so the corolla appears once per ordering of its inputs
    assert len(gc.enumerate_graphs(2, 1, 1, DECS)) == 2
    assert len(gc.enumerate_graphs(1, 2, 1, DECS)) == 2
    # (1,1) from one delta over one mu: input/output fixed, two wirings of the pair of edges
    two = [g for g in gc.enumerate_graphs(1, 1, 2, DECS) if g.n_vertices == 2]
    assert len(two) == 2
    assert all(gc.loop_genus(g) == 1 for g in two)
    with pytest.raises(ResourceError):
        gc.enumerate_graphs(1, 1, gc.MAX_ENUM_VERTICES + 1, DECS)


def test_graft_genus_and_errors():
    mu = gc.corolla("mu", 2, 1)
    delta = gc.corolla("delta", 1, 2)
    g = gc.graft(gc.GraftingPattern((delta,), mu, (1, 0)))
    assert gc.loop_genus(g) == 1
    assert (g.n_inputs, g.n_outputs) == (1, 1)
    with pytest.raises(CompositionError):
        gc.GraftingPattern((mu,), mu, (0,))
    with pytest.raises(CompositionError):
        gc.GraftingPattern((delta,), mu, (0, 0))
