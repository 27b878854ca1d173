from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from properad.endprop import (MultiMap, compose_linear, end_compose, end_differential, evaluate_graph,
                              sym_act, tensor_power)
from properad import graphcore as gc
from properad.exactalg import ChainComplex, GradedSpace, LinearMap

SPACE = GradedSpace((("a", 0), ("b", 1), ("c", 1), ("e", 2)))
COMPLEX = ChainComplex(SPACE, LinearMap(SPACE, SPACE, 1, {(1, 0): Fraction(1), (3, 2): Fraction(1)}))


@st.composite
def multimaps(draw, j=None, k=None):
    j = draw(st.integers(1, 2)) if j is None else j
    k = draw(st.integers(1, 2)) if k is None else k
    degree = draw(st.integers(-2, 2))
    src, tgt = tensor_power(SPACE, j), tensor_power(SPACE, k)
    slots = [(t, s) for s in range(src.dim) for t in range(tgt.dim)
             if tgt.degree(t) - src.degree(s) == degree]
    entries = {}
    for ts in draw(st.lists(st.sampled_from(slots), max_size=6)) if slots else []:
        entries[ts] = Fraction(draw(st.integers(-3, 3)))
    return MultiMap(SPACE, j, k, degree, entries)


@settings(max_examples=60, deadline=None)
@given(multimaps())
def test_differential_squares_to_zero(f):
    assert end_differential(end_differential(f, COMPLEX), COMPLEX).is_zero()


@settings(max_examples=60, deadline=None)
@given(multimaps(k=1), multimaps(j=1))
def test_leibniz_rule(f, g):
    # f : V^j -> V then g : V -> V^k
    left = end_differential(compose_linear(g, f), COMPLEX)
    right = compose_linear(end_differential(g, COMPLEX), f) \
        + compose_linear(g, end_differential(f, COMPLEX)).scale((-1) ** g.degree)
    assert left == right


@settings(max_examples=60, deadline=None)
@given(multimaps(), st.data())
def test_symmetric_action_inverts(f, data):
    sigma = data.draw(st.permutations(list(range(f.j))))
    tau = data.draw(st.permutations(list(range(f.k))))
    inv_s = [sigma.index(i) for i in range(f.j)]
    inv_t = [tau.index(i) for i in range(f.k)]
    assert sym_act(inv_s, sym_act(sigma, f, tau), inv_t) == f


def test_swap_of_odd_tensor_has_sign():
    f = MultiMap.from_tuples(SPACE, 2, 2, 0, {((1, 2), (1, 2)): 1})
    # the input word (c, b) is reordered to (b, c): two odd letters cross
    assert sym_act((1, 0), f, (0, 1)).tuples() == {((1, 2), (2, 1)): -1}


def test_end_compose_with_identity():
    f = MultiMap.from_tuples(SPACE, 2, 1, 1, {((3,), (0, 1)): 2, ((3,), (1, 0)): 2})
    ident = MultiMap.identity(SPACE)
    assert end_compose([f], ident, (0,)) == f
    assert end_compose([ident, ident], f, (0, 1)) == f
    assert end_compose([ident, ident], f, (1, 0)) == sym_act((1, 0), f, (0,))


def test_evaluate_two_vertex_graph_matches_composite():
    f = MultiMap.from_tuples(SPACE, 1, 2, 0, {((0, 0), (0,)): 1, ((1, 2), (3,)): 1})
    g = MultiMap.from_tuples(SPACE, 2, 1, 0, {((0,), (0, 0)): 1, ((3,), (1, 2)): 1})
    graph = gc.graft(gc.GraftingPattern((gc.corolla(0, 1, 2),), gc.corolla(1, 2, 1), (0, 1)))
    assert evaluate_graph(graph, [f, g], SPACE) == compose_linear(g, f)
