import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from properad import frob
from properad import graphcore as gc
from properad.graphcore import CompositionError, ResourceError

elements = st.builds(frob.FrobBasisElement, st.integers(1, 4), st.integers(1, 4),
                     st.integers(0, 3), st.just(2))


def test_generators_and_identity():
    assert str(frob.generator_element("mu", 2)) == "(2,1,g=0,deg=0)"
    assert frob.generator_element("delta", 3).degree == 3
    assert frob.identity(2) == frob.FrobBasisElement(1, 1, 0, 2)


def test_degree_is_checked():
    with pytest.raises(ValueError):
        frob.FrobBasisElement(1, 1, 0, 2, degree=1)
    with pytest.raises(CompositionError):
        frob.FrobBasisElement(0, 0, 0, 2)


def test_boundary_degrees():
    assert frob.stated_degrees(0, 2, 2) == [0, 2, 4]
    assert frob.stated_degrees(2, 0, 1) == [-2, -1, 0]
    assert frob.basis_in_degree(2, 3, 4, 2) == [frob.FrobBasisElement(2, 3, 0, 2)]
    assert frob.basis_in_degree(2, 3, 5, 2) == []
    assert frob.basis_in_degree(2, 3, 2, 2) == []


@settings(max_examples=100, deadline=None)
@given(elements, elements, st.integers(1, 4))
def test_partial_composition_genus(a, b, m):
    if m > min(a.k, b.j):
        with pytest.raises(CompositionError):
            frob.frob_partial(a, b, m)
        return
    c = frob.frob_partial(a, b, m)
    assert c.g == a.g + b.g + m - 1
    assert c.degree == (c.k - 1 + c.g) * 2


@settings(max_examples=100, deadline=None)
@given(elements, elements, elements)
def test_composition_is_associative_on_chains(a, b, c):
    # a -> b -> c along single edges, either bracketing
    left = frob.frob_partial(frob.frob_partial(a, b, 1), c, 1)
    right = frob.frob_partial(a, frob.frob_partial(b, c, 1), 1)
    assert left == right


def test_compose_unit_is_neutral():
    x = frob.FrobBasisElement(2, 3, 1, 2)
    assert frob.frob_compose([frob.identity(2)] * 2, x) == x
    assert frob.frob_compose([x], frob.FrobBasisElement(3, 1, 0, 2)).g == 3


def test_sym_sign():
    x = frob.FrobBasisElement(2, 2, 0, 1)
    assert frob.frob_sym_sign(x, (1, 0), (0, 1)) == 1
    assert frob.frob_sym_sign(x, (0, 1), (1, 0)) == -1
    y = frob.FrobBasisElement(2, 2, 0, 2)
    assert frob.frob_sym_sign(y, (0, 1), (1, 0)) == 1


def test_reduce_examples():
    mu = gc.corolla("mu", 2, 1)
    assert str(frob.reduce_to_normal_form(mu, 2)) == "(2,1,g=0,deg=0)"
    handle = gc.graft(gc.GraftingPattern((gc.corolla("delta", 1, 2),), mu, (0, 1)))
    assert frob.reduce_to_normal_form(handle, 3) == frob.FrobBasisElement(1, 1, 1, 3)
    assert frob.all_reduction_results(handle, 3) == {frob.FrobBasisElement(1, 1, 1, 3)}


def test_closed_graph_is_refused():
    g = gc.graft(gc.GraftingPattern((gc.corolla("eta", 0, 1),), gc.corolla("eps", 1, 0), (0,)))
    with pytest.raises(CompositionError):
        frob.reduce_to_normal_form(g, 2)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_presentation_relations_hold(n):
    rep = frob.verify_presentation(4, n)
    assert rep.checked > 1000
    assert rep.ok, rep.failures[:3]


def test_confluence_small():
    rep = frob.confluence_audit(3)
    assert rep.ok and rep.shapes > 0
    with pytest.raises(ResourceError):
        frob.verify_presentation(frob.MAX_REDUCE_VERTICES + 1)
