from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from properad import dilie, frobalg
from properad.endprop import MultiMap
from properad.exactalg import InputError, InvariantError
from properad.graphcore import ResourceError


def test_killing_forms():
    sl2 = dilie.killing_form(dilie.load_lie("sl2"))
    assert sl2 == [[0, 4, 0], [4, 0, 0], [0, 0, 8]]
    so3 = dilie.killing_form(dilie.load_lie("so3"))
    assert so3 == [[-2, 0, 0], [0, -2, 0], [0, 0, -2]]


@pytest.mark.parametrize("name", ["sl2", "so3"])
def test_killing_cobracket_relations(name):
    D = dilie.cobracket_from_killing(dilie.load_lie(name))
    rep = dilie.dilie_relations_check(D)
    assert rep.ok, rep.failures()
    assert rep.max_defect() == 0


def test_heisenberg_rejected():
    with pytest.raises(dilie.NotSemisimpleError, match="degenerate"):
        dilie.cobracket_from_killing(dilie.load_lie("heisenberg3"))


@settings(max_examples=20, deadline=None)
@given(st.fractions(min_value=-4, max_value=4).filter(bool))
def test_rescaled_bracket_rescales_cobracket(c):
    L = dilie.load_lie("sl2")
    scaled = dilie.LieAlgebraData(L.names, {k: {t: v * c for t, v in row.items()}
                                            for k, row in L.constants.items()}, "scaled")
    D = dilie.cobracket_from_killing(L)
    E = dilie.cobracket_from_killing(scaled)
    assert E.cobracket == D.cobracket.scale(1 / Fraction(c))
    assert dilie.dilie_relations_check(E).ok


def test_perturbed_cobracket_is_caught():
    D = dilie.cobracket_from_killing(dilie.load_lie("sl2"))
    bump = MultiMap.from_tuples(D.space, 1, 2, 0, {((2, 2), (2,)): 1})
    bad = dilie.DiLieData(D.space, D.bracket, D.cobracket + bump, 0)
    rep = dilie.dilie_relations_check(bad)
    assert not rep.ok
    assert "coantisymmetry" in rep.failures()
    assert "compatibility" in rep.failures()
    assert "cojacobi" in rep.failures()


def test_heisenberg_killing_form_vanishes():
    assert dilie.killing_form(dilie.load_lie("heisenberg3")) == [[0] * 3] * 3


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_abelian_data_has_no_defects(n):
    L = dilie.LieAlgebraData(("a", "b"), {}, "abelian")
    space = dilie.GradedSpace((("a", 0), ("b", 0)))
    D = dilie.DiLieData(space, dilie.lie_bracket_map(L, space), MultiMap.zero(space, 1, 2, n), n)
    assert dilie.dilie_relations_check(D).ok


def test_point_tensor_recovers_killing_data():
    G = dilie.cobracket_from_killing(dilie.load_lie("sl2"))
    D, rep = dilie.tensor_action(frobalg.load_algebra("pt"), dilie.load_lie("sl2"), resolve=False)
    assert rep.ok
    assert D.bracket.entries == G.bracket.entries
    assert D.cobracket.entries == G.cobracket.entries


@pytest.mark.parametrize("text, error", [
    ("names a b c\nbracket a b c 1\nbracket b c b 1\n", InvariantError),
    ("names a b\nbracket a a b 1\n", InvariantError),
    ("bracket a b c 1\n", InputError),
    ("names a b\nbracket a b z 1\n", InputError),
])
def test_parse_lie_rejects(text, error):
    with pytest.raises(error):
        dilie.parse_lie(text)


@pytest.mark.parametrize("alg, lie", [("s2", "sl2"), ("t2", "so3"), ("cp2", "sl2")])
def test_tensor_action(alg, lie):
    D, rep = dilie.tensor_action(frobalg.load_algebra(alg), dilie.load_lie(lie))
    assert rep.ok
    assert rep.info["resolution_all_filled"] and rep.info["resolution_nonzero_fillers"] == 0


def test_tensor_action_needs_even_degree():
    with pytest.raises(InputError):
        dilie.tensor_action(frobalg.load_algebra("s3"), dilie.load_lie("sl2"))


@pytest.mark.parametrize("j, k, dim", [(1, 1, 1), (2, 1, 1), (1, 2, 1), (3, 1, 2), (1, 3, 2), (4, 1, 6)])
@pytest.mark.parametrize("n", [0, 1, 2])
def test_tree_parts_match_lie(j, k, dim, n):
    c = dilie.dilie_component(j, k, n)
    assert c.dim == dim
    assert c.degree == (k - 1) * n


def test_bracket_character():
    c = dilie.dilie_component(2, 1, 0)
    assert c.character[((1, 0), (0,))] == -1
    d = dilie.dilie_component(1, 2, 1)
    # a degree-one cobracket is symmetric once the Koszul sign is included
    assert d.character[((0,), (1, 0))] == 1


def test_hadamard_and_bound():
    assert dilie.hadamard_check(4).ok
    with pytest.raises(ResourceError):
        dilie.hadamard_check(dilie.MAX_HADAMARD_ARITY + 1)
