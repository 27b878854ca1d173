from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from properad import frobalg
from properad.endprop import sym_act
from properad.exactalg import InputError
from properad.frobalg import StructureError

EULER = {"pt": 1, "s2": 2, "s3": 0, "t2": 0, "cp2": 3}


@pytest.mark.parametrize("name", frobalg.SHIPPED_ALGEBRAS)
def test_shipped_algebras(name):
    A = frobalg.load_algebra(name)
    assert frobalg.check_pairing_duality(A)
    assert frobalg.euler_check(A) == EULER[name]


@pytest.mark.parametrize("name", ["s2", "t2", "cp2"])
def test_every_realizing_graph_gives_the_same_operation(name):
    A = frobalg.load_algebra(name)
    images = {n: A.generator_map(n) for n in ("mu", "delta")}
    for j, k, g in [(2, 1, 0), (1, 2, 0), (2, 2, 0), (1, 1, 1), (3, 1, 0), (2, 1, 1)]:
        op = frobalg.genus_operation(A, j, k, g)
        graphs = frobalg.realizing_graphs(j, k, g, max_vertices=4)
        assert graphs
        for graph in graphs:
            assert frobalg.evaluate_generator_graph(graph, images, A.space) == op


@pytest.mark.parametrize("name", ["s2", "t2", "s3"])
def test_genus_operations_are_graded_symmetric(name):
    A = frobalg.load_algebra(name)
    op = frobalg.genus_operation(A, 2, 2, 1)
    # inputs commute; outputs pick up (-1)^n from the degree-n coproduct
    assert sym_act((1, 0), op, (0, 1)) == op
    assert sym_act((0, 1), op, (1, 0)) == op.scale((-1) ** A.n)


@pytest.mark.parametrize("name", frobalg.SHIPPED_ALGEBRAS)
def test_double_dual(name):
    A = frobalg.load_algebra(name)
    DD = frobalg.dualize(frobalg.dualize(A))
    assert DD.mult == A.mult
    assert DD.pairing == A.pairing
    assert frobalg.euler_check(frobalg.dualize(A)) == EULER[name]


@settings(max_examples=20, deadline=None)
@given(st.fractions(min_value=-5, max_value=5).filter(bool), st.sampled_from(["s2", "t2", "cp2"]))
def test_rescaled_pairing_keeps_euler_number(c, name):
    A = frobalg.load_algebra(name)
    B = frobalg.FrobeniusAlgebraData(A.space, A.n, A.mult, A.unit,
                                     {k: v * c for k, v in A.pairing.items()}, name=name)
    inv = 1 / Fraction(c)
    assert frobalg.genus_operation(B, 1, 1, 1) == frobalg.genus_operation(A, 1, 1, 1).scale(inv)
    assert frobalg.euler_check(B) == frobalg.euler_check(A)
    assert frobalg.coproduct_from_pairing(B) == A.coproduct.scale(inv)


BAD = {
    "degenerate": "n 2\nbasis 1:0 v:2\nunit 1\nmult 1 1 1 1\nmult 1 v v 1\nmult v 1 v 1\n",
    "noncommutative": "n 2\nbasis 1:0 x:1 y:1 t:2\nunit 1\nmult 1 1 1 1\nmult 1 x x 1\nmult x 1 x 1\n"
                      "mult 1 y y 1\nmult y 1 y 1\nmult 1 t t 1\nmult t 1 t 1\nmult x y t 1\n"
                      "mult y x t 1\npair 1 t 1\npair t 1 1\npair x y 1\npair y x -1\n",
    "pairing degree": "n 2\nbasis 1:0 v:2\nunit 1\nmult 1 1 1 1\nmult 1 v v 1\nmult v 1 v 1\n"
                      "pair 1 1 1\npair v v 1\n",
}


@pytest.mark.parametrize("kind", BAD)
def test_invalid_algebras(kind):
    with pytest.raises(StructureError):
        frobalg.parse_algebra(BAD[kind])


def test_parse_errors():
    with pytest.raises(InputError):
        frobalg.parse_algebra("n 2\nbasis 1:0\n")
    with pytest.raises(InputError):
        frobalg.parse_algebra("n 2\nbasis 1:0\nunit 1\nfrob 1\n")
    with pytest.raises(InputError):
        frobalg.parse_algebra("n 2\nbasis 1:0\nunit z\n")
