import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from properad import freeprop as fp
from properad.exactalg import InputError
from properad.graphcore import ResourceError


def _count(j, k, g, max_weight=3):
    return len(fp.cobar_basis(j, k, max_weight, g, 2))


# hand counts: corolla, then two-vertex graphs times the two block choices
@pytest.mark.parametrize("j, k, g, expected", [
    (2, 1, 0, 1),    # no two-vertex tree avoids the excluded (1,1,0) label
    (3, 1, 0, 7),    # 1 + 3 choices of the inputs on the upper vertex, times 2
    (1, 1, 1, 3),    # 1 + the delta-over-mu pair, times 2
    (2, 2, 0, 11),   # 1 + 5 one-edge trees, times 2
    (1, 1, 0, 0),
])
def test_basis_counts(j, k, g, expected):
    assert _count(j, k, g) == expected


POOL = [x for g in (0, 1) for x in fp.cobar_basis(2, 2, 3, g, 2)] + fp.cobar_basis(3, 1, 3, 0, 2)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(POOL))
def test_differential_raises_degree_and_keeps_genus(x):
    for y in fp.total_differential(x):
        assert y.degree(2) == x.degree(2) + 1
        assert y.genus() == x.genus()
        assert y.arity == x.arity
    for y in fp.bar_differential(x):
        assert y.weight == x.weight - 1
    for y in fp.cobar_differential(x):
        assert y.weight == x.weight and y.outer_weight == x.outer_weight + 1


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(POOL), st.data())
def test_differential_is_equivariant(x, data):
    j, k = x.arity
    sigma = data.draw(st.permutations(list(range(j))))
    tau = data.draw(st.permutations(list(range(k))))
    moved = fp.act_element(fp.as_element(x), sigma, tau)
    assert fp.total_differential(moved) == fp.act_element(fp.total_differential(x), sigma, tau)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(POOL))
def test_squares_vanish(x):
    assert not fp.bar_differential(fp.bar_differential(x))
    assert not fp.cobar_differential(fp.cobar_differential(x))
    assert not fp.total_differential(fp.total_differential(x))


def test_odd_automorphism_kills_element():
    # v0 splits into two identical handles that merge again at v3
    flat = fp.BarGraph(((1, 2, 0), (1, 1, 1), (1, 1, 1), (2, 1, 0)),
                       ((0, 1, 1), (0, 2, 1), (1, 3, 1), (2, 3, 1)), (0,), (3,))
    x = fp.CobarGraph(flat, ((0, 1, 2, 3),))
    assert fp.automorphism_sign_conflict(x)
    assert fp.as_element(x).is_zero()


def test_truncated_complex():
    t = fp.truncated_complex(2, 1, 3, max_genus=1)
    assert len(t.basis) == 34
    assert t.square_is_zero()
    assert t.complex.differential.compose(t.complex.differential).is_zero()


def test_bounds_and_parity():
    with pytest.raises(ResourceError):
        fp.truncated_complex(4, 4, 3)
    with pytest.raises(InputError):
        fp.truncated_complex(2, 1, 2, n=3)


def test_audit_genus_two_small():
    audit = fp.square_audit(3, 3, 2, 2)
    assert audit.ok and audit.checked > 0


def _independent_count(j, k, genus, max_weight):
    """Count through graphcore's port-level enumeration.

    Port orders are forgotten (each vertex label spans a trivial
    representation for even n), every connected graph gets one block
    choice per connected set partition with an acyclic quotient, and
    graphs with a leg-fixing odd vertex symmetry drop out.
    """
    from properad import graphcore as gc
    # with at most two edges no vertex needs more than j+1 inputs or k+1 outputs
    labels = {(a, b, g): (a, b) for a in range(1, j + 2) for b in range(1, k + 2)
              for g in range(genus + 1) if (a, b, g) != (1, 1, 0)}
    seen = {}
    for dg in gc.enumerate_graphs(j, k, max_weight, labels):
        if gc.loop_genus(dg) + sum(d[2] for d, _, _ in dg.vertices) != genus:
            continue
        x = fp.BarGraph.from_directed_graph(dg)
        for y in fp._block_partitions(x):
            _, canon = fp.canonicalize(y)
            if canon is not None:
                seen[canon] = True
    return len(seen)


@pytest.mark.parametrize("g", [0, 1])
def test_basis_count_against_graph_enumeration(g):
    assert _independent_count(2, 1, g, 2) == _count(2, 1, g, max_weight=2)
