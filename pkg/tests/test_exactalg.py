from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from properad import _kernels
from properad.exactalg import (ChainComplex, GradedSpace, InputError, InvariantError, LinearMap,
                               homology, kernel_basis, koszul_sign, koszul_tensor, permutation_sign,
                               rank, solve_linear)

small = st.integers(min_value=-3, max_value=3)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def _map(rows):
    src = GradedSpace.from_degrees([0] * len(rows[0]), "s")
    tgt = GradedSpace.from_degrees([0] * len(rows), "t")
    return LinearMap.from_dense(src, tgt, 0, rows)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_agrees_with_modular_rank(rows):
    m = _map(rows)
    assert rank(m) == _kernels.rank_mod_p(np.array(rows))


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_kernel_vectors_are_killed(rows):
    m = _map(rows)
    ker = kernel_basis(m)
    assert len(ker) == m.source.dim - rank(m)
    for v in ker:
        assert all(x == 0 for x in m.apply(v))


@settings(max_examples=60, deadline=None)
@given(matrices(), st.lists(small, min_size=5, max_size=5))
def test_solve_linear_on_images(rows, x):
    m = _map(rows)
    x = x[:m.source.dim]
    b = m.apply(x)
    sol = solve_linear(m, b)
    assert sol is not None
    assert m.apply(sol) == b


def test_solve_linear_reports_inconsistency():
    m = _map([[1, 1], [2, 2]])
    assert solve_linear(m, [1, 0]) is None


@settings(max_examples=100, deadline=None)
@given(st.permutations(list(range(5))), st.permutations(list(range(5))))
def test_permutation_sign_is_multiplicative(p, q):
    composed = [p[q[i]] for i in range(5)]
    assert permutation_sign(composed) == permutation_sign(p) * permutation_sign(q)


def test_koszul_sign_counts_odd_crossings():
    assert koszul_sign([1, 1], [1, 0]) == -1
    assert koszul_sign([1, 2], [1, 0]) == 1
    assert koszul_sign([1, 0, 1], [2, 1, 0]) == -1


def test_koszul_tensor_sign():
    sp = GradedSpace((("x", 1), ("y", 2)))
    f = LinearMap(sp, sp, 1, {(1, 0): Fraction(1)})
    # (f (x) f)(x (x) x) = (-1)^{|f||x|} f(x) (x) f(x)
    ff = koszul_tensor(f, f)
    assert ff.entries == {(3, 0): -1}


def test_space_rejects_duplicates():
    with pytest.raises(InputError):
        GradedSpace((("a", 0), ("a", 1)))


def test_complex_checks_square():
    sp = GradedSpace.from_degrees([0, 1, 2])
    d = LinearMap(sp, sp, 1, {(1, 0): Fraction(1), (2, 1): Fraction(1)})
    with pytest.raises(InvariantError):
        ChainComplex(sp, d)


def test_homology_of_small_complex():
    # degrees 0 -> 1 -> 1 (two generators in degree 1), one is a boundary
    sp = GradedSpace((("a", 0), ("b", 1), ("c", 1)))
    d = LinearMap(sp, sp, 1, {(1, 0): Fraction(1)})
    cx = ChainComplex(sp, d)
    assert homology(cx, 0)[0] == 0
    betti, reps = homology(cx, 1)
    assert betti == 1
    assert len(reps) == 1
