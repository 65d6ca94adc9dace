import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import invariant_factors

from toricgwpt.lattice import (IntegerMatrix, hermite_normal_form, integer_kernel, primitive_part,
                               random_unimodular, smith_normal_form)

small_ints = st.integers(-9, 9)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r)
            .map(lambda rows: IntegerMatrix(rows, c))))


def check_smith(M: IntegerMatrix):
    U, D, V = smith_normal_form(M)
    assert U @ M @ V == D
    assert abs(U.det()) == 1 and abs(V.det()) == 1
    diag = D.diagonal()
    for i in range(D.rows):
        for j in range(D.cols):
            if i != j:
                assert D[i, j] == 0
    assert all(d >= 0 for d in diag)
    nonzero = [d for d in diag if d]
    assert diag[:len(nonzero)] == tuple(nonzero)
    for a, b in zip(nonzero, nonzero[1:]):
        assert b % a == 0


def test_smith_reconstruction_on_seeded_matrices():
    rng = random.Random(20260416)
    for _ in range(1000):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        M = IntegerMatrix([[rng.randint(-12, 12) for _ in range(c)] for _ in range(r)], c)
        check_smith(M)


@given(matrices())
@settings(max_examples=150)
def test_invariant_factors_match_sympy(M):
    ours = smith_normal_form(M).invariant_factors
    ref = tuple(int(x) for x in invariant_factors(sympy.Matrix(M.entries), domain=sympy.ZZ) if x)
    assert ours == tuple(abs(x) for x in ref)


def test_hand_example():
    assert smith_normal_form(IntegerMatrix([[2, 2], [2, -2]])).D == IntegerMatrix([[2, 0], [0, 4]])
    assert smith_normal_form(IntegerMatrix([[1, 1, 0], [1, -1, 0]])).invariant_factors == (1, 2)


def test_zero_matrix():
    U, D, V = smith_normal_form(IntegerMatrix.zeros(2, 3))
    assert D == IntegerMatrix.zeros(2, 3)


@pytest.mark.parametrize("v,expected", [
    ((2, 4, -6), ((1, 2, -3), 2)),
    ((0, 0, -5), ((0, 0, -1), 5)),
    ((3, 5, 7), ((3, 5, 7), 1)),
])
def test_primitive_part(v, expected):
    assert primitive_part(v) == expected


def test_primitive_part_of_zero():
    with pytest.raises(ValueError):
        primitive_part((0, 0, 0))


@pytest.mark.parametrize("rows,expected", [
    ([[1, 1, 1]], [(1, 0, -1), (0, 1, -1)]),
    ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], []),
    ([[1, 0, 0], [0, 1, 0]], [(0, 0, 1)]),
    ([[2, 4, 6]], [(1, 1, -1), (0, 3, -2)]),
])
def test_kernel_examples(rows, expected):
    assert integer_kernel(IntegerMatrix(rows)) == expected


@given(matrices())
@settings(max_examples=150)
def test_kernel_is_saturated_basis(M):
    K = integer_kernel(M)
    rank = len(smith_normal_form(M).invariant_factors)
    assert len(K) == M.cols - rank
    for k in K:
        assert all(x == 0 for x in M @ k)
        assert primitive_part(k)[1] == 1
    if K:
        # saturation: the kernel basis extends to a basis of Z^n, so its SNF is all ones
        assert smith_normal_form(IntegerMatrix(K, M.cols)).invariant_factors == (1,) * len(K)


@given(matrices())
@settings(max_examples=100)
def test_hnf_is_canonical_under_row_operations(M):
    rng = random.Random(M.rows * 31 + M.cols)
    P = random_unimodular(M.rows, rng) if M.rows > 1 else IntegerMatrix.identity(1)
    assert hermite_normal_form((P @ M).entries, M.cols) == hermite_normal_form(M.entries, M.cols)


def test_random_unimodular():
    rng = random.Random(7)
    for _ in range(50):
        assert abs(random_unimodular(3, rng).det()) == 1


def test_det_and_json():
    M = IntegerMatrix([[2, -1, 0], [1, 3, 4], [0, 5, 1]])
    assert M.det() == int(sympy.Matrix(M.entries).det())
    assert IntegerMatrix.from_json(M.to_json()) == M
    with pytest.raises(ValueError):
        IntegerMatrix([[1, 2], [3]])
