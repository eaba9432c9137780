import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from orbiconf.linalg import (SparseMatrix, clear_denominators, dense_rank, kernel_basis, rank_rational,
                             smith_normal_form)


def matrices(max_rows=6, max_cols=6, lo=-4, hi=4):
    return st.integers(0, max_rows).flatmap(
        lambda r: st.integers(0, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)
            .map(lambda rows: (rows, c))))


def _sympy_factors(rows, cols):
    if not rows or not cols:
        return ()
    D = sympy_snf(sympy.Matrix(rows), domain=sympy.ZZ)
    return tuple(sorted(abs(int(D[i, i])) for i in range(min(D.shape)) if D[i, i] != 0))


def _dense_mul(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def _det(m):
    return sympy.Matrix(m).det() if m else 1


def test_basic_construction():
    A = SparseMatrix.from_dense([[1, 0, 2], [0, 0, 3]])
    assert A.shape == (2, 3)
    assert A.to_dense() == [[1, 0, 2], [0, 0, 3]]
    assert A.transpose().to_dense() == [[1, 0], [0, 0], [2, 3]]
    assert (A @ A.transpose()).to_dense() == [[5, 6], [6, 9]]


def test_row_index_out_of_range():
    with pytest.raises(ValueError):
        SparseMatrix(2, 1, [{5: 1}])


def test_snf_small_known():
    assert smith_normal_form(SparseMatrix.from_dense([[2, 4], [6, 8]])).factors == (2, 4)
    assert smith_normal_form(SparseMatrix.from_dense([[2, 0], [0, 3]])).factors == (1, 6)
    assert smith_normal_form(SparseMatrix.zero(3, 2)).rank == 0


def test_snf_rejects_fractions():
    with pytest.raises(ValueError):
        smith_normal_form(SparseMatrix.from_dense([[Fraction(1, 2)]]))


def test_snf_against_sympy_seeded():
    rng = random.Random(7)
    for _ in range(150):
        r, c = rng.randint(1, 7), rng.randint(1, 7)
        rows = [[rng.choice([0, 0, 0, 1, -1, 2, -3, 4]) for _ in range(c)] for _ in range(r)]
        snf = smith_normal_form(SparseMatrix.from_dense(rows, c))
        assert tuple(sorted(snf.factors)) == _sympy_factors(rows, c)
        assert rank_rational(SparseMatrix.from_dense(rows, c)) == sympy.Matrix(rows).rank()


@given(matrices())
def test_snf_rank_matches_rational_rank(data):
    rows, c = data
    A = SparseMatrix.from_dense(rows, c)
    assert smith_normal_form(A).rank == rank_rational(A)


@given(matrices())
def test_snf_divisibility_chain(data):
    rows, c = data
    f = smith_normal_form(SparseMatrix.from_dense(rows, c)).factors
    assert all(x > 0 for x in f)
    assert all(f[i + 1] % f[i] == 0 for i in range(len(f) - 1))


@given(matrices(max_rows=5, max_cols=5))
def test_snf_transforms_are_unimodular(data):
    rows, c = data
    A = SparseMatrix.from_dense(rows, c)
    snf = smith_normal_form(A, transforms=True)
    L, R = [list(r) for r in snf.left], [list(r) for r in snf.right]
    assert abs(_det(L)) == 1 and abs(_det(R)) == 1
    if rows and c:
        D = _dense_mul(_dense_mul(L, rows), R)
        diag = [D[i][i] for i in range(min(len(rows), c)) if D[i][i]]
        assert all(D[i][j] == 0 for i in range(len(D)) for j in range(c) if i != j)
        assert tuple(sorted(abs(x) for x in diag)) == tuple(sorted(smith_normal_form(A).factors))


@given(matrices())
def test_kernel_basis_is_a_kernel(data):
    rows, c = data
    A = SparseMatrix.from_dense(rows, c)
    ker = kernel_basis(A)
    assert len(ker) == c - rank_rational(A)
    for vec in ker:
        for row in rows:
            assert sum(row[j] * v for j, v in vec.items()) == 0
    # independence
    dense = [[vec.get(j, 0) for j in range(c)] for vec in ker]
    assert dense_rank(dense) == len(ker)


def test_clear_denominators():
    assert clear_denominators({0: Fraction(1, 2), 3: Fraction(-1, 3)}) == {0: 3, 3: -2}
    assert clear_denominators({1: 4, 2: 6}) == {1: 2, 2: 3}


def test_rank_with_fractions():
    assert dense_rank([[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), 1]]) == 1
