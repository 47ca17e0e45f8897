import pytest
from hypothesis import given, strategies as st

from shapoform.linalg import (
    SingularMatrixError, SparseMatrix, det, identity, inverse, is_identity, matmul, rank, rref,
    sparse_rank, vadd, vscale, vsub,
)
from shapoform.scalars import ONE, Q, ZERO, ScalarRational, z

z1 = z(1)


def test_inverse_symbolic_2x2():
    a = [[z1, Q], [ONE, z1 + 1]]
    inv = inverse(a)
    assert is_identity(matmul(a, inv))
    assert det(a) == z1 * (z1 + 1) - Q


def test_singular_matrix():
    a = [[z1, Q], [z1 * z1, Q * z1]]
    assert det(a) == ZERO
    assert rank(a) == 1
    with pytest.raises(SingularMatrixError):
        inverse(a)


def test_rref_pivots():
    rows, piv = rref([[ONE, Q, ZERO], [Q, Q * Q, ONE]])
    assert piv == [0, 2]
    assert rows[0] == [ONE, Q, ZERO]


def test_sparse_matrix_ops():
    m = SparseMatrix.from_dense([[ONE, Q], [ZERO, z1]])
    assert m.apply({1: ONE}) == {0: Q, 1: z1}
    assert (m @ SparseMatrix.identity(2)) == m
    assert (m - m).is_zero()
    assert m.to_dense() == [[ONE, Q], [ZERO, z1]]


def test_vectors():
    a, b = {0: ONE, 1: Q}, {1: Q}
    assert vsub(a, b) == {0: ONE}
    assert vadd(a, b) == {0: ONE, 1: Q + Q}
    assert vscale(ZERO, a) == {}
    assert sparse_rank([a, b, vadd(a, b)]) == 2


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3),
       st.integers(-2, 2))
def test_inverse_property(rows, k):
    a = [[ScalarRational.const(x) + (Q ** k if i == j else ZERO) for j, x in enumerate(r)]
         for i, r in enumerate(rows)]
    if not det(a):
        return
    assert is_identity(matmul(a, inverse(a)))
    assert is_identity(matmul(inverse(a), a))
    assert det(a) * det(inverse(a)) == ONE


def test_identity_helper():
    assert is_identity(identity(3))
