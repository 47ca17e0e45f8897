import pytest

from shapoform.rootsys import build_root_system
from shapoform.routesum import fhat_matrix
from shapoform.rmatrix import f_tensor, quasi_r
from shapoform.scalars import ONE, AffineExponent, ScalarRational, q_int, z
from shapoform.singular import (
    Specializer, denominator_audit, genericity_polynomial, inverse_entry_values, numeric_singular_check,
    random_points, singular_vector, singular_vectors, verify_inverse,
)
from shapoform.uqmodules import finite_dim_module, tensor_module, verma_truncated


def test_top_node_vector_is_pure(A2):
    V = finite_dim_module(A2, (1, 0))
    M = verma_truncated(A2, 2)
    fh = fhat_matrix(V, f_tensor(quasi_r(V, M)))
    rep = singular_vector(V, fh, 0)
    assert rep.vector == {0: ONE}
    assert rep.annihilated


def test_a1_bottom_vector(A1):
    V = finite_dim_module(A1, (1,))
    M = verma_truncated(A1, 2)
    fh = fhat_matrix(V, f_tensor(quasi_r(V, M)))
    rep = singular_vector(V, fh, 1)
    assert rep.vector[1 * M.dim + 0] == ONE
    assert rep.vector[0 * M.dim + 1] == -z(1) / q_int(AffineExponent(0, (1,)))
    assert rep.annihilated


@pytest.mark.parametrize("name,labels,cutoff", [("A1", (1,), 2), ("A2", (1, 0), 3), ("A2", (0, 1), 3),
                                                  ("B2", (1, 0), 4)])
def test_annihilated_and_independent(name, labels, cutoff):
    rs = build_root_system(name)
    V = finite_dim_module(rs, labels)
    reps, rank = singular_vectors(V, verma_truncated(rs, cutoff))
    assert all(r.annihilated for r in reps)
    assert rank == V.dim


def test_small_inverse_report(A2):
    rep = verify_inverse(A2, 3)
    assert rep.ok
    assert all(b.product_is_identity for b in rep.blocks)
    assert rep.series_terms == rep.longest_path + 1


def test_audit(A1):
    rep = verify_inverse(A1, 4)
    audit = denominator_audit(inverse_entry_values(rep), A1, 4)
    assert audit.ok
    assert ((1,), 1) in audit.inventory()


def test_audit_flags_foreign_factor(A1):
    bad = ONE / (z(1) - 3)
    assert not denominator_audit([bad], A1, 3).ok
    assert denominator_audit([ONE, ScalarRational.const(5)], A1, 3).ok


def test_genericity_polynomial_a1(A1):
    # q^{2(lam + rho, a) - 2} - 1 = z^2 - 1 for m = 1
    p = genericity_polynomial(A1, (1,), 1)
    assert ScalarRational(p) == z(1) ** 2 - 1


def test_random_points_are_seeded(A2):
    assert random_points(A2, 5, 7, 3) == random_points(A2, 5, 7, 3)
    assert len(random_points(A2, 5, 7, 3)) == 5


def test_numeric_singular(A2):
    V = finite_dim_module(A2, (1, 0))
    M = verma_truncated(A2, 3)
    reps, _ = singular_vectors(V, M)
    T = tensor_module(V, M)
    for q0, z0 in random_points(A2, 3, 1, 3):
        assert numeric_singular_check(reps, T, Specializer(q0, z0))
