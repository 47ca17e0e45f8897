import pytest

from shapoform.abrr import SeriesDidNotTerminate, abrr_identity_check, fk_series, perturbed
from shapoform.rmatrix import f_tensor, quasi_r
from shapoform.routesum import fhat_matrix, hasse
from shapoform.scalars import ONE, AffineExponent, q_int, z
from shapoform.uqmodules import dual_verma_truncated, finite_dim_module, verma_truncated


def test_a1_natural_series(A1):
    V = finite_dim_module(A1, (1,))
    F = f_tensor(quasi_r(V, verma_truncated(A1, 2)))
    s = fk_series(V, F)
    assert s.terms[0] == {(0, 0): {0: ONE}, (1, 1): {0: ONE}}
    assert s.nonzero_terms == 2
    assert s.terms[1] == {(0, 1): {1: -z(1) / q_int(AffineExponent(0, (1,)))}}


def test_trivial_module(A2):
    V = finite_dim_module(A2, (0, 0))
    s = fk_series(V, f_tensor(quasi_r(V, verma_truncated(A2, 1))))
    assert s.fhat.entries == {}
    assert s.nonzero_terms == 1


@pytest.mark.parametrize("labels", [(1, 0), (0, 1), (1, 1)])
def test_series_matches_routes(A2, labels):
    V = finite_dim_module(A2, labels)
    F = f_tensor(quasi_r(V, verma_truncated(A2, 4)))
    s = fk_series(V, F)
    assert s.fhat == fhat_matrix(V, F)
    assert s.nonzero_terms == 1 + hasse(V, F).longest_path_length()


def test_series_cap(A2):
    V = finite_dim_module(A2, (1, 1))
    F = f_tensor(quasi_r(V, verma_truncated(A2, 4)))
    with pytest.raises(SeriesDidNotTerminate):
        fk_series(V, F, k_max=1)


def test_identity_and_uniqueness(A1):
    M = verma_truncated(A1, 4)
    for V in (finite_dim_module(A1, (3,)), dual_verma_truncated(A1, 4)):
        R = quasi_r(V, M)
        fh = fhat_matrix(V, f_tensor(R))
        rep = abrr_identity_check(R, fh)
        assert rep.ok and rep.checked > 0
        for (i, j) in list(fh.entries)[:3]:
            assert not abrr_identity_check(R, perturbed(fh, i, j)).ok


def test_perturbing_a_zero_entry(A2):
    V = finite_dim_module(A2, (1, 0))
    R = quasi_r(V, verma_truncated(A2, 3))
    fh = fhat_matrix(V, f_tensor(R))
    assert not abrr_identity_check(R, perturbed(fh, 0, 2, ONE)).ok
    with pytest.raises(ValueError):
        perturbed(fh, 2, 0)
