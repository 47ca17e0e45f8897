from collections import Counter

import pytest

from shapoform.rootsys import build_root_system
from shapoform.scalars import ONE, ZERO, AffineExponent, q_int
from shapoform.uqmodules import (
    TruncationError, change_basis, dual_verma_truncated, finite_dim_module, kostant_defects,
    relation_defects, tensor_module, verma_truncated,
)

lam1 = AffineExponent(0, (1,))


def test_a1_verma_basis_and_e_action(A1):
    M = verma_truncated(A1, 2)
    assert M.words == [(), (0,), (0, 0)]
    assert M.gamma == [(0,), (-1,), (-2,)]
    assert M.e_action[0].column(2) == {1: q_int(lam1) + q_int(lam1 - 2)}
    assert M.e_action[0].column(0) == {}


def test_a1_dual_verma(A1):
    Ms = dual_verma_truncated(A1, 2)
    assert Ms.gamma == [(0,), (1,), (2,)]
    assert Ms.f_action[0].column(1) == {0: q_int(lam1)}
    assert Ms.f_action[0].column(0) == {}


def test_level_zero_is_one_dimensional(A2):
    M = verma_truncated(A2, 0)
    assert M.dim == 1
    assert not M.e_action[0].column(0) and not M.f_action[1].column(0)


def test_a2_mixed_weight_space(A2):
    M = verma_truncated(A2, 2)
    assert len(M.weight_spaces()[(-1, -1)]) == 2


@pytest.mark.parametrize("name,cutoff", [("A1", 6), ("A2", 4), ("B2", 4), ("G2", 3), ("A3", 3)])
def test_dimensions_match_kostant_counts(name, cutoff):
    rs = build_root_system(name)
    assert kostant_defects(verma_truncated(rs, cutoff)) == []
    assert kostant_defects(dual_verma_truncated(rs, cutoff)) == []


@pytest.mark.parametrize("name,cutoff", [("A1", 5), ("A2", 4), ("B2", 4), ("G2", 3)])
def test_commutation_and_serre_relations(name, cutoff):
    rs = build_root_system(name)
    assert relation_defects(verma_truncated(rs, cutoff)) == []
    assert relation_defects(dual_verma_truncated(rs, cutoff)) == []


def test_dual_dimensions_mirror_verma(B2):
    M, Ms = verma_truncated(B2, 4), dual_verma_truncated(B2, 4)
    assert Counter(M.level) == Counter(Ms.level)


def test_a1_natural_module(A1):
    V = finite_dim_module(A1, (1,))
    assert V.dim == 2
    assert V.e_action[0].to_dense() == [[ZERO, ONE], [ZERO, ZERO]]
    assert V.f_action[0].to_dense() == [[ZERO, ZERO], [ONE, ZERO]]


def test_a2_fundamental_weights(A2):
    V = finite_dim_module(A2, (1, 0))
    assert V.gamma == [(0, 0), (-1, 0), (-1, -1)]


def test_trivial_module(A1):
    V = finite_dim_module(A1, (0,))
    assert V.dim == 1


@pytest.mark.parametrize("name,labels,dim", [
    ("A1", (4,), 5), ("A2", (0, 1), 3), ("A2", (1, 1), 8), ("B2", (1, 0), 5), ("B2", (0, 1), 4),
    ("G2", (0, 1), 7), ("A3", (0, 1, 0), 6),
])
def test_finite_modules(name, labels, dim):
    rs = build_root_system(name)
    V = finite_dim_module(rs, labels)
    assert V.dim == dim
    assert relation_defects(V) == []
    # nilpotent actions
    for a in range(rs.rank):
        for gen in ("e", "f"):
            for k in range(V.dim):
                v = {k: ONE}
                for _ in range(V.dim):
                    v = V.apply(gen, a, v)
                assert v == {}
    # Weyl symmetry of the weight multiset under every simple reflection
    hw = V.info["highest_pairings"]
    mult = Counter(V.gamma)
    for i in range(rs.rank):
        for g, m in mult.items():
            s = hw[i] + rs.form(g, rs.simple_root(i))  # (weight, alpha_i)
            n = 2 * s // rs.norm2(rs.simple_root(i))
            image = tuple(x - (n if j == i else 0) for j, x in enumerate(g))
            assert mult[image] == m


def test_non_dominant_weight_rejected(A2):
    with pytest.raises(ValueError):
        finite_dim_module(A2, (-1, 0))


def test_tensor_relations(A1, A2):
    for rs, labels in ((A1, (1,)), (A2, (1, 0))):
        V = finite_dim_module(rs, labels)
        M = verma_truncated(rs, 3)
        T = tensor_module(V, M)
        assert T.dim == V.dim * M.dim
        assert relation_defects(T) == []


def test_tensor_on_highest_vector(A1):
    V = finite_dim_module(A1, (1,))
    M = verma_truncated(A1, 2)
    T = tensor_module(V, M)
    # e (v_1 (x) 1) = (e v_1) (x) q^{(lam, a)} 1
    assert T.apply("e", 0, {1 * M.dim: ONE}) == {0: M.cartan_scalar(0, (1,))}


def test_both_tagged_factors_rejected(A1):
    with pytest.raises(ValueError):
        tensor_module(dual_verma_truncated(A1, 2), verma_truncated(A1, 2))


def test_truncation_is_flagged(A1):
    M = verma_truncated(A1, 2)
    with pytest.raises(TruncationError):
        M.apply("f", 0, {2: ONE}, strict=True)
    assert M.apply("f", 0, {1: ONE}, strict=True) == {2: ONE}


def test_change_basis_preserves_relations(A2):
    M = verma_truncated(A2, 3)
    idx = M.weight_spaces()[(-1, -1)]
    T = {k: {k: ONE} for k in range(M.dim)}
    T[idx[0]] = {idx[0]: ONE, idx[1]: q_int(2)}
    assert relation_defects(change_basis(M, T)) == []
