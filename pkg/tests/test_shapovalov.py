from hypothesis import given, strategies as st

from shapoform.linalg import det, is_identity, matmul
from shapoform.scalars import ONE, ZERO, AffineExponent, ScalarRational, q_int, z
from shapoform.shapovalov import (
    UqElement, antipode, antipode_on_word, inverse_blocks, invariance_defect, pairing, pairing_block,
)
from shapoform.uqmodules import dual_verma_truncated, verma_truncated


def test_antipode_examples(A2):
    e1 = UqElement.letter(A2, "e", 0)
    e2 = UqElement.letter(A2, "e", 1)
    assert antipode_on_word(A2, [("e", 0)]) == -(e1 * UqElement.cartan(A2, (-1, 0)))
    assert antipode(e1 * e2) == antipode(e2) * antipode(e1)
    assert antipode(UqElement.one(A2)) == UqElement.one(A2)


def test_antipode_of_f(A1):
    f = UqElement.letter(A1, "f", 0)
    assert antipode(f) == -(UqElement.cartan(A1, (1,)) * f)


def test_pairing_values(A1):
    M, Ms = verma_truncated(A1, 3), dual_verma_truncated(A1, 3)
    assert pairing(M, Ms, {0: ONE}, {0: ONE}) == ONE
    zl = q_int(AffineExponent(0, (1,)))
    assert pairing(M, Ms, {1: ONE}, {1: ONE}) == -z(1).inverse() * zl
    assert pairing(M, Ms, {1: ONE}, {2: ONE}) == ZERO


def test_blocks(A1, A2):
    M, Ms = verma_truncated(A1, 2), dual_verma_truncated(A1, 2)
    assert pairing_block(M, Ms, (0,)).entries == [[ONE]]
    assert len(pairing_block(M, Ms, (1,)).entries) == 1
    M2, Ms2 = verma_truncated(A2, 2), dual_verma_truncated(A2, 2)
    blk = pairing_block(M2, Ms2, (1, 1))
    assert len(blk.entries) == 2
    assert det(blk.entries) != ZERO


def test_inverse_blocks(A2):
    M, Ms = verma_truncated(A2, 3), dual_verma_truncated(A2, 3)
    for nu, (block, inv) in inverse_blocks(M, Ms).items():
        assert is_identity(matmul(block.entries, inv))


def test_threaded_inverse_matches(A2):
    M, Ms = verma_truncated(A2, 3), dual_verma_truncated(A2, 3)
    assert {k: v[1] for k, v in inverse_blocks(M, Ms, workers=3).items()} == \
        {k: v[1] for k, v in inverse_blocks(M, Ms).items()}


@given(st.data())
def test_invariance(A2, data):
    M, Ms = verma_truncated(A2, 4), dual_verma_truncated(A2, 4)
    gen = data.draw(st.sampled_from(["e", "f", "K", "Kinv"]))
    a = data.draw(st.integers(0, 1))
    if gen in ("e", "f"):
        u = UqElement.letter(A2, gen, a)
    else:
        s = 1 if gen == "K" else -1
        u = UqElement.cartan(A2, tuple(s if i == a else 0 for i in range(2)))
    coeff = st.integers(-2, 2).map(ScalarRational.const)
    # vectors at levels 2 and 3 keep every application inside the truncation
    low = [k for k in range(M.dim) if M.level[k] in (1, 2)]
    x = {k: data.draw(coeff) for k in data.draw(st.lists(st.sampled_from(low), min_size=1, max_size=3))}
    y = {k: data.draw(coeff) for k in data.draw(st.lists(st.sampled_from(low), min_size=1, max_size=3))}
    x = {k: c for k, c in x.items() if c}
    y = {k: c for k, c in y.items() if c}
    assert invariance_defect(M, Ms, u, x, y) == ZERO
