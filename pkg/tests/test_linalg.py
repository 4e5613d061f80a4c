import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from checkergram import (
    BlockEntry,
    BlockMatrix,
    ShapeMismatch,
    Singular,
    invert,
    invert_antidiagonal_pairs,
    kron,
    multiply,
    schur_complement,
    theta_star,
)

from conftest import be, random_block

fracs = st.fractions(min_value=-4, max_value=4, max_denominator=3)


def mat_from(rows):
    return BlockMatrix.from_blocks([[be(x) for x in row] for row in rows])


def test_multiply_identity():
    a = mat_from([[1, 2], [3, 4]])
    eye = BlockMatrix.identity(2, 1)
    assert multiply(eye, a).residual(a) == 0
    assert multiply(a, eye).residual(a) == 0


def test_swap_involution():
    swap = mat_from([[0, 1], [1, 0]])
    assert multiply(swap, swap).residual(BlockMatrix.identity(2, 1)) == 0


@settings(max_examples=25, deadline=None)
@given(st.lists(fracs, min_size=48, max_size=48))
def test_multiply_associative(vals):
    def m(off):
        return BlockMatrix.from_blocks(
            [[be(vals[off + 4 * i + j]) for j in range(4)] for i in range(4)])

    a, b, c = m(0), m(16), m(32)
    lhs = multiply(multiply(a, b), c)
    rhs = multiply(a, multiply(b, c))
    assert lhs.residual(rhs) == 0


def test_multiply_shape_mismatch():
    a = mat_from([[1, 2]])
    with pytest.raises(ShapeMismatch):
        multiply(a, a)


def test_invert_identity():
    eye = BlockMatrix.identity(3, 2)
    assert invert(eye).residual(eye) == 0


def test_invert_antidiagonal_block():
    a, b = Fraction(3), Fraction(-5, 2)
    mat = mat_from([[0, a], [b, 0]])
    inv = invert(mat)
    want = mat_from([[0, 1 / b], [1 / a, 0]])
    assert inv.residual(want) == 0
    assert invert_antidiagonal_pairs(mat).residual(want) == 0


def test_invert_singular():
    with pytest.raises(Singular):
        invert(BlockEntry.zero(2))
    with pytest.raises(Singular):
        invert(mat_from([[1, 1], [1, 1]]))


def test_invert_roundtrip_random():
    rng = random.Random(11)
    found = 0
    while found < 10:
        mat = BlockMatrix.from_blocks(
            [[random_block(rng, 2) for _ in range(3)] for _ in range(3)])
        try:
            inv = invert(mat)
        except Singular:
            continue
        found += 1
        assert multiply(mat, inv).residual(BlockMatrix.identity(3, 2)) == 0


def test_schur_identity():
    assert schur_complement(mat_from([[1, 0], [0, 1]])).block(0, 0).data[0][0] == 1


def test_theta_star_matches_worked_value():
    one, zero = be(1), be(0)
    assert theta_star(one, zero, zero, one).data[0][0] == 1


def test_schur_singular_corner():
    with pytest.raises(Singular):
        schur_complement(mat_from([[0, 1], [1, 1]]))


def test_schur_matches_elimination_step():
    rng = random.Random(5)
    for _ in range(10):
        mat = BlockMatrix.from_blocks(
            [[random_block(rng, 2) for _ in range(3)] for _ in range(3)])
        try:
            sc = schur_complement(mat, 1)
        except Singular:
            continue
        # one step of block Gaussian elimination on the flattened matrix
        v11_inv = mat.block(0, 0).inv()
        for i in range(1, 3):
            for j in range(1, 3):
                direct = mat.block(i, j) - mat.block(i, 0) * v11_inv * mat.block(0, j)
                assert (sc.block(i - 1, j - 1) - direct).is_zero()


def test_kron_with_trivial_identity():
    a = mat_from([[1, 2], [3, 4]])
    eye1 = BlockMatrix.identity(1, 1)
    assert kron(a, eye1).residual(a) == 0


def test_kron_single_block_swap():
    a = be(Fraction(7, 2))
    zero, one = be(0), be(1)
    j2 = BlockMatrix.from_blocks([[zero, one], [one, zero]])
    lifted = kron(BlockMatrix.from_blocks([[a]]), j2)
    want = mat_from([[0, Fraction(7, 2)], [Fraction(7, 2), 0]])
    assert lifted.residual(want) == 0


@settings(max_examples=20, deadline=None)
@given(st.lists(fracs, min_size=8, max_size=8))
def test_kron_mixed_product(vals):
    a = mat_from([[vals[0], vals[1]], [vals[2], vals[3]]])
    b = mat_from([[vals[4], vals[5]], [vals[6], vals[7]]])
    zero, one = be(0), be(1)
    j2 = BlockMatrix.from_blocks([[zero, one], [one, zero]])
    eye2 = BlockMatrix.identity(2, 1)
    lhs = multiply(kron(a, j2), kron(b, j2))
    rhs = kron(multiply(a, b), eye2)
    assert lhs.residual(rhs) == 0


def test_kron_transpose_and_inverse_identities():
    rng = random.Random(3)
    while True:
        a = BlockMatrix.from_blocks([[random_block(rng, 1) for _ in range(2)] for _ in range(2)])
        b = BlockMatrix.from_blocks([[random_block(rng, 1) for _ in range(2)] for _ in range(2)])
        try:
            a_inv, b_inv = invert(a), invert(b)
        except Singular:
            continue
        break
    assert kron(a, b).transpose().residual(kron(a.transpose(), b.transpose())) == 0
    assert invert(kron(a, b)).residual(kron(a_inv, b_inv)) == 0


def test_mixed_mode_rejected():
    with pytest.raises(ShapeMismatch):
        be(1) + be(1.0, mode="float")
