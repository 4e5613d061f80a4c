import random
from fractions import Fraction

import pytest

from checkergram import (
    BlockMatrix,
    SingularPivot,
    build_checkerboard,
    factorize_checkerboard,
    generic_ldu,
    hankel_factorize,
    multiply,
    reconstruct,
    validate_factor_patterns,
)
from checkergram.gram import shifted_even_truncation

from conftest import (
    GAUSSIAN_S,
    be,
    blocks,
    random_block,
    random_checkerboard,
    random_hankel,
)
from oracles import first_singular_level


def scalars(mat):
    return [[mat.block(i, j).data[0][0] for j in range(mat.cols)] for i in range(mat.rows)]


def test_identity_lift_factorization(identity_lift_gram):
    f = factorize_checkerboard(identity_lift_gram)
    eye = BlockMatrix.identity(4, 1)
    assert f.l1.residual(eye) == 0
    assert f.l2.residual(eye) == 0
    assert f.d.residual(identity_lift_gram.matrix) == 0


def test_minimal_two_by_two():
    g = build_checkerboard([(0, 1, be(Fraction(5, 3))), (1, 0, be(-2))], 1, 2)
    f = factorize_checkerboard(g)
    assert f.l1.residual(BlockMatrix.identity(2, 1)) == 0
    assert f.d.residual(g.matrix) == 0


def test_gaussian_values(gaussian_gram):
    f = factorize_checkerboard(gaussian_gram)
    pairs = [(f.d_pair(l)[0].data[0][0], f.d_pair(l)[1].data[0][0]) for l in range(3)]
    assert pairs == [(1, 1), (1, 1), (2, 2)]
    assert f.l1.block(4, 0).data[0][0] == -1
    assert f.l1.block(5, 1).data[0][0] == -1
    # condensed inverse rows: (1,0,0), (0,1,0), (-1,0,1) interleaved over parity
    assert f.l1.block(2, 0).is_zero()
    assert f.l1.block(5, 3).is_zero()


def test_reconstruction_is_exact(gaussian_gram):
    f = factorize_checkerboard(gaussian_gram)
    assert reconstruct(f).residual(gaussian_gram.matrix) == 0


def test_reconstruction_detects_perturbation(gaussian_gram):
    from dataclasses import replace

    f = factorize_checkerboard(gaussian_gram)
    bad_d = f.d.with_block(0, 1, be(7))
    assert reconstruct(replace(f, d=bad_d)).residual(gaussian_gram.matrix) != 0


def test_h_equals_l_times_d(gaussian_gram):
    f = factorize_checkerboard(gaussian_gram)
    assert f.h.residual(multiply(f.l1.invert(), f.d)) == 0


def test_theta_table_consistency(gaussian_gram):
    f = factorize_checkerboard(gaussian_gram)
    m = gaussian_gram.m
    for l in range(m // 2):
        for i in range(2 * l + 1, m, 2):
            assert (f.h.block(i, 2 * l) - f.theta[(i, 2 * l, 2 * l)]).is_zero()
        piv_inv = f.theta[(2 * l + 1, 2 * l, 2 * l)].inv()
        u = f.l2.invert().transpose()
        for c in range(2 * l + 2, m, 2):
            want = piv_inv * f.theta[(2 * l + 1, c, 2 * l)]
            assert (u.block(2 * l, c) - want).is_zero()


def test_factor_patterns_random():
    rng = random.Random(41)
    for n, m in ((1, 6), (2, 4), (1, 10), (3, 4)):
        gram, fact = random_checkerboard(rng, n, m)
        assert validate_factor_patterns(fact) == []
        assert reconstruct(fact).residual(gram.matrix) == 0


def test_generic_ldu_identity():
    eye = BlockMatrix.identity(3, 2)
    f = generic_ldu(eye)
    assert f.l1.residual(eye) == 0
    assert f.l2.residual(eye) == 0
    assert all(d.is_identity() for d in f.d)


def test_generic_ldu_random_spd():
    rng = random.Random(17)
    base = BlockMatrix.from_blocks(
        [[random_block(rng, 1) for _ in range(4)] for _ in range(4)])
    spd = multiply(base, base.transpose())
    ident = BlockMatrix.identity(4, 1)
    spd = spd + ident + ident + ident  # keep pivots away from zero
    f = generic_ldu(spd)
    assert reconstruct(f).residual(spd) == 0
    assert f.l1.residual(f.l2) == 0  # symmetric input


def test_generic_ldu_shifted_identity_lift_is_singular(identity_lift_gram):
    shifted = shifted_even_truncation(identity_lift_gram)
    assert scalars(shifted) == [[1, 0], [0, 0]]
    with pytest.raises(SingularPivot) as exc:
        generic_ldu(shifted)
    assert exc.value.level == 1


def test_gaussian_shift_is_singular(gaussian_gram):
    shifted = shifted_even_truncation(gaussian_gram)
    with pytest.raises(SingularPivot) as exc:
        generic_ldu(shifted)
    assert exc.value.level == 1


def test_hankel_factorize_identity_lift():
    f = hankel_factorize(blocks([1, 0, 1]))
    eye = BlockMatrix.identity(4, 1)
    assert f.l1.residual(eye) == 0
    assert scalars(f.d) == [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]


def test_hankel_factorize_gaussian_matches_direct(gaussian_gram):
    lifted = hankel_factorize(blocks(GAUSSIAN_S[:5]), 6)
    direct = factorize_checkerboard(gaussian_gram)
    assert lifted.l1.residual(direct.l1) == 0
    assert lifted.l2.residual(direct.l2) == 0
    assert lifted.d.residual(direct.d) == 0
    assert lifted.d.block(4, 5).data[0][0] == 2
    assert lifted.d.block(5, 4).data[0][0] == 2


def test_hankel_factorize_singular_start():
    with pytest.raises(SingularPivot) as exc:
        hankel_factorize(blocks([0, 1, 1]))
    assert exc.value.level == 0


def test_hankel_route_equivalence_random():
    rng = random.Random(29)
    for n, m in ((1, 8), (2, 6)):
        s, gram, fact = random_hankel(rng, n, m)
        lifted = hankel_factorize(s, m)
        assert lifted.l1.residual(fact.l1) == 0
        assert lifted.l2.residual(fact.l2) == 0
        assert lifted.d.residual(fact.d) == 0


def _gram_with_singular_oe_level(level, m):
    """Checkerboard whose odd-even condensed matrix dies exactly at ``level``."""
    entries = []
    for r in range(m // 2):
        for c in range(m // 2):
            oe = 0 if (r == level and c == level) else (1 if r == c else 0)
            eo = 1 if r == c else 0
            entries.append((2 * r + 1, 2 * c, be(oe)))
            entries.append((2 * r, 2 * c + 1, be(eo)))
    return build_checkerboard(entries, 1, m)


@pytest.mark.parametrize("level", [0, 1, 2])
def test_singular_level_matches_oracle(level):
    g = _gram_with_singular_oe_level(level, 8)
    assert first_singular_level(g) == level
    with pytest.raises(SingularPivot) as exc:
        factorize_checkerboard(g)
    assert exc.value.level == level
    if level > 0:
        partial = exc.value.partial
        assert partial is not None and partial.m == 2 * level
        assert reconstruct(partial).residual(g.matrix.truncate(2 * level)) == 0


def test_random_singular_levels_match_oracle():
    rng = random.Random(97)
    checked = 0
    while checked < 12:
        n = rng.choice((1, 1, 2))
        m = rng.choice((4, 6, 8))
        zero = be(0) if n == 1 else random_block(rng, n).scale(0)
        rows = [[random_block(rng, n) if (i + j) % 2 else zero for j in range(m)]
                for i in range(m)]
        # plant a zero pivot block somewhere on the first antidiagonal pair band
        r = rng.randrange(m // 2)
        rows[2 * r + 1][2 * r] = zero
        from checkergram import CheckerboardGram

        g = CheckerboardGram(n, m, BlockMatrix.from_blocks(rows, "rational"))
        expect = first_singular_level(g)
        if expect is None:
            continue
        with pytest.raises(SingularPivot) as exc:
            factorize_checkerboard(g)
        assert exc.value.level == expect
        checked += 1
