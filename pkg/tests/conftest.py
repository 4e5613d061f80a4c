import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from checkergram import (
    BlockEntry,
    CheckerboardGram,
    SingularPivot,
    christoffel_transform,
    factorize_checkerboard,
    hankel_gram,
    unwrap_moments,
)


def be(x, mode="rational"):
    """1x1 block from a scalar."""
    return BlockEntry.from_rows([[x]], mode)


def blocks(values, mode="rational"):
    return [be(v, mode) for v in values]


GAUSSIAN_S = (1, 0, 1, 0, 3, 0, 15)
# S_k = (2k-1)!!: the shifted Gram matrix of this sequence is the Hankel
# moment matrix of the standard normal, so its shift is quasi-definite.
DOUBLE_FACTORIAL_S = (1, 1, 3, 15, 105, 945, 10395)
IDENTITY_LIFT_S = (1, 0, 1)


@pytest.fixture(scope="session")
def gaussian_gram():
    return hankel_gram(unwrap_moments(blocks(GAUSSIAN_S[:5]), 1), 6)


@pytest.fixture(scope="session")
def gaussian_gram_m8():
    return hankel_gram(unwrap_moments(blocks(GAUSSIAN_S), 1), 8)


@pytest.fixture(scope="session")
def dfact_gram():
    return hankel_gram(unwrap_moments(blocks(DOUBLE_FACTORIAL_S), 1), 8)


@pytest.fixture(scope="session")
def identity_lift_gram():
    return hankel_gram(unwrap_moments(blocks(IDENTITY_LIFT_S), 1), 4)


def random_block(rng, n, mode="rational"):
    rows = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(n)]
            for _ in range(n)]
    return BlockEntry.from_rows(rows, mode)


def random_checkerboard(rng, n, m):
    """A random checkerboard Gram with invertible pivots, plus its factorization."""
    from checkergram import BlockMatrix

    for _ in range(80):
        zero = BlockEntry.zero(n)
        rows = [[random_block(rng, n) if (i + j) % 2 else zero for j in range(m)]
                for i in range(m)]
        gram = CheckerboardGram(n, m, BlockMatrix.from_blocks(rows, "rational"))
        try:
            fact = factorize_checkerboard(gram)
        except SingularPivot:
            continue
        return gram, fact
    raise AssertionError(f"no factorizable random gram found for n={n}, m={m}")


def random_regular_shift(rng, n, m):
    """A random case whose Christoffel shift is also quasi-definite."""
    for _ in range(80):
        gram, fact = random_checkerboard(rng, n, m)
        try:
            mhat, hat_fact = christoffel_transform(gram)
        except SingularPivot:
            continue
        return gram, fact, mhat, hat_fact
    raise AssertionError(f"no regular-shift random gram found for n={n}, m={m}")


def random_hankel(rng, n, m):
    """A random Hankel checkerboard with invertible pivots."""
    for _ in range(80):
        s = [random_block(rng, n) for _ in range(m - 1)]
        gram = hankel_gram(unwrap_moments(s, n), m)
        try:
            fact = factorize_checkerboard(gram)
        except SingularPivot:
            continue
        return s, gram, fact
    raise AssertionError(f"no factorizable random Hankel found for n={n}, m={m}")
