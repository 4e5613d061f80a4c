"""Construction and validation of checkerboard Gram matrices.

A checkerboard Gram matrix is a square block matrix whose entry at (i, j)
vanishes whenever i + j is even.  Such matrices arise when a moment sequence
S_0, S_1, ... is "unwrapped" into the interleaved sequence h with h_{2k} = 0
and h_{2k+1} = S_k, and the Gram entries are m_{i,j} = h_{i+j}.  The same
shape also covers non-Hankel data: the odd-order entries are then free.

Truncations are kept even so the 2x2 block-pair structure used by the
factorization stays whole.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    InsufficientMoments,
    MissingEntry,
    NotHankel,
    OddTruncation,
    OutOfRange,
    PatternViolation,
    ShapeMismatch,
)
from .linalg import RATIONAL, BlockEntry, BlockMatrix, kron


@dataclass(frozen=True)
class MomentSequence:
    """A list of moment blocks h_0 ... h_{len-1} of one block order.

    ``unwrapped`` marks sequences produced by interleaving, whose even-index
    entries are structurally zero.
    """

    n: int
    h: tuple
    unwrapped: bool = False

    def __len__(self):
        return len(self.h)

    @property
    def mode(self):
        return self.h[0].mode if self.h else RATIONAL


@dataclass(frozen=True)
class CheckerboardGram:
    """Even-size truncation of a Gram matrix with zero even-order entries."""

    n: int
    m: int
    matrix: BlockMatrix
    hankel: bool = False

    def __post_init__(self):
        if self.m % 2 != 0:
            raise OddTruncation(f"truncation {self.m} is odd")
        if self.matrix.rows != self.m or self.matrix.cols != self.m:
            raise ShapeMismatch("matrix does not match declared truncation")
        for i in range(self.m):
            for j in range(self.m):
                if (i + j) % 2 == 0 and not self.matrix.block(i, j).is_zero():
                    raise PatternViolation(f"nonzero entry at even-order position ({i}, {j})")
        if self.hankel:
            # entry depends only on i + j
            for s in range(2 * self.m - 1):
                ref = None
                for i in range(max(0, s - self.m + 1), min(self.m, s + 1)):
                    blk = self.matrix.block(i, s - i)
                    if ref is None:
                        ref = blk
                    elif not (blk - ref).is_zero():
                        raise PatternViolation(
                            f"Hankel flag set but antidiagonal {s} is not constant")

    @property
    def mode(self):
        return self.matrix.mode

    def entry(self, i, j):
        return self.matrix.block(i, j)

    def truncate(self, m):
        if m % 2 != 0:
            raise OddTruncation(f"truncation {m} is odd")
        if m > self.m:
            raise OutOfRange(f"truncation {m} exceeds size {self.m}")
        return CheckerboardGram(self.n, m, self.matrix.truncate(m), self.hankel)

    def astype(self, mode):
        return CheckerboardGram(self.n, self.m, self.matrix.astype(mode), self.hankel)


@dataclass(frozen=True)
class CondensedGram:
    """A condensed square extracted from a checkerboard Gram matrix.

    ``kind`` records the extraction: "eo" holds entries (2r, 2c+1), "oe"
    holds (2r+1, 2c), and "hankel" is a condensed moment matrix with entry
    (r, c) = S_{r+c}.
    """

    kind: str
    matrix: BlockMatrix

    @property
    def size(self):
        return self.matrix.rows

    def is_hankel(self):
        m = self.matrix
        for s in range(2 * m.rows - 1):
            ref = None
            for i in range(max(0, s - m.cols + 1), min(m.rows, s + 1)):
                j = s - i
                if j < 0 or j >= m.cols:
                    continue
                blk = m.block(i, j)
                if ref is None:
                    ref = blk
                elif not (blk - ref).is_zero():
                    return False
        return True


def unwrap_moments(s_blocks, n) -> MomentSequence:
    """Interleave S_0, S_1, ... into h with h_{2k} = 0 and h_{2k+1} = S_k."""
    blocks = list(s_blocks)
    mode = blocks[0].mode if blocks else RATIONAL
    zero = BlockEntry.zero(n, mode)
    h = []
    for s in blocks:
        if s.n != n:
            raise ShapeMismatch(f"moment block order {s.n} != {n}")
        h.append(zero)
        h.append(s)
    return MomentSequence(n, tuple(h), unwrapped=True)


def build_checkerboard(entries, n, m) -> CheckerboardGram:
    """Assemble a checkerboard Gram matrix from sparse odd-order entries.

    ``entries`` maps (i, j) to a BlockEntry, or is an iterable of
    (i, j, block) triples.  Every position with i + j odd must be supplied;
    a nonzero block at an even-order position is rejected.
    """
    if m % 2 != 0:
        raise OddTruncation(f"truncation {m} is odd")
    if isinstance(entries, dict):
        items = list(entries.items())
        items = [(ij[0], ij[1], blk) for ij, blk in items]
    else:
        items = [(i, j, blk) for i, j, blk in entries]
    table = {}
    for i, j, blk in items:
        if not (0 <= i < m and 0 <= j < m):
            raise OutOfRange(f"position ({i}, {j}) outside {m} x {m}")
        if (i + j) % 2 == 0:
            if not blk.is_zero():
                raise PatternViolation(f"nonzero entry at even-order position ({i}, {j})")
            continue
        table[(i, j)] = blk
    mode = items[0][2].mode if items else RATIONAL
    zero = BlockEntry.zero(n, mode)
    rows = []
    for i in range(m):
        row = []
        for j in range(m):
            if (i + j) % 2 == 0:
                row.append(zero)
            else:
                if (i, j) not in table:
                    raise MissingEntry(f"odd-order position ({i}, {j}) not supplied")
                row.append(table[(i, j)])
        rows.append(row)
    return CheckerboardGram(n, m, BlockMatrix.from_blocks(rows, mode))


def hankel_gram(h: MomentSequence, m) -> CheckerboardGram:
    """Gram matrix with m_{i,j} = h_{i+j} from an interleaved moment list.

    Even-index entries beyond the supplied list are structurally zero, so the
    list only needs to reach the largest odd index 2m - 3 actually used.
    """
    if m % 2 != 0:
        raise OddTruncation(f"truncation {m} is odd")
    for k in range(0, len(h.h), 2):
        if not h.h[k].is_zero():
            raise PatternViolation(f"h_{k} is nonzero at an even index")
    if m > 0 and len(h.h) < 2 * m - 2:
        raise InsufficientMoments(
            f"need h up to odd index {2 * m - 3}, got {len(h.h)} entries")
    mode = h.mode
    zero = BlockEntry.zero(h.n, mode)
    rows = []
    for i in range(m):
        row = []
        for j in range(m):
            if (i + j) % 2 == 0:
                row.append(zero)
            else:
                row.append(h.h[i + j])
        rows.append(row)
    return CheckerboardGram(h.n, m, BlockMatrix.from_blocks(rows, mode), hankel=True)


def condensed_hankel(s_blocks, size=None) -> CondensedGram:
    """Condensed moment matrix with entry (r, c) = S_{r+c}."""
    blocks = list(s_blocks)
    if size is None:
        size = (len(blocks) + 1) // 2
    if len(blocks) < 2 * size - 1:
        raise InsufficientMoments(f"need {2 * size - 1} moments for size {size}, got {len(blocks)}")
    rows = [[blocks[r + c] for c in range(size)] for r in range(size)]
    mode = blocks[0].mode if blocks else RATIONAL
    return CondensedGram("hankel", BlockMatrix.from_blocks(rows, mode))


def kron_lift(mtilde: CondensedGram) -> CheckerboardGram:
    """Expand a condensed Hankel matrix to the full checkerboard by tensoring
    each entry with the 2x2 swap block."""
    mat = mtilde.matrix
    if mat.rows != mat.cols:
        raise ShapeMismatch("condensed matrix must be square")
    if not mtilde.is_hankel():
        raise NotHankel("condensed matrix entries must depend on r + c only")
    n, mode = mat.n, mat.mode
    one = BlockEntry.identity(n, mode)
    zero = BlockEntry.zero(n, mode)
    j2 = BlockMatrix.from_blocks([[zero, one], [one, zero]], mode)
    lifted = kron(mat, j2)
    return CheckerboardGram(n, 2 * mat.rows, lifted, hankel=True)


def lambda_shift(g) -> BlockMatrix:
    """Drop the first block row: entry (i, j) of the result is m_{i+1, j}.

    Accepts a CheckerboardGram or a plain BlockMatrix; the result has one
    fewer row and is nonzero only where i + j is even.
    """
    mat = g.matrix if isinstance(g, CheckerboardGram) else g
    if mat.rows < 2:
        raise OutOfRange("need at least two block rows to shift")
    return mat.submatrix(1, mat.rows, 0, mat.cols)


def shifted_even_truncation(g: CheckerboardGram) -> BlockMatrix:
    """Largest square even truncation of the shifted matrix: size m - 2."""
    if g.m < 4:
        raise OutOfRange("need m >= 4 for an even truncation of the shift")
    return lambda_shift(g).truncate(g.m - 2, g.m - 2)


def condensed_eo(g: CheckerboardGram, j) -> CondensedGram:
    """j x j condensed matrix with entry (r, c) = m_{2r, 2c+1}."""
    if j < 0 or 2 * j > g.m:
        raise OutOfRange(f"condensed size {j} exceeds truncation {g.m}")
    rows = [[g.entry(2 * r, 2 * c + 1) for c in range(j)] for r in range(j)]
    mat = (BlockMatrix.from_blocks(rows, g.mode) if j
           else BlockMatrix.zero(0, 0, g.n, g.mode))
    return CondensedGram("eo", mat)


def condensed_oe(g: CheckerboardGram, j) -> CondensedGram:
    """j x j condensed matrix with entry (r, c) = m_{2r+1, 2c}."""
    if j < 0 or 2 * j > g.m:
        raise OutOfRange(f"condensed size {j} exceeds truncation {g.m}")
    rows = [[g.entry(2 * r + 1, 2 * c) for c in range(j)] for r in range(j)]
    mat = (BlockMatrix.from_blocks(rows, g.mode) if j
           else BlockMatrix.zero(0, 0, g.n, g.mode))
    return CondensedGram("oe", mat)
