"""Dense block-matrix arithmetic over an exact rational or floating scalar.

Values are immutable.  A ``BlockEntry`` is one n-by-n matrix of scalars (an
element of the matrix ring the computation lives in); a ``BlockMatrix`` is a
rectangular array of such entries, all sharing one block order n.  The scalar
mode is fixed per value: ``"rational"`` uses :class:`fractions.Fraction` and
every identity in this package then holds exactly; ``"float"`` uses Python
floats and comparisons go through residuals against a tolerance.

Transposition is scalar-level: the (i, j) block of ``A.transpose()`` is the
transposed (j, i) block of ``A``, i.e. the transpose of the underlying big
scalar matrix.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ShapeMismatch, Singular

RATIONAL = "rational"
FLOAT = "float"

# Pivot magnitudes below this are treated as zero in float mode.  Float mode
# exists for smoke testing only; it is never used by the exact checks.
FLOAT_PIVOT_EPS = 1e-13


def _coerce(value, mode):
    if mode == RATIONAL:
        if isinstance(value, float):
            raise ShapeMismatch("rational mode does not accept floats")
        return value if isinstance(value, Fraction) else Fraction(value)
    return float(value)


def _is_zero_scalar(value, mode):
    if mode == RATIONAL:
        return value == 0
    return abs(value) < FLOAT_PIVOT_EPS


def _check_same_mode(a, b):
    if a.mode != b.mode:
        raise ShapeMismatch(f"mixed scalar modes: {a.mode} vs {b.mode}")


@dataclass(frozen=True)
class BlockEntry:
    """One n-by-n block of scalars."""

    n: int
    data: tuple
    mode: str = RATIONAL

    @classmethod
    def from_rows(cls, rows, mode=RATIONAL):
        rows = [list(r) for r in rows]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ShapeMismatch("block must be square")
        data = tuple(tuple(_coerce(x, mode) for x in r) for r in rows)
        return cls(n, data, mode)

    @classmethod
    def zero(cls, n, mode=RATIONAL):
        z = _coerce(0, mode)
        return cls(n, tuple(tuple(z for _ in range(n)) for _ in range(n)), mode)

    @classmethod
    def identity(cls, n, mode=RATIONAL):
        one, z = _coerce(1, mode), _coerce(0, mode)
        return cls(n, tuple(tuple(one if i == j else z for j in range(n)) for i in range(n)), mode)

    @classmethod
    def scalar(cls, value, n=1, mode=RATIONAL):
        """value * identity, as a block of order n."""
        v, z = _coerce(value, mode), _coerce(0, mode)
        return cls(n, tuple(tuple(v if i == j else z for j in range(n)) for i in range(n)), mode)

    def __add__(self, other):
        self._compat(other)
        return BlockEntry(
            self.n,
            tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.data, other.data)),
            self.mode,
        )

    def __sub__(self, other):
        self._compat(other)
        return BlockEntry(
            self.n,
            tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(self.data, other.data)),
            self.mode,
        )

    def __neg__(self):
        return BlockEntry(self.n, tuple(tuple(-a for a in r) for r in self.data), self.mode)

    def __mul__(self, other):
        self._compat(other)
        n = self.n
        a, b = self.data, other.data
        return BlockEntry(
            n,
            tuple(
                tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
                for i in range(n)
            ),
            self.mode,
        )

    def scale(self, s):
        s = _coerce(s, self.mode)
        return BlockEntry(self.n, tuple(tuple(s * a for a in r) for r in self.data), self.mode)

    def transpose(self):
        return BlockEntry(self.n, tuple(zip(*self.data)), self.mode)

    def inv(self):
        """Inverse by pivoted Gaussian elimination; raises Singular."""
        rows = _invert_scalar([list(r) for r in self.data], self.mode)
        return BlockEntry(self.n, tuple(tuple(r) for r in rows), self.mode)

    def is_zero(self):
        return all(_is_zero_scalar(a, self.mode) for r in self.data for a in r)

    def is_identity(self):
        return (self - BlockEntry.identity(self.n, self.mode)).is_zero()

    def max_abs(self):
        return max((abs(a) for r in self.data for a in r), default=_coerce(0, self.mode))

    def astype(self, mode):
        if mode == self.mode:
            return self
        return BlockEntry.from_rows([[x for x in r] for r in self.data], mode)

    def _compat(self, other):
        if not isinstance(other, BlockEntry):
            raise ShapeMismatch(f"expected BlockEntry, got {type(other).__name__}")
        if self.n != other.n:
            raise ShapeMismatch(f"block orders differ: {self.n} vs {other.n}")
        _check_same_mode(self, other)


@dataclass(frozen=True)
class BlockMatrix:
    """rows x cols array of BlockEntry, all of one block order."""

    rows: int
    cols: int
    n: int
    entries: tuple
    mode: str = RATIONAL

    @classmethod
    def from_blocks(cls, blocks, mode=None):
        blocks = [list(r) for r in blocks]
        rows = len(blocks)
        cols = len(blocks[0]) if rows else 0
        if any(len(r) != cols for r in blocks):
            raise ShapeMismatch("ragged block rows")
        if rows == 0 or cols == 0:
            return cls(rows, cols, 0, (), mode or RATIONAL)
        n = blocks[0][0].n
        mode = mode or blocks[0][0].mode
        for r in blocks:
            for b in r:
                if b.n != n or b.mode != mode:
                    raise ShapeMismatch("inconsistent block order or mode")
        return cls(rows, cols, n, tuple(tuple(r) for r in blocks), mode)

    @classmethod
    def zero(cls, rows, cols, n, mode=RATIONAL):
        z = BlockEntry.zero(n, mode)
        return cls(rows, cols, n, tuple(tuple(z for _ in range(cols)) for _ in range(rows)), mode)

    @classmethod
    def identity(cls, size, n, mode=RATIONAL):
        one = BlockEntry.identity(n, mode)
        z = BlockEntry.zero(n, mode)
        return cls(size, size, n,
                   tuple(tuple(one if i == j else z for j in range(size)) for i in range(size)),
                   mode)

    def block(self, i, j):
        return self.entries[i][j]

    def with_block(self, i, j, value):
        rows = [list(r) for r in self.entries]
        rows[i][j] = value
        return BlockMatrix(self.rows, self.cols, self.n, tuple(tuple(r) for r in rows), self.mode)

    def submatrix(self, row0, row1, col0, col1):
        return BlockMatrix(
            row1 - row0, col1 - col0, self.n,
            tuple(tuple(self.entries[i][j] for j in range(col0, col1)) for i in range(row0, row1)),
            self.mode,
        )

    def truncate(self, rows, cols=None):
        cols = rows if cols is None else cols
        if rows > self.rows or cols > self.cols:
            raise ShapeMismatch("truncation exceeds matrix size")
        return self.submatrix(0, rows, 0, cols)

    def transpose(self):
        return BlockMatrix(
            self.cols, self.rows, self.n,
            tuple(tuple(self.entries[j][i].transpose() for j in range(self.rows))
                  for i in range(self.cols)),
            self.mode,
        )

    def __add__(self, other):
        self._compat(other, same_shape=True)
        return BlockMatrix(
            self.rows, self.cols, self.n,
            tuple(tuple(a + b for a, b in zip(ra, rb))
                  for ra, rb in zip(self.entries, other.entries)),
            self.mode,
        )

    def __sub__(self, other):
        self._compat(other, same_shape=True)
        return BlockMatrix(
            self.rows, self.cols, self.n,
            tuple(tuple(a - b for a, b in zip(ra, rb))
                  for ra, rb in zip(self.entries, other.entries)),
            self.mode,
        )

    def is_zero(self):
        return all(b.is_zero() for r in self.entries for b in r)

    def max_abs(self):
        vals = [b.max_abs() for r in self.entries for b in r]
        return max(vals) if vals else _coerce(0, self.mode)

    def residual(self, other):
        """Max absolute entrywise difference."""
        return (self - other).max_abs()

    def to_scalar_rows(self):
        """Flatten to a (rows*n) x (cols*n) list-of-lists scalar matrix."""
        out = []
        for i in range(self.rows):
            for a in range(self.n):
                out.append([self.entries[i][j].data[a][b]
                            for j in range(self.cols) for b in range(self.n)])
        return out

    @classmethod
    def from_scalar_rows(cls, rows, n, mode=RATIONAL):
        nr, nc = len(rows) // n, len(rows[0]) // n if rows else 0
        blocks = [
            [BlockEntry(n, tuple(tuple(rows[i * n + a][j * n + b] for b in range(n))
                                 for a in range(n)), mode)
             for j in range(nc)]
            for i in range(nr)
        ]
        return cls.from_blocks(blocks, mode) if blocks else cls(0, 0, n, (), mode)

    def invert(self):
        if self.rows != self.cols:
            raise ShapeMismatch("only square matrices invert")
        if self.rows == 0:
            return self
        rows = _invert_scalar(self.to_scalar_rows(), self.mode)
        return BlockMatrix.from_scalar_rows(rows, self.n, self.mode)

    def astype(self, mode):
        if mode == self.mode:
            return self
        return BlockMatrix.from_blocks(
            [[b.astype(mode) for b in r] for r in self.entries], mode)

    def _compat(self, other, same_shape=False):
        if not isinstance(other, BlockMatrix):
            raise ShapeMismatch(f"expected BlockMatrix, got {type(other).__name__}")
        if self.n != other.n:
            raise ShapeMismatch(f"block orders differ: {self.n} vs {other.n}")
        _check_same_mode(self, other)
        if same_shape and (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeMismatch("shapes differ")


def multiply(a: BlockMatrix, b: BlockMatrix) -> BlockMatrix:
    """Standard block product; exact in rational mode."""
    a._compat(b)
    if a.cols != b.rows:
        raise ShapeMismatch(f"inner dimensions differ: {a.cols} vs {b.rows}")
    if a.rows == 0 or b.cols == 0 or a.cols == 0:
        return BlockMatrix.zero(a.rows, b.cols, a.n, a.mode)
    out = []
    for i in range(a.rows):
        row = []
        for j in range(b.cols):
            acc = BlockEntry.zero(a.n, a.mode)
            for k in range(a.cols):
                ab = a.entries[i][k]
                bb = b.entries[k][j]
                if ab.is_zero() or bb.is_zero():
                    continue
                acc = acc + ab * bb
            row.append(acc)
        out.append(row)
    return BlockMatrix.from_blocks(out, a.mode)


def invert(x):
    """Inverse of a BlockEntry or BlockMatrix; raises Singular."""
    return x.inv() if isinstance(x, BlockEntry) else x.invert()


def theta_star(v11: BlockEntry, v12: BlockEntry, v21: BlockEntry, v22: BlockEntry) -> BlockEntry:
    """Schur complement v22 - v21 v11^{-1} v12 of a 2x2 arrangement of blocks."""
    return v22 - v21 * v11.inv() * v12


def schur_complement(v: BlockMatrix, k: int = 1) -> BlockMatrix:
    """Schur complement of the leading k x k block corner of a partitioned matrix.

    Returns v22 - v21 v11^{-1} v12 where v11 is the leading k x k block
    submatrix.  Raises Singular when v11 is not invertible.
    """
    if k <= 0 or k >= min(v.rows, v.cols):
        raise ShapeMismatch("partition index must split the matrix")
    v11 = v.submatrix(0, k, 0, k)
    v12 = v.submatrix(0, k, k, v.cols)
    v21 = v.submatrix(k, v.rows, 0, k)
    v22 = v.submatrix(k, v.rows, k, v.cols)
    return v22 - multiply(multiply(v21, v11.invert()), v12)


def kron(a: BlockMatrix, j: BlockMatrix) -> BlockMatrix:
    """Block Kronecker product: entry ((i,k),(j,l)) = a[i][j] * j[k][l]."""
    a._compat(j)
    blocks = []
    for i in range(a.rows):
        for k in range(j.rows):
            row = []
            for c in range(a.cols):
                for l in range(j.cols):
                    row.append(a.entries[i][c] * j.entries[k][l])
            blocks.append(row)
    if not blocks:
        return BlockMatrix.zero(0, 0, a.n, a.mode)
    return BlockMatrix.from_blocks(blocks, a.mode)


def invert_antidiagonal_pairs(d: BlockMatrix) -> BlockMatrix:
    """Inverse of a block matrix that is diagonal in antidiagonal 2x2 pairs.

    [[0, a], [b, 0]]^{-1} = [[0, b^{-1}], [a^{-1}, 0]] applied pairwise.
    """
    if d.rows != d.cols or d.rows % 2 != 0:
        raise ShapeMismatch("need an even square matrix of antidiagonal pairs")
    out = BlockMatrix.zero(d.rows, d.cols, d.n, d.mode)
    for l in range(d.rows // 2):
        a = d.block(2 * l, 2 * l + 1)
        b = d.block(2 * l + 1, 2 * l)
        out = out.with_block(2 * l, 2 * l + 1, b.inv())
        out = out.with_block(2 * l + 1, 2 * l, a.inv())
    return out


def solve_left(a: BlockMatrix, b: BlockMatrix) -> BlockMatrix:
    """X with X a = b, by exact elimination (through the inverse)."""
    return multiply(b, a.invert())


def solve_right(a: BlockMatrix, b: BlockMatrix) -> BlockMatrix:
    """X with a X = b."""
    return multiply(a.invert(), b)


def _invert_scalar(mat, mode):
    """Gauss-Jordan with row pivoting on a scalar list-of-lists matrix."""
    dim = len(mat)
    aug = [list(row) + [_coerce(1, mode) if i == j else _coerce(0, mode) for j in range(dim)]
           for i, row in enumerate(mat)]
    for col in range(dim):
        pivot_row = None
        if mode == RATIONAL:
            for r in range(col, dim):
                if aug[r][col] != 0:
                    pivot_row = r
                    break
        else:
            best = FLOAT_PIVOT_EPS
            for r in range(col, dim):
                if abs(aug[r][col]) > best:
                    best = abs(aug[r][col])
                    pivot_row = r
        if pivot_row is None:
            raise Singular(f"singular at column {col}")
        aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
        piv = aug[col][col]
        aug[col] = [x / piv for x in aug[col]]
        for r in range(dim):
            if r == col:
                continue
            f = aug[r][col]
            if _is_zero_scalar(f, mode) and mode == RATIONAL:
                continue
            aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[dim:] for row in aug]
