"""Block LDU factorization of checkerboard Gram matrices.

A checkerboard Gram matrix M (even truncation m) factors as

    M = L1^{-1} D L2^{-T}

where L1, L2 are unit lower triangular with nonzero entries only at positions
(i, j) with i = j (mod 2), and D is block diagonal in 2x2 pairs, each pair
antidiagonal: entries only at (2l, 2l+1) and (2l+1, 2l).

The factorization is computed with no pivoting by a level-by-level Schur
complement recursion.  Writing H = L D (so M = H U with U = L2^{-T} unit
upper triangular), the recursion for odd rows and even columns is

    theta[i, 2k; 2j] = theta[i, 2k; 2j-2]
                       - h[i, 2j-2] * h[2j-1, 2j-2]^{-1} * theta[2j-1, 2k; 2j-2]

seeded with theta[i, 2k; 0] = m_{i, 2k}, giving h[i, 2l] = theta[i, 2l; 2l]
and u[2l, 2k] = h[2l+1, 2l]^{-1} * theta[2l+1, 2k; 2l].  The mirrored
recursion on even rows and odd columns produces h[i, 2l+1] and
u[2l+1, 2k+1] with pivots h[2l, 2l+1].  The triangular and diagonal factors
then come out of H: d pairs are the pivots themselves and

    l[2i+1, 2j+1] = h[2i+1, 2j] * d[2j+1, 2j]^{-1}
    l[2i,   2j]   = h[2i, 2j+1] * d[2j,   2j+1]^{-1}.

A pivot that fails to invert aborts the recursion at its block level; the
levels completed so far remain valid.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ShapeMismatch, Singular, SingularPivot
from .gram import CheckerboardGram, condensed_hankel
from .linalg import BlockEntry, BlockMatrix, kron, multiply


@dataclass(frozen=True)
class Factorization:
    """Structured factorization M = L1^{-1} D L2^{-T} of a checkerboard Gram.

    ``h`` is the intermediate product L D and ``theta`` memoizes the Schur
    complement tables of both parities, keyed by (row, col, level).
    """

    m: int
    n: int
    l1: BlockMatrix
    l2: BlockMatrix
    d: BlockMatrix
    h: BlockMatrix
    theta: dict

    @property
    def mode(self):
        return self.d.mode

    @property
    def levels(self):
        return self.m // 2

    def d_pair(self, l):
        """(d_{2l,2l+1}, d_{2l+1,2l})."""
        return self.d.block(2 * l, 2 * l + 1), self.d.block(2 * l + 1, 2 * l)


@dataclass(frozen=True)
class DiagonalFactorization:
    """Generic block LDU A = L1^{-1} D L2^{-T} with strictly diagonal D."""

    size: int
    n: int
    l1: BlockMatrix
    l2: BlockMatrix
    d: tuple

    @property
    def mode(self):
        return self.l1.mode

    def d_matrix(self) -> BlockMatrix:
        out = BlockMatrix.zero(self.size, self.size, self.n, self.mode)
        for j, blk in enumerate(self.d):
            out = out.with_block(j, j, blk)
        return out


def factorize_checkerboard(g: CheckerboardGram) -> Factorization:
    """Factor a checkerboard Gram matrix by the two-parity Schur recursion.

    Raises SingularPivot(l) when a pivot at block level l is not invertible;
    the exception carries the factorization of the leading 2l x 2l truncation
    in ``partial`` (None when l == 0).
    """
    m, n, mode = g.m, g.n, g.mode
    levels = m // 2
    theta = {}
    # current-level tables, keyed by (row, col)
    cur_odd = {(i, c): g.entry(i, c) for i in range(1, m, 2) for c in range(0, m, 2)}
    cur_even = {(i, c): g.entry(i, c) for i in range(0, m, 2) for c in range(1, m, 2)}
    for key, val in cur_odd.items():
        theta[(key[0], key[1], 0)] = val
    for key, val in cur_even.items():
        theta[(key[0], key[1], 0)] = val

    h_table = {}
    u_table = {}

    def fail(level, side):
        partial = None
        if level > 0:
            partial = factorize_checkerboard(g.truncate(2 * level))
        raise SingularPivot(level, side=side, partial=partial)

    for l in range(levels):
        # odd rows, even columns; pivot h[2l+1, 2l]
        pivot_oe = cur_odd[(2 * l + 1, 2 * l)]
        try:
            pivot_oe_inv = pivot_oe.inv()
        except Singular:
            fail(l, "odd-even")
        for i in range(2 * l + 1, m, 2):
            h_table[(i, 2 * l)] = cur_odd[(i, 2 * l)]
        for c in range(2 * l + 2, m, 2):
            u_table[(2 * l, c)] = pivot_oe_inv * cur_odd[(2 * l + 1, c)]

        # even rows, odd columns; pivot h[2l, 2l+1]
        pivot_eo = cur_even[(2 * l, 2 * l + 1)]
        try:
            pivot_eo_inv = pivot_eo.inv()
        except Singular:
            fail(l, "even-odd")
        for i in range(2 * l, m, 2):
            h_table[(i, 2 * l + 1)] = cur_even[(i, 2 * l + 1)]
        for c in range(2 * l + 3, m, 2):
            u_table[(2 * l + 1, c)] = pivot_eo_inv * cur_even[(2 * l, c)]

        # next-level Schur complements
        nxt_odd = {}
        for i in range(2 * l + 3, m, 2):
            coeff = h_table[(i, 2 * l)] * pivot_oe_inv
            for c in range(2 * l + 2, m, 2):
                val = cur_odd[(i, c)] - coeff * cur_odd[(2 * l + 1, c)]
                nxt_odd[(i, c)] = val
                theta[(i, c, 2 * l + 2)] = val
        nxt_even = {}
        for i in range(2 * l + 2, m, 2):
            coeff = h_table[(i, 2 * l + 1)] * pivot_eo_inv
            for c in range(2 * l + 3, m, 2):
                val = cur_even[(i, c)] - coeff * cur_even[(2 * l, c)]
                nxt_even[(i, c)] = val
                theta[(i, c, 2 * l + 2)] = val
        cur_odd, cur_even = nxt_odd, nxt_even

    return _assemble(g, h_table, u_table, theta)


def _assemble(g: CheckerboardGram, h_table, u_table, theta) -> Factorization:
    m, n, mode = g.m, g.n, g.mode
    lmat = BlockMatrix.identity(m, n, mode)
    umat = BlockMatrix.identity(m, n, mode)
    dmat = BlockMatrix.zero(m, m, n, mode)
    hmat = BlockMatrix.zero(m, m, n, mode)

    for (i, j), blk in h_table.items():
        hmat = hmat.with_block(i, j, blk)
    for (i, j), blk in u_table.items():
        umat = umat.with_block(i, j, blk)

    for l in range(m // 2):
        d_eo = h_table[(2 * l, 2 * l + 1)]
        d_oe = h_table[(2 * l + 1, 2 * l)]
        dmat = dmat.with_block(2 * l, 2 * l + 1, d_eo)
        dmat = dmat.with_block(2 * l + 1, 2 * l, d_oe)
        d_eo_inv, d_oe_inv = d_eo.inv(), d_oe.inv()
        for i in range(l + 1, m // 2):
            lmat = lmat.with_block(2 * i + 1, 2 * l + 1, h_table[(2 * i + 1, 2 * l)] * d_oe_inv)
            lmat = lmat.with_block(2 * i, 2 * l, h_table[(2 * i, 2 * l + 1)] * d_eo_inv)

    l1 = lmat.invert()
    l2 = umat.invert().transpose()
    return Factorization(m=m, n=n, l1=l1, l2=l2, d=dmat, h=hmat, theta=theta)


def generic_ldu(a: BlockMatrix) -> DiagonalFactorization:
    """Block LDU with strictly diagonal D by sequential Schur elimination.

    A = L1^{-1} D L2^{-T}; raises SingularPivot(j) when the level-j pivot is
    not invertible.
    """
    if a.rows != a.cols:
        raise ShapeMismatch("generic LDU needs a square matrix")
    size, n, mode = a.rows, a.n, a.mode
    work = [[a.block(i, j) for j in range(size)] for i in range(size)]
    lmat = BlockMatrix.identity(size, n, mode)
    umat = BlockMatrix.identity(size, n, mode)
    d = []
    for j in range(size):
        piv = work[j][j]
        try:
            piv_inv = piv.inv()
        except Singular:
            raise SingularPivot(j)
        d.append(piv)
        for i in range(j + 1, size):
            lmat = lmat.with_block(i, j, work[i][j] * piv_inv)
            umat = umat.with_block(j, i, piv_inv * work[j][i])
        for i in range(j + 1, size):
            left = work[i][j] * piv_inv
            if left.is_zero():
                continue
            for k in range(j + 1, size):
                work[i][k] = work[i][k] - left * work[j][k]
    l1 = lmat.invert()
    l2 = umat.invert().transpose()
    return DiagonalFactorization(size=size, n=n, l1=l1, l2=l2, d=tuple(d))


def reconstruct(f) -> BlockMatrix:
    """Multiply the factors back together: L1^{-1} D L2^{-T}.

    Works for both factorization kinds and is the universal correctness
    oracle: the product must reproduce the factored matrix.
    """
    d = f.d if isinstance(f, Factorization) else f.d_matrix()
    left = f.l1.invert()
    right = f.l2.invert().transpose()
    return multiply(left, multiply(d, right))


def hankel_factorize(s_blocks, m=None) -> Factorization:
    """Factor the Hankel checkerboard through its condensed moment matrix.

    The condensed matrix with entries S_{r+c} is factored by generic_ldu and
    the result lifted: L1 = L1~ (x) I, L2 = L2~ (x) I, D = D~ (x) J2.  The
    lift equals factorize_checkerboard of the interleaved Gram matrix.
    """
    blocks = list(s_blocks)
    n = blocks[0].n
    mode = blocks[0].mode
    if m is None:
        k = (len(blocks) + 1) // 2
    else:
        k = m // 2
    mt = condensed_hankel(blocks, k)
    fact = generic_ldu(mt.matrix)

    one = BlockEntry.identity(n, mode)
    zero = BlockEntry.zero(n, mode)
    eye2 = BlockMatrix.from_blocks([[one, zero], [zero, one]], mode)
    j2 = BlockMatrix.from_blocks([[zero, one], [one, zero]], mode)
    l1 = kron(fact.l1, eye2)
    l2 = kron(fact.l2, eye2)
    d = kron(fact.d_matrix(), j2)
    h = multiply(l1.invert(), d)

    theta = {}
    return Factorization(m=2 * k, n=n, l1=l1, l2=l2, d=d, h=h, theta=theta)


def validate_factor_patterns(f: Factorization):
    """Check the parity sparsity of L1, L2 and the antidiagonal-pair shape of D.

    Returns a list of violated positions, empty when clean.
    """
    bad = []
    for name, mat in (("l1", f.l1), ("l2", f.l2)):
        for i in range(mat.rows):
            for j in range(mat.cols):
                blk = mat.block(i, j)
                if i == j:
                    if not blk.is_identity():
                        bad.append((name, i, j, "diagonal not identity"))
                elif j > i or (i - j) % 2 != 0:
                    if not blk.is_zero():
                        bad.append((name, i, j, "outside parity pattern"))
    for i in range(f.d.rows):
        for j in range(f.d.cols):
            blk = f.d.block(i, j)
            on_pair = (i // 2 == j // 2) and i != j
            if not on_pair and not blk.is_zero():
                bad.append(("d", i, j, "outside antidiagonal pairs"))
            if i == j and not blk.is_zero():
                bad.append(("d", i, j, "nonzero diagonal"))
    return bad
