"""Christoffel transformation of a checkerboard Gram matrix.

Dropping the first block row of M (multiplying by the up-shift) gives the
transformed matrix

    M^ = shift(M),   entry (i, j) = m_{i+1, j},

nonzero exactly where i + j is even.  Its generic block LDU has triangular
factors with the same parity sparsity as the original L1, L2 but a strictly
diagonal middle D^.  The two factorizations are tied together by the
connector

    sigma = L1^ Lambda L1^{-1} = D^ L2^{-T}^ L2^T D^{-1},

a banded matrix with identity blocks on the superdiagonal, one free block
sigma_{2j+1, 2j} = d^_{2j+1,2j+1} d_{2j,2j+1}^{-1} under each even column,
and zeros elsewhere.  Acting on the polynomial vector it shifts the variable:
sigma P(z) = z P^(z), which row by row reads

    p_{2j+1}(z)                              = z p^_{2j}(z)
    p_{2j+2}(z) + sigma_{2j+1,2j} p_{2j}(z)  = z p^_{2j+1}(z)

and gives the transformed family by exact division:

    p^_{2j}   = p_{2j+1}(z) / z
    p^_{2j+1} = (p_{2j+2}(z) - p_{2j+2}(0) p_{2j}(0)^{-1} p_{2j}(z)) / z.

On the q side the two families satisfy Q^T D^{-1} = Q^^T D^^{-1} sigma as an
identity between row vectors of polynomials.

Working truncation: the shift consumes one block row, so a Gram matrix of
size m supports a square even shifted truncation of size m - 2, and the
connector is assembled on that common size.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    NonzeroRemainder,
    OutOfRange,
    PatternViolation,
    SingularConstantTerm,
    TruncationMismatch,
)
from .gram import CheckerboardGram, shifted_even_truncation
from .ldu import DiagonalFactorization, Factorization, generic_ldu
from .linalg import BlockEntry, BlockMatrix, invert_antidiagonal_pairs, multiply
from .polys import EVEN, ODD, MatrixPolynomial, PolynomialFamily, poly_residual
from .report import Report


@dataclass(frozen=True)
class Connector:
    """The banded matrix linking the original and shifted factorizations."""

    sigma: BlockMatrix
    subdiag: tuple

    @property
    def size(self):
        return self.sigma.rows


def christoffel_transform(g: CheckerboardGram):
    """Shift the Gram matrix and factor the result.

    Returns (M^, factorization) where M^ is the square even truncation of
    size m - 2 and the factorization is its generic block LDU.  Raises
    SingularPivot when a shifted leading pivot fails, and PatternViolation if
    the factors ever escaped their proven sparsity (they cannot).
    """
    mhat = shifted_even_truncation(g)
    for i in range(mhat.rows):
        for j in range(mhat.cols):
            if (i + j) % 2 == 1 and not mhat.block(i, j).is_zero():
                raise PatternViolation(f"shift broke the complementary pattern at ({i}, {j})")
    fact = generic_ldu(mhat)
    for name, mat in (("l1", fact.l1), ("l2", fact.l2)):
        for i in range(mat.rows):
            for j in range(i):
                if (i - j) % 2 != 0 and not mat.block(i, j).is_zero():
                    raise PatternViolation(f"{name} breaks parity sparsity at ({i}, {j})")
    return mhat, fact


def _validated_connector(sigma: BlockMatrix, f: Factorization,
                         fhat: DiagonalFactorization) -> Connector:
    size = sigma.rows
    one = BlockEntry.identity(sigma.n, sigma.mode)
    for i in range(size):
        for j in range(size):
            blk = sigma.block(i, j)
            if j == i + 1:
                if not (blk - one).is_zero():
                    raise PatternViolation(f"connector superdiagonal ({i}, {j}) is not identity")
            elif i % 2 == 1 and j == i - 1:
                continue
            elif not blk.is_zero():
                raise PatternViolation(f"connector has a stray block at ({i}, {j})")
    subdiag = []
    for j in range(size // 2):
        blk = sigma.block(2 * j + 1, 2 * j)
        want = fhat.d[2 * j + 1] * f.d.block(2 * j, 2 * j + 1).inv()
        if not (blk - want).is_zero():
            raise PatternViolation(
                f"connector subdiagonal {2 * j + 1} does not match d^ d^-1")
        subdiag.append(blk)
    return Connector(sigma=sigma, subdiag=tuple(subdiag))


def _check_truncations(f: Factorization, fhat: DiagonalFactorization):
    if fhat.size != f.m - 2:
        raise TruncationMismatch(
            f"shifted factorization has size {fhat.size}, expected {f.m - 2}")


def connector_from_L(f: Factorization, fhat: DiagonalFactorization) -> Connector:
    """sigma via the triangular route: L1^ applied to the shifted rows of L1^{-1}."""
    _check_truncations(f, fhat)
    m = f.m
    l1_inv = f.l1.invert()
    shifted = l1_inv.submatrix(1, m, 0, m).truncate(m - 2, m)
    sigma = multiply(fhat.l1, shifted).truncate(m - 2, m - 2)
    return _validated_connector(sigma, f, fhat)


def connector_from_D(f: Factorization, fhat: DiagonalFactorization) -> Connector:
    """sigma via the diagonal route: D^ L2^{-T}^ L2^T D^{-1}.

    The product is exact on the common (m - 2) square truncation.
    """
    _check_truncations(f, fhat)
    m = f.m
    left = multiply(fhat.d_matrix(), fhat.l2.invert().transpose())
    right = multiply(f.l2.transpose(), invert_antidiagonal_pairs(f.d)).truncate(m - 2, m - 2)
    sigma = multiply(left, right)
    return _validated_connector(sigma, f, fhat)


def hat_polys_via_relation(fam: PolynomialFamily, upto=None) -> PolynomialFamily:
    """Transformed polynomials by exact variable division.

    ``upto`` bounds the largest transformed index (default: every index the
    family supports, m - 2).  Raises SingularConstantTerm when some needed
    p_{2j}(0) is not invertible and NonzeroRemainder if a division ever
    failed to be exact (parity makes that impossible for valid input).
    """
    m = fam.size
    if upto is None:
        upto = m - 2
    if upto > m - 2:
        raise OutOfRange(f"transformed index {upto} needs source index {upto + 2}")
    hat = []
    for k in range(upto + 1):
        j = k // 2
        if k % 2 == 0:
            src = fam.p[2 * j + 1]
            if not src.coeff(0).is_zero():
                raise NonzeroRemainder(f"p_{2 * j + 1} has a nonzero constant term")
            hat.append(MatrixPolynomial(src.coeffs[1:], parity=EVEN))
        else:
            base = fam.p[2 * j]
            top = fam.p[2 * j + 2]
            try:
                c0_inv = base.coeff(0).inv()
            except Exception as exc:
                raise SingularConstantTerm(
                    f"p_{2 * j}(0) is not invertible") from exc
            t = top.coeff(0) * c0_inv
            coeffs = [top.coeff(r) - t * base.coeff(r) for r in range(top.degree + 1)]
            if not coeffs[0].is_zero():
                raise NonzeroRemainder(f"division of index {k} left a remainder")
            hat.append(MatrixPolynomial(tuple(coeffs[1:]), parity=ODD))
    return PolynomialFamily(p=tuple(hat), q=())


def verify_connector_action(conn: Connector, fam: PolynomialFamily,
                            hat_fam: PolynomialFamily, tolerance=1e-10) -> Report:
    """Row-by-row coefficient identity sigma P(z) = z P^(z)."""
    rep = Report("connector-action")
    mode = fam.mode
    rows = min(conn.size, hat_fam.size)
    for j in range(rows):
        hat = hat_fam.p[j]
        lifted = (BlockEntry.zero(fam.n, mode),) + hat.coeffs
        if j % 2 == 0:
            lhs = fam.p[j + 1].coeffs
        else:
            s = conn.sigma.block(j, j - 1)
            top = fam.p[j + 1]
            low = fam.p[j - 1]
            lhs = tuple(top.coeff(r) + s * low.coeff(r) for r in range(top.degree + 1))
        deg = max(len(lhs), len(lifted))
        res = None
        for r in range(deg):
            a = lhs[r] if r < len(lhs) else BlockEntry.zero(fam.n, mode)
            b = lifted[r] if r < len(lifted) else BlockEntry.zero(fam.n, mode)
            diff = (a - b).max_abs()
            res = diff if res is None else max(res, diff)
        rep.check("connector-row", res, mode, tolerance, indices=(j,))
    return rep


def verify_hat_route_equality(hat_fam_rel: PolynomialFamily,
                              hat_fam_fact: PolynomialFamily,
                              tolerance=1e-10) -> Report:
    """Division route equals the rows of the shifted factorization."""
    rep = Report("hat-route-equality")
    mode = hat_fam_fact.mode
    for k in range(min(hat_fam_rel.size, hat_fam_fact.size)):
        res = poly_residual(hat_fam_rel.p[k], hat_fam_fact.p[k])
        rep.check("hat-poly-route", res, mode, tolerance, indices=(k,))
    return rep


def verify_q_side(fam: PolynomialFamily, hat_fam: PolynomialFamily,
                  conn: Connector, tolerance=1e-10) -> Report:
    """Columnwise identity Q^T D^{-1} = Q^^T D^^{-1} sigma on the common truncation.

    ``hat_fam`` must carry the shifted family's q polynomials and diagonal
    normalizations (i.e. come from the shifted factorization).
    """
    rep = Report("q-side-identity")
    n, mode = fam.n, fam.mode
    zero = BlockEntry.zero(n, mode)
    size = conn.size
    for col in range(size):
        i = col // 2
        if col % 2 == 0:
            src = fam.q[2 * i + 1]
            mid = fam.d_pairs[i][0].inv()
        else:
            src = fam.q[2 * i]
            mid = fam.d_pairs[i][1].inv()
        lhs = [src.coeff(a).transpose() * mid for a in range(src.degree + 1)]

        contributions = []
        if col - 1 >= 0:
            contributions.append((col - 1, BlockEntry.identity(n, mode)))
        if col % 2 == 0 and col + 1 < size:
            contributions.append((col + 1, conn.sigma.block(col + 1, col)))
        rhs_deg = max(hat_fam.q[k].degree for k, _ in contributions) if contributions else 0
        rhs = []
        for a in range(rhs_deg + 1):
            acc = zero
            for k, s in contributions:
                qk = hat_fam.q[k]
                dk_inv = hat_fam.d_diag[k].inv()
                acc = acc + qk.coeff(a).transpose() * dk_inv * s
            rhs.append(acc)

        deg = max(len(lhs), len(rhs))
        res = None
        for a in range(deg):
            lv = lhs[a] if a < len(lhs) else zero
            rv = rhs[a] if a < len(rhs) else zero
            diff = (lv - rv).max_abs()
            res = diff if res is None else max(res, diff)
        rep.check("q-side-column", res, mode, tolerance, indices=(col,))
    return rep
