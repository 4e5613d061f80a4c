"""Matrix biorthogonal polynomial families and their verification.

Two monic families p_k and q_k come out of a factorization: the coefficients
of p_k are the row-k entries of L1 and those of q_k the row-k entries of L2.
Against the bilinear pairing

    <A, B> = sum_{k,l} a_k m_{k,l} b_l^T

(the transpose acts on the right factor's coefficients) they satisfy the
shifted biorthogonality pattern

    <p_{2j},   q_k> = d_{2j,2j+1} delta_{2j+1,k}
    <p_{2j+1}, q_k> = d_{2j+1,2j} delta_{2j,k}

so in particular <p_{2j}, q_{2j}> = 0: even-index members pair with the odd
neighbours, never with themselves.  Each polynomial also has pure parity:
p_{2j} holds only even powers, p_{2j+1} only odd ones.

The same polynomials admit a second, independent construction: the unknown
coefficients solve small linear systems against the condensed matrices (even
rows x odd columns, or odd rows x even columns), which is the quasideterminant
route.  Both routes must agree coefficientwise.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import OutOfRange, PatternViolation
from .gram import CheckerboardGram, condensed_eo, condensed_oe
from .ldu import Factorization
from .linalg import RATIONAL, BlockEntry, BlockMatrix, multiply, solve_left
from .report import Report

EVEN = "even"
ODD = "odd"


def _detect_parity(coeffs):
    deg = len(coeffs) - 1
    want = deg % 2
    for k, c in enumerate(coeffs):
        if k % 2 != want and not c.is_zero():
            return None
    return EVEN if want == 0 else ODD


@dataclass(frozen=True)
class MatrixPolynomial:
    """Monic matrix polynomial: coeffs c_0 ... c_deg with c_deg = I."""

    coeffs: tuple
    parity: str = None

    def __post_init__(self):
        if not self.coeffs:
            raise PatternViolation("empty coefficient list")
        if not self.coeffs[-1].is_identity():
            raise PatternViolation("leading coefficient must be the identity")
        if self.parity == EVEN and self.degree % 2 != 0:
            raise PatternViolation("even parity requires even degree")
        if self.parity == ODD and self.degree % 2 != 1:
            raise PatternViolation("odd parity requires odd degree")
        if self.parity in (EVEN, ODD):
            want = 0 if self.parity == EVEN else 1
            for k, c in enumerate(self.coeffs):
                if k % 2 != want and not c.is_zero():
                    raise PatternViolation(f"coefficient {k} breaks {self.parity} parity")

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def n(self):
        return self.coeffs[0].n

    @property
    def mode(self):
        return self.coeffs[0].mode

    def coeff(self, k):
        return self.coeffs[k] if k < len(self.coeffs) else BlockEntry.zero(self.n, self.mode)

    def evaluate(self, z):
        """Horner evaluation at a scalar point."""
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc.scale(z) + c
        return acc


def evaluate(p: MatrixPolynomial, z) -> BlockEntry:
    return p.evaluate(z)


def monomial(k, n, mode=RATIONAL) -> MatrixPolynomial:
    """z^k times the identity block."""
    coeffs = [BlockEntry.zero(n, mode) for _ in range(k)] + [BlockEntry.identity(n, mode)]
    return MatrixPolynomial(tuple(coeffs), parity=EVEN if k % 2 == 0 else ODD)


@dataclass(frozen=True)
class PolynomialFamily:
    """Families p_k, q_k plus the pairing normalizations.

    ``d_pairs`` holds (d_{2j,2j+1}, d_{2j+1,2j}) for checkerboard
    factorizations; ``d_diag`` holds the diagonal blocks when the family comes
    from a strictly diagonal factorization (the shifted matrix).
    """

    p: tuple
    q: tuple
    d_pairs: tuple = ()
    d_diag: tuple = ()

    @property
    def size(self):
        return len(self.p)

    @property
    def n(self):
        return self.p[0].n

    @property
    def mode(self):
        return self.p[0].mode


def _rows_to_polys(mat: BlockMatrix):
    out = []
    for k in range(mat.rows):
        coeffs = tuple(mat.block(k, j) for j in range(k + 1))
        out.append(MatrixPolynomial(coeffs, parity=_detect_parity(coeffs)))
    return tuple(out)


def polys_from_factorization(f) -> PolynomialFamily:
    """Read the families off the rows of L1 and L2."""
    p = _rows_to_polys(f.l1)
    q = _rows_to_polys(f.l2)
    if isinstance(f, Factorization):
        pairs = tuple(f.d_pair(l) for l in range(f.levels))
        return PolynomialFamily(p=p, q=q, d_pairs=pairs)
    return PolynomialFamily(p=p, q=q, d_diag=tuple(f.d))


def family_matrix(polys, size, n, mode) -> BlockMatrix:
    """Pack polynomial coefficients back into a unit lower triangular matrix."""
    mat = BlockMatrix.identity(size, n, mode)
    for k, poly in enumerate(polys[:size]):
        for j in range(poly.degree):
            mat = mat.with_block(k, j, poly.coeff(j))
    return mat


def pairing(a: MatrixPolynomial, b: MatrixPolynomial, g: CheckerboardGram) -> BlockEntry:
    """<a, b> = sum_{k,l} a_k m_{k,l} b_l^T over the Gram truncation."""
    if a.degree + 1 > g.m or b.degree + 1 > g.m:
        raise OutOfRange(
            f"degrees ({a.degree}, {b.degree}) exceed Gram truncation {g.m}")
    acc = BlockEntry.zero(g.n, g.mode)
    for k in range(a.degree + 1):
        ak = a.coeff(k)
        if ak.is_zero():
            continue
        for l in range(b.degree + 1):
            bl = b.coeff(l)
            mkl = g.entry(k, l)
            if bl.is_zero() or mkl.is_zero():
                continue
            acc = acc + ak * mkl * bl.transpose()
    return acc


def pairing_grid(fam: PolynomialFamily, g: CheckerboardGram) -> BlockMatrix:
    """All pairings <p_i, q_j> at once, as L1 M L2^T."""
    l1 = family_matrix(fam.p, g.m, g.n, g.mode)
    l2 = family_matrix(fam.q, g.m, g.n, g.mode)
    return multiply(l1, multiply(g.matrix, l2.transpose()))


def expected_pairing(fam: PolynomialFamily, i, j, n, mode) -> BlockEntry:
    """The delta pattern: d blocks on the antidiagonal pairs, zero elsewhere."""
    if i // 2 == j // 2 and i != j:
        l = i // 2
        return fam.d_pairs[l][0] if i % 2 == 0 else fam.d_pairs[l][1]
    return BlockEntry.zero(n, mode)


def verify_biorthogonality(fam: PolynomialFamily, g: CheckerboardGram,
                           tolerance=1e-10, spot_checks=6) -> Report:
    """Check the full delta pattern of <p_i, q_j> over the truncation.

    The grid is evaluated as L1 M L2^T (identical to the pairing double sum);
    a handful of positions are additionally recomputed through the literal
    double sum so the two paths cross-check each other.
    """
    rep = Report("biorthogonality")
    grid = pairing_grid(fam, g)
    for i in range(g.m):
        for j in range(g.m):
            want = expected_pairing(fam, i, j, g.n, g.mode)
            res = (grid.block(i, j) - want).max_abs()
            rep.check("pairing-delta", res, g.mode, tolerance, indices=(i, j))
    step = max(1, g.m // spot_checks)
    for i in range(0, g.m, step):
        j = (i * 2 + 1) % g.m
        direct = pairing(fam.p[i], fam.q[j], g)
        res = (direct - grid.block(i, j)).max_abs()
        rep.check("pairing-direct-agrees", res, g.mode, tolerance, indices=(i, j))
    return rep


def verify_orthogonality_relations(fam: PolynomialFamily, g: CheckerboardGram,
                                   tolerance=1e-10) -> Report:
    """Pair each p against the monomials.

    <p_{2j}, z^k> vanishes for k <= 2j and equals d_{2j,2j+1} at k = 2j+1;
    <p_{2j+1}, z^k> vanishes for k <= 2j-1 and equals d_{2j+1,2j} at k = 2j.
    """
    rep = Report("orthogonality")
    n, mode = g.n, g.mode
    zero = BlockEntry.zero(n, mode)
    for idx, poly in enumerate(fam.p):
        j = idx // 2
        if idx % 2 == 0:
            upto, at, want = 2 * j, 2 * j + 1, fam.d_pairs[j][0]
        else:
            upto, at, want = 2 * j - 1, 2 * j, fam.d_pairs[j][1]
        for k in range(upto + 1):
            val = pairing(poly, monomial(k, n, mode), g)
            rep.check("monomial-orthogonality", (val - zero).max_abs(), mode,
                      tolerance, indices=(idx, k))
        if at < g.m:
            val = pairing(poly, monomial(at, n, mode), g)
            rep.check("monomial-normalization", (val - want).max_abs(), mode,
                      tolerance, indices=(idx, at))
    return rep


def quasidet_poly(g: CheckerboardGram, k, which="P") -> MatrixPolynomial:
    """Recompute one family member by solving against a condensed matrix.

    For p_{2j} the unknown even coefficients solve a row system against the
    even-odd condensed matrix; p_{2j+1} solves against odd-even.  The q
    members solve the transposed (column) systems, and their coefficient
    blocks are the transposed solutions.  Raises Singular when the condensed
    matrix is not invertible.
    """
    n, mode = g.n, g.mode
    j, odd = k // 2, k % 2 == 1
    if k >= g.m:
        raise OutOfRange(f"index {k} outside truncation {g.m}")
    one = BlockEntry.identity(n, mode)
    zero = BlockEntry.zero(n, mode)
    if j == 0:
        coeffs = [zero] * k + [one]
        return MatrixPolynomial(tuple(coeffs), parity=ODD if odd else EVEN)

    if which.upper() == "P":
        if not odd:
            cond = condensed_eo(g, j).matrix
            rhs = BlockMatrix.from_blocks(
                [[-g.entry(2 * j, 2 * c + 1) for c in range(j)]], mode)
        else:
            cond = condensed_oe(g, j).matrix
            rhs = BlockMatrix.from_blocks(
                [[-g.entry(2 * j + 1, 2 * c) for c in range(j)]], mode)
        sol = solve_left(cond, rhs)
        unknowns = [sol.block(0, c) for c in range(j)]
    else:
        if not odd:
            cond = condensed_oe(g, j).matrix
            rhs = BlockMatrix.from_blocks(
                [[-g.entry(2 * r + 1, 2 * j)] for r in range(j)], mode)
        else:
            cond = condensed_eo(g, j).matrix
            rhs = BlockMatrix.from_blocks(
                [[-g.entry(2 * r, 2 * j + 1)] for r in range(j)], mode)
        sol = multiply(cond.invert(), rhs)
        unknowns = [sol.block(r, 0).transpose() for r in range(j)]

    coeffs = []
    for power in range(k + 1):
        if power == k:
            coeffs.append(one)
        elif power % 2 == (1 if odd else 0):
            coeffs.append(unknowns[power // 2])
        else:
            coeffs.append(zero)
    return MatrixPolynomial(tuple(coeffs), parity=ODD if odd else EVEN)


def hankel_system_poly(s_blocks, j) -> MatrixPolynomial:
    """Monic orthogonal polynomial of a condensed moment sequence.

    Solves the j x j Hankel system sum_r C_r S_{r+l} = -S_{j+l} directly;
    this is the independent oracle the specialization checks compare against.
    """
    blocks = list(s_blocks)
    n, mode = blocks[0].n, blocks[0].mode
    one = BlockEntry.identity(n, mode)
    if j == 0:
        return MatrixPolynomial((one,), parity=EVEN)
    if len(blocks) < 2 * j:
        raise OutOfRange(f"need {2 * j} moments for degree {j}")
    hank = BlockMatrix.from_blocks(
        [[blocks[r + l] for l in range(j)] for r in range(j)], mode)
    rhs = BlockMatrix.from_blocks([[-blocks[j + l] for l in range(j)]], mode)
    sol = solve_left(hank, rhs)
    coeffs = [sol.block(0, r) for r in range(j)] + [one]
    return MatrixPolynomial(tuple(coeffs))


def hankel_norm(s_blocks, poly: MatrixPolynomial) -> BlockEntry:
    """<P_j, t^j> against the condensed moments: sum_r C_r S_{r+j}."""
    blocks = list(s_blocks)
    j = poly.degree
    acc = BlockEntry.zero(poly.n, poly.mode)
    for r in range(j + 1):
        acc = acc + poly.coeff(r) * blocks[r + j]
    return acc


def _shift_up(poly: MatrixPolynomial) -> MatrixPolynomial:
    """Multiply by the variable: coefficients move up one power."""
    zero = BlockEntry.zero(poly.n, poly.mode)
    parity = None
    if poly.parity == EVEN:
        parity = ODD
    elif poly.parity == ODD:
        parity = EVEN
    return MatrixPolynomial((zero,) + poly.coeffs, parity=parity)


def verify_hankel_specialization(fam: PolynomialFamily, s_blocks,
                                 tolerance=1e-10) -> Report:
    """All structural identities special to Hankel symmetry.

    Checks p_{2j+1} = z p_{2j}, q = p, equality of the two d blocks in each
    pair with the condensed norm, and p_{2j}(z) = P_j(z^2) where P_j comes
    from the independent Hankel-system oracle.
    """
    rep = Report("hankel-specialization")
    blocks = list(s_blocks)
    mode = fam.mode
    size = fam.size
    for j in range(size // 2):
        lifted = _shift_up(fam.p[2 * j])
        res = _poly_residual(fam.p[2 * j + 1], lifted)
        rep.check("odd-is-shifted-even", res, mode, tolerance, indices=(2 * j + 1,))
    for k in range(size):
        res = _poly_residual(fam.p[k], fam.q[k])
        rep.check("q-equals-p", res, mode, tolerance, indices=(k,))
    for j in range(size // 2):
        d_eo, d_oe = fam.d_pairs[j]
        rep.check("d-pair-symmetric", (d_eo - d_oe).max_abs(), mode, tolerance, indices=(j,))
        oracle_poly = hankel_system_poly(blocks, j)
        dn = hankel_norm(blocks, oracle_poly)
        rep.check("d-equals-condensed-norm", (d_eo - dn).max_abs(), mode,
                  tolerance, indices=(j,))
        squared = _square_variable(oracle_poly)
        res = _poly_residual(fam.p[2 * j], squared)
        rep.check("even-p-is-condensed-op", res, mode, tolerance, indices=(2 * j,))
    return rep


def _square_variable(poly: MatrixPolynomial) -> MatrixPolynomial:
    """P(t) -> P(z^2): spread coefficients over the even powers."""
    zero = BlockEntry.zero(poly.n, poly.mode)
    coeffs = []
    for c in poly.coeffs:
        coeffs.append(c)
        coeffs.append(zero)
    return MatrixPolynomial(tuple(coeffs[:-1]), parity=EVEN)


def _poly_residual(a: MatrixPolynomial, b: MatrixPolynomial):
    deg = max(a.degree, b.degree)
    res = None
    for k in range(deg + 1):
        diff = (a.coeff(k) - b.coeff(k)).max_abs()
        res = diff if res is None else max(res, diff)
    return res


def poly_residual(a: MatrixPolynomial, b: MatrixPolynomial):
    """Max absolute coefficientwise difference."""
    return _poly_residual(a, b)
