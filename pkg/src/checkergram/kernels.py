"""Christoffel-Darboux kernel polynomials and their matrix representations.

The kernels of a checkerboard family pair even p's with odd q's and vice
versa:

    K[2n](z, w)   = sum_{j<=n} q_{2j+1}^T(w) d_{2j,2j+1}^{-1} p_{2j}(z)
    K[2n+1](z, w) = sum_{j<=n} q_{2j}^T(w)   d_{2j+1,2j}^{-1} p_{2j+1}(z)

while the shifted family's kernels use its diagonal normalizations:

    K^[2n]   = sum q^_{2j}^T   d^_{2j,2j}^{-1}     p^_{2j}
    K^[2n+1] = sum q^_{2j+1}^T d^_{2j+1,2j+1}^{-1} p^_{2j+1}.

The two levels are linked by

    K[2n]   = z K^[2n+1] - q^_{2n+1}^T(w) d^_{2n+1,2n+1}^{-1} p_{2n+2}(z)
    K[2n+1] = z K^[2n].

Every kernel also has a closed matrix representation (the sandwich form):
with the selector matrices

    Theta = pairwise block swap (Theta^{-1} = Theta^T),
    Pi_e  = diagonal selector of even positions,
    Pi_o  = diagonal selector of odd positions,

and D_e = diag(d_{0,1}, d_{1,0}, ..., d_{2n,2n+1}, d_{2n+1,2n}) Theta,
D_o = Theta diag(d_{1,0}, d_{0,1}, ..., d_{2n+1,2n}, d_{2n,2n+1}),

    K[2n]   = X^T(w) Pi_o (L1^{-1} D_e L2^{-T})^{-1} Pi_e X(z)
    K[2n+1] = X^T(w) Pi_e (L1^{-1} D_o L2^{-T})^{-1} Pi_o X(z)

where X is the monomial block vector and every factor is truncated to
2n + 2 block rows.  The sandwich must reproduce the defining sums exactly;
that equality is the representation identity being checked.

Kernels are stored as dense bivariate coefficient tensors: entry (a, b) is
the block multiplying w^a z^b, padded square to 2n + 2 per variable.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import OutOfRange
from .gram import CheckerboardGram
from .ldu import Factorization
from .linalg import BlockEntry, BlockMatrix, multiply
from .polys import PolynomialFamily
from .report import Report

EVEN = "even"
ODD = "odd"


@dataclass(frozen=True)
class KernelPolynomial:
    """Bivariate kernel: tensor (a, b) multiplies w^a z^b."""

    order: int
    tensor: tuple
    terms: tuple = ()

    @property
    def size(self):
        return len(self.tensor)

    @property
    def n(self):
        return self.tensor[0][0].n

    @property
    def mode(self):
        return self.tensor[0][0].mode

    def coeff(self, a, b):
        if a < len(self.tensor) and b < len(self.tensor[a]):
            return self.tensor[a][b]
        return BlockEntry.zero(self.n, self.mode)

    def evaluate(self, z, w):
        acc = BlockEntry.zero(self.n, self.mode)
        wp = 1
        for a in range(self.size):
            zp = 1
            for b in range(self.size):
                blk = self.tensor[a][b]
                if not blk.is_zero():
                    acc = acc + blk.scale(wp * zp)
                zp = zp * z
            wp = wp * w
        return acc

    def evaluate_terms(self, z, w):
        acc = BlockEntry.zero(self.n, self.mode)
        for qpoly, middle, ppoly in self.terms:
            acc = acc + qpoly.evaluate(w).transpose() * middle * ppoly.evaluate(z)
        return acc


@dataclass(frozen=True)
class SelectionMatrices:
    """Theta (pairwise swap permutation) and the even/odd column selectors."""

    theta: BlockMatrix
    pi_e: BlockMatrix
    pi_o: BlockMatrix


def _tensor_from_terms(terms, size, n, mode):
    rows = []
    for a in range(size):
        row = []
        for b in range(size):
            acc = BlockEntry.zero(n, mode)
            for qpoly, middle, ppoly in terms:
                qa = qpoly.coeff(a) if a <= qpoly.degree else None
                pb = ppoly.coeff(b) if b <= ppoly.degree else None
                if qa is None or pb is None or qa.is_zero() or pb.is_zero():
                    continue
                acc = acc + qa.transpose() * middle * pb
            row.append(acc)
        rows.append(tuple(row))
    return tuple(rows)


def kernel(fam: PolynomialFamily, parity, nmax) -> KernelPolynomial:
    """Defining-sum kernel K[2n] (parity "even") or K[2n+1] (parity "odd")."""
    if nmax < 0:
        raise OutOfRange("kernel index bound must be nonnegative")
    if fam.size < 2 * nmax + 2:
        raise OutOfRange(
            f"family of size {fam.size} cannot form kernels at n = {nmax}")
    terms = []
    for j in range(nmax + 1):
        d_eo, d_oe = fam.d_pairs[j]
        if parity == EVEN:
            terms.append((fam.q[2 * j + 1], d_eo.inv(), fam.p[2 * j]))
        else:
            terms.append((fam.q[2 * j], d_oe.inv(), fam.p[2 * j + 1]))
    size = 2 * nmax + 2
    order = 2 * nmax if parity == EVEN else 2 * nmax + 1
    tensor = _tensor_from_terms(terms, size, fam.n, fam.mode)
    return KernelPolynomial(order=order, tensor=tensor, terms=tuple(terms))


def hat_kernel(hat_fam: PolynomialFamily, parity, nmax) -> KernelPolynomial:
    """Kernels of the shifted family, with diagonal middles."""
    if nmax < 0:
        raise OutOfRange("kernel index bound must be nonnegative")
    if hat_fam.size < 2 * nmax + 2:
        raise OutOfRange(
            f"shifted family of size {hat_fam.size} cannot form kernels at n = {nmax}")
    terms = []
    for j in range(nmax + 1):
        if parity == EVEN:
            terms.append((hat_fam.q[2 * j], hat_fam.d_diag[2 * j].inv(), hat_fam.p[2 * j]))
        else:
            terms.append((hat_fam.q[2 * j + 1], hat_fam.d_diag[2 * j + 1].inv(),
                          hat_fam.p[2 * j + 1]))
    size = 2 * nmax + 2
    order = 2 * nmax if parity == EVEN else 2 * nmax + 1
    tensor = _tensor_from_terms(terms, size, hat_fam.n, hat_fam.mode)
    return KernelPolynomial(order=order, tensor=tensor, terms=tuple(terms))


def tensor_residual(a: KernelPolynomial, b: KernelPolynomial):
    size = max(a.size, b.size)
    res = None
    for i in range(size):
        for j in range(size):
            diff = (a.coeff(i, j) - b.coeff(i, j)).max_abs()
            res = diff if res is None else max(res, diff)
    return res


def shift_z(k: KernelPolynomial) -> KernelPolynomial:
    """Multiply a kernel by z: the z-power index moves up by one."""
    n, mode = k.n, k.mode
    size = k.size + 1
    zero = BlockEntry.zero(n, mode)
    rows = []
    for a in range(size):
        row = [zero]
        for b in range(size - 1):
            row.append(k.coeff(a, b))
        rows.append(tuple(row))
    return KernelPolynomial(order=k.order + 1, tensor=tuple(rows))


def shift_w(k: KernelPolynomial) -> KernelPolynomial:
    """Multiply a kernel by w: the w-power index moves up by one."""
    n, mode = k.n, k.mode
    size = k.size + 1
    zero = BlockEntry.zero(n, mode)
    rows = [tuple(zero for _ in range(size))]
    for a in range(size - 1):
        rows.append(tuple([k.coeff(a, b) for b in range(size)]))
    return KernelPolynomial(order=k.order + 1, tensor=tuple(rows))


def verify_kernel_relation(k_even: KernelPolynomial, k_hat_odd: KernelPolynomial,
                           hat_fam: PolynomialFamily, fam: PolynomialFamily,
                           nn, tolerance=1e-10) -> Report:
    """Both identities tying level-[2n] kernels to the shifted level."""
    rep = Report("kernel-relation")
    mode = fam.mode
    if fam.size < 2 * nn + 3:
        raise OutOfRange(f"need family index {2 * nn + 2} for the relation at n = {nn}")
    qh = hat_fam.q[2 * nn + 1]
    dh_inv = hat_fam.d_diag[2 * nn + 1].inv()
    p_top = fam.p[2 * nn + 2]
    correction = _tensor_from_terms([(qh, dh_inv, p_top)],
                                    max(2 * nn + 3, k_even.size), fam.n, mode)
    zk = shift_z(k_hat_odd)
    size = max(zk.size, len(correction))
    res = None
    for a in range(size):
        for b in range(size):
            corr = correction[a][b] if a < len(correction) and b < len(correction) \
                else BlockEntry.zero(fam.n, mode)
            diff = (k_even.coeff(a, b) - (zk.coeff(a, b) - corr)).max_abs()
            res = diff if res is None else max(res, diff)
    rep.check("even-kernel-vs-shift", res, mode, tolerance, indices=(2 * nn,))

    k_odd = kernel(fam, ODD, nn)
    k_hat_even = hat_kernel(hat_fam, EVEN, nn)
    res2 = tensor_residual(k_odd, shift_z(k_hat_even))
    rep.check("odd-kernel-vs-shift", res2, mode, tolerance, indices=(2 * nn + 1,))
    return rep


def abc_matrices(nmax, n, mode) -> SelectionMatrices:
    """Selector trio at truncation 2 * nmax + 2."""
    size = 2 * nmax + 2
    one = BlockEntry.identity(n, mode)
    theta = BlockMatrix.zero(size, size, n, mode)
    for l in range(size // 2):
        theta = theta.with_block(2 * l, 2 * l + 1, one)
        theta = theta.with_block(2 * l + 1, 2 * l, one)
    pi_e = BlockMatrix.zero(size, size, n, mode)
    pi_o = BlockMatrix.zero(size, size, n, mode)
    for i in range(size):
        if i % 2 == 0:
            pi_e = pi_e.with_block(i, i, one)
        else:
            pi_o = pi_o.with_block(i, i, one)
    return SelectionMatrices(theta=theta, pi_e=pi_e, pi_o=pi_o)


def abc_representation(f: Factorization, g: CheckerboardGram, parity, nmax) -> KernelPolynomial:
    """Sandwich-form kernel; must equal the defining sum exactly."""
    size = 2 * nmax + 2
    if nmax < 0 or size > f.m:
        raise OutOfRange(f"truncation {size} unavailable at m = {f.m}")
    n, mode = f.n, f.mode
    sel = abc_matrices(nmax, n, mode)
    diag = BlockMatrix.zero(size, size, n, mode)
    for l in range(nmax + 1):
        d_eo, d_oe = f.d_pair(l)
        if parity == EVEN:
            diag = diag.with_block(2 * l, 2 * l, d_eo)
            diag = diag.with_block(2 * l + 1, 2 * l + 1, d_oe)
        else:
            diag = diag.with_block(2 * l, 2 * l, d_oe)
            diag = diag.with_block(2 * l + 1, 2 * l + 1, d_eo)
    l1 = f.l1.truncate(size)
    l2 = f.l2.truncate(size)
    if parity == EVEN:
        middle = multiply(diag, sel.theta)
        selected_left, selected_right = sel.pi_o, sel.pi_e
    else:
        middle = multiply(sel.theta, diag)
        selected_left, selected_right = sel.pi_e, sel.pi_o
    m_mid = multiply(l1.invert(), multiply(middle, l2.invert().transpose()))
    sandwich = multiply(selected_left, multiply(m_mid.invert(), selected_right))
    tensor = tuple(tuple(sandwich.block(a, b) for b in range(size)) for a in range(size))
    order = 2 * nmax if parity == EVEN else 2 * nmax + 1
    return KernelPolynomial(order=order, tensor=tensor)


def hankel_kernels(fam: PolynomialFamily, s_blocks, nmax, tolerance=1e-10) -> Report:
    """Hankel reductions: forward-shift forms and the swap symmetry.

    Under Hankel symmetry q = p and both d blocks of a pair collapse to the
    condensed diagonal, so K[2n] = w * F and K[2n+1] = z * F where
    F(z, w) = sum_{j<=n} p_{2j}^T(w) d~_{jj}^{-1} p_{2j}(z).
    """
    rep = Report("hankel-kernels")
    mode = fam.mode
    for nn in range(nmax + 1):
        terms = [(fam.p[2 * j], fam.d_pairs[j][0].inv(), fam.p[2 * j]) for j in range(nn + 1)]
        base = KernelPolynomial(
            order=2 * nn,
            tensor=_tensor_from_terms(terms, 2 * nn + 2, fam.n, mode))
        k_even = kernel(fam, EVEN, nn)
        k_odd = kernel(fam, ODD, nn)
        rep.check("even-forward-shift", tensor_residual(k_even, shift_w(base)),
                  mode, tolerance, indices=(2 * nn,))
        rep.check("odd-forward-shift", tensor_residual(k_odd, shift_z(base)),
                  mode, tolerance, indices=(2 * nn + 1,))
        size = max(k_even.size, k_odd.size)
        res = None
        for a in range(size):
            for b in range(size):
                diff = (k_even.coeff(b, a) - k_odd.coeff(a, b).transpose()).max_abs()
                res = diff if res is None else max(res, diff)
        rep.check("swap-transpose-symmetry", res, mode, tolerance, indices=(2 * nn,))
    return rep
