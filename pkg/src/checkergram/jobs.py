"""Job configuration, moment-file ingestion, and command dispatch.

Input files are JSON.  Rational scalars are written as exact "p/q" strings
(plain integers also parse); matrices are row-major nested arrays.  Exactly
one payload key must be present:

    condensed_moments   list of blocks S_0, S_1, ...
    unwrapped_moments   list of blocks h_0, h_1, ... with even entries zero
    gram_entries        list of [i, j, block] with i + j odd

Every command returns a Report; domain failures during a run become failed
records rather than crashes.  Payload or schema problems raise ParseError
(or the specific pattern errors) at ingestion time.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass
from fractions import Fraction

from . import christoffel as chr_mod
from . import kernels as ker_mod
from .errors import (
    CheckergramError,
    OddTruncation,
    OutOfRange,
    ParseError,
    PatternViolation,
    SingularPivot,
)
from .gram import (
    MomentSequence,
    build_checkerboard,
    condensed_hankel,
    hankel_gram,
    kron_lift,
    unwrap_moments,
)
from .ldu import (
    factorize_checkerboard,
    hankel_factorize,
    reconstruct,
    validate_factor_patterns,
)
from .linalg import FLOAT, RATIONAL, BlockEntry, BlockMatrix
from .polys import (
    polys_from_factorization,
    poly_residual,
    quasidet_poly,
    verify_biorthogonality,
    verify_hankel_specialization,
    verify_orthogonality_relations,
)
from .report import Report, format_residual

COMMANDS = ("factorize", "polys", "verify", "christoffel", "kernels", "hankel")


@dataclass
class JobConfig:
    scalar_mode: str
    n: int
    m: int
    payload_kind: str
    payload: object
    tolerance: float = 1e-10
    command: str = "verify"
    nmax: int = None
    emit_matrices: bool = False


def _parse_scalar(x, mode):
    if mode == RATIONAL:
        if isinstance(x, bool) or isinstance(x, float):
            raise ParseError(f"rational mode needs integers or 'p/q' strings, got {x!r}")
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            try:
                return Fraction(x)
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"bad rational literal {x!r}") from exc
        raise ParseError(f"bad rational literal {x!r}")
    try:
        if isinstance(x, str):
            return float(Fraction(x))
        return float(x)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ParseError(f"bad float literal {x!r}") from exc


def _parse_block(x, n, mode) -> BlockEntry:
    if isinstance(x, (int, float, str)):
        if n != 1:
            raise ParseError(f"scalar literal {x!r} for block order {n}")
        return BlockEntry.from_rows([[_parse_scalar(x, mode)]], mode)
    if not isinstance(x, list):
        raise ParseError(f"bad block payload {x!r}")
    if x and all(isinstance(r, list) for r in x):
        if len(x) != n or any(len(r) != n for r in x):
            raise ParseError(f"block must be {n} x {n}")
        return BlockEntry.from_rows(
            [[_parse_scalar(v, mode) for v in r] for r in x], mode)
    if len(x) == n * n:
        rows = [[_parse_scalar(x[i * n + j], mode) for j in range(n)] for i in range(n)]
        return BlockEntry.from_rows(rows, mode)
    raise ParseError(f"flat block needs {n * n} entries, got {len(x)}")


def parse_config(data: dict) -> JobConfig:
    if not isinstance(data, dict):
        raise ParseError("job must be a JSON object")
    mode = data.get("scalar", RATIONAL)
    if mode not in (RATIONAL, FLOAT):
        raise ParseError(f"unknown scalar mode {mode!r}")
    try:
        n = int(data["n"])
        m = int(data["m"])
    except (KeyError, ValueError, TypeError) as exc:
        raise ParseError("job needs integer fields 'n' and 'm'") from exc
    if n < 1:
        raise ParseError(f"block order must be >= 1, got {n}")
    if m % 2 != 0 or m <= 0:
        raise OddTruncation(f"truncation must be even and positive, got {m}")
    tolerance = float(data.get("tolerance", 1e-10))
    if tolerance <= 0:
        raise ParseError("tolerance must be positive")

    kinds = [k for k in ("condensed_moments", "unwrapped_moments", "gram_entries")
             if k in data]
    if len(kinds) != 1:
        raise ParseError("exactly one payload key must be present")
    kind = kinds[0]
    raw = data[kind]
    if not isinstance(raw, list):
        raise ParseError(f"{kind} must be a list")
    if kind == "gram_entries":
        payload = []
        for item in raw:
            if not (isinstance(item, list) and len(item) == 3):
                raise ParseError("gram_entries items are [i, j, block]")
            i, j, blk = int(item[0]), int(item[1]), _parse_block(item[2], n, mode)
            if (i + j) % 2 == 0 and not blk.is_zero():
                raise PatternViolation(f"nonzero entry at even-order position ({i}, {j})")
            payload.append((i, j, blk))
    else:
        payload = [_parse_block(b, n, mode) for b in raw]
        if kind == "unwrapped_moments":
            for k, blk in enumerate(payload):
                if k % 2 == 0 and not blk.is_zero():
                    raise PatternViolation(f"h_{k} must be zero at an even index")

    command = data.get("command", "verify")
    if command not in COMMANDS:
        raise ParseError(f"unknown command {command!r}")
    nmax = data.get("nmax")
    if nmax is not None:
        nmax = int(nmax)
    return JobConfig(
        scalar_mode=mode, n=n, m=m, payload_kind=kind, payload=payload,
        tolerance=tolerance, command=command, nmax=nmax,
        emit_matrices=bool(data.get("emit_matrices", False)),
    )


def ingest(path) -> JobConfig:
    """Read and validate a job file."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return parse_config(data)


def build_inputs(config: JobConfig):
    """(CheckerboardGram, condensed moment blocks or None)."""
    if config.payload_kind == "condensed_moments":
        s_blocks = list(config.payload)
        gram = hankel_gram(unwrap_moments(s_blocks, config.n), config.m)
        return gram, s_blocks
    if config.payload_kind == "unwrapped_moments":
        h = MomentSequence(config.n, tuple(config.payload), unwrapped=True)
        gram = hankel_gram(h, config.m)
        s_blocks = [config.payload[k] for k in range(1, len(config.payload), 2)]
        return gram, s_blocks
    gram = build_checkerboard(config.payload, config.n, config.m)
    return gram, None


def serialize_block(blk: BlockEntry):
    return [[format_residual(v, blk.mode) for v in row] for row in blk.data]


def serialize_matrix(mat: BlockMatrix):
    return [[serialize_block(mat.block(i, j)) for j in range(mat.cols)]
            for i in range(mat.rows)]


def serialize_polys(polys):
    return [[serialize_block(p.coeff(k)) for k in range(p.degree + 1)] for p in polys]


def serialize_tensor(k: ker_mod.KernelPolynomial):
    return [[serialize_block(k.coeff(a, b)) for b in range(k.size)]
            for a in range(k.size)]


def _default_nmax(config: JobConfig):
    top = config.m // 2 - 1
    if config.nmax is None:
        return top
    return min(config.nmax, top)


def _try_factorize(rep: Report, gram):
    try:
        fact = factorize_checkerboard(gram)
    except SingularPivot as exc:
        rep.add("factorize", indices=(exc.level,), passed=False,
                detail=f"SingularPivot at level {exc.level} ({exc.side})")
        return None
    rep.add("factorize", passed=True, detail=f"levels {fact.levels}")
    return fact


def cmd_factorize(config: JobConfig, gram, s_blocks) -> Report:
    rep = Report("factorize")
    fact = _try_factorize(rep, gram)
    if fact is None:
        return rep
    res = reconstruct(fact).residual(gram.matrix)
    rep.check("reconstruction", res, gram.mode, config.tolerance)
    bad = validate_factor_patterns(fact)
    rep.add("factor-patterns", passed=not bad,
            detail="; ".join(f"{b[0]}({b[1]},{b[2]}): {b[3]}" for b in bad))
    if config.emit_matrices:
        rep.matrices = {
            "l1": serialize_matrix(fact.l1),
            "d": serialize_matrix(fact.d),
            "l2": serialize_matrix(fact.l2),
            "h": serialize_matrix(fact.h),
        }
    return rep


def cmd_polys(config: JobConfig, gram, s_blocks) -> Report:
    rep = Report("polys")
    fact = _try_factorize(rep, gram)
    if fact is None:
        return rep
    fam = polys_from_factorization(fact)
    for k in range(gram.m):
        for which, family in (("P", fam.p), ("Q", fam.q)):
            try:
                alt = quasidet_poly(gram, k, which)
            except CheckergramError as exc:
                rep.add("quasidet-route", indices=(k,), passed=False, detail=str(exc))
                continue
            res = poly_residual(family[k], alt)
            rep.check(f"route-equality-{which}", res, gram.mode,
                      config.tolerance, indices=(k,))
    for k, p in enumerate(fam.p):
        rep.add("monic-parity", indices=(k,),
                passed=p.parity is not None and p.degree == k,
                detail=f"parity={p.parity}")
    if config.emit_matrices:
        rep.matrices = {"p": serialize_polys(fam.p), "q": serialize_polys(fam.q)}
    return rep


def cmd_verify(config: JobConfig, gram, s_blocks) -> Report:
    rep = Report("verify")
    fact = _try_factorize(rep, gram)
    if fact is None:
        return rep
    fam = polys_from_factorization(fact)
    bad = validate_factor_patterns(fact)
    rep.add("factor-patterns", passed=not bad,
            detail="; ".join(f"{b[0]}({b[1]},{b[2]}): {b[3]}" for b in bad))
    for k, p in enumerate(fam.p):
        rep.add("monic-parity", indices=(k,),
                passed=p.parity is not None and p.degree == k,
                detail=f"parity={p.parity}")
    rep.extend(verify_biorthogonality(fam, gram, config.tolerance))
    rep.extend(verify_orthogonality_relations(fam, gram, config.tolerance))
    return rep


def cmd_christoffel(config: JobConfig, gram, s_blocks) -> Report:
    rep = Report("christoffel")
    fact = _try_factorize(rep, gram)
    if fact is None:
        return rep
    fam = polys_from_factorization(fact)
    try:
        mhat, hat_fact = chr_mod.christoffel_transform(gram)
    except SingularPivot as exc:
        rep.add("christoffel-factorize", indices=(exc.level,), passed=False,
                detail=f"SingularPivot at level {exc.level}")
        return rep
    except OutOfRange as exc:
        rep.add("christoffel-factorize", passed=False, detail=str(exc))
        return rep
    rep.add("christoffel-factorize", passed=True, detail=f"size {hat_fact.size}")
    res = reconstruct(hat_fact).residual(mhat)
    rep.check("shift-reconstruction", res, gram.mode, config.tolerance)

    try:
        conn_l = chr_mod.connector_from_L(fact, hat_fact)
        conn_d = chr_mod.connector_from_D(fact, hat_fact)
    except CheckergramError as exc:
        rep.add("connector", passed=False, detail=str(exc))
        return rep
    rep.check("connector-route-equality",
              conn_l.sigma.residual(conn_d.sigma), gram.mode, config.tolerance)

    hat_fam = polys_from_factorization(hat_fact)
    rep.extend(chr_mod.verify_connector_action(conn_l, fam, hat_fam, config.tolerance))
    try:
        hat_rel = chr_mod.hat_polys_via_relation(fam, upto=gram.m - 3)
        rep.extend(chr_mod.verify_hat_route_equality(hat_rel, hat_fam, config.tolerance))
    except CheckergramError as exc:
        rep.add("hat-route-equality", passed=False, detail=str(exc))
    rep.extend(chr_mod.verify_q_side(fam, hat_fam, conn_l, config.tolerance))
    if config.emit_matrices:
        rep.matrices = {
            "m_hat": serialize_matrix(mhat),
            "sigma": serialize_matrix(conn_l.sigma),
            "d_hat": serialize_matrix(hat_fact.d_matrix()),
        }
    return rep


def cmd_kernels(config: JobConfig, gram, s_blocks) -> Report:
    rep = Report("kernels")
    fact = _try_factorize(rep, gram)
    if fact is None:
        return rep
    fam = polys_from_factorization(fact)
    nmax = _default_nmax(config)
    tensors = {}
    for nn in range(nmax + 1):
        k_even = ker_mod.kernel(fam, ker_mod.EVEN, nn)
        k_odd = ker_mod.kernel(fam, ker_mod.ODD, nn)
        tensors[f"kernel_even_{nn}"] = serialize_tensor(k_even)
        tensors[f"kernel_odd_{nn}"] = serialize_tensor(k_odd)
        abc_even = ker_mod.abc_representation(fact, gram, ker_mod.EVEN, nn)
        abc_odd = ker_mod.abc_representation(fact, gram, ker_mod.ODD, nn)
        rep.check("abc-equality-even", ker_mod.tensor_residual(k_even, abc_even),
                  gram.mode, config.tolerance, indices=(2 * nn,))
        rep.check("abc-equality-odd", ker_mod.tensor_residual(k_odd, abc_odd),
                  gram.mode, config.tolerance, indices=(2 * nn + 1,))

    try:
        _, hat_fact = chr_mod.christoffel_transform(gram)
        hat_fam = polys_from_factorization(hat_fact)
    except SingularPivot as exc:
        rep.add("kernel-relation-scope", passed=True,
                detail=f"skipped: shift not quasi-definite (SingularPivot level {exc.level})")
        hat_fam = None
    except OutOfRange as exc:
        rep.add("kernel-relation-scope", passed=True, detail=f"skipped: {exc}")
        hat_fam = None
    if hat_fam is not None:
        relation_top = min(nmax, (gram.m - 3) // 2, (hat_fam.size - 2) // 2)
        for nn in range(relation_top + 1):
            k_even = ker_mod.kernel(fam, ker_mod.EVEN, nn)
            k_hat_odd = ker_mod.hat_kernel(hat_fam, ker_mod.ODD, nn)
            rep.extend(ker_mod.verify_kernel_relation(
                k_even, k_hat_odd, hat_fam, fam, nn, config.tolerance))
    rep.matrices = tensors
    return rep


def cmd_hankel(config: JobConfig, gram, s_blocks) -> Report:
    if s_blocks is None:
        raise ParseError("the hankel command needs a moment payload")
    rep = Report("hankel")
    fact = _try_factorize(rep, gram)
    if fact is None:
        return rep
    fam = polys_from_factorization(fact)
    rep.extend(verify_hankel_specialization(fam, s_blocks, config.tolerance))
    nmax = _default_nmax(config)
    rep.extend(ker_mod.hankel_kernels(fam, s_blocks, nmax, config.tolerance))
    try:
        lifted = hankel_factorize(s_blocks, gram.m)
    except SingularPivot as exc:
        rep.add("kronecker-route", indices=(exc.level,), passed=False,
                detail=f"SingularPivot at level {exc.level}")
        return rep
    for name, a, b in (("l1", lifted.l1, fact.l1), ("l2", lifted.l2, fact.l2),
                       ("d", lifted.d, fact.d)):
        rep.check(f"kronecker-route-{name}", a.residual(b), gram.mode, config.tolerance)
    lifted_gram = kron_lift(condensed_hankel(s_blocks, gram.m // 2))
    rep.check("kronecker-lift-gram", lifted_gram.matrix.residual(gram.matrix),
              gram.mode, config.tolerance)
    return rep


_DISPATCH = {
    "factorize": cmd_factorize,
    "polys": cmd_polys,
    "verify": cmd_verify,
    "christoffel": cmd_christoffel,
    "kernels": cmd_kernels,
    "hankel": cmd_hankel,
}


def run(config: JobConfig) -> Report:
    """Execute one job and return its report."""
    start = time.monotonic()
    handler = _DISPATCH.get(config.command)
    if handler is None:
        raise ParseError(f"unknown command {config.command!r}")
    rep = Report(config.command)
    try:
        gram, s_blocks = build_inputs(config)
    except ParseError:
        raise
    except CheckergramError as exc:
        rep.add("input-construction", passed=False, detail=str(exc))
        rep.elapsed = time.monotonic() - start
        return rep
    try:
        rep = handler(config, gram, s_blocks)
    except ParseError:
        raise
    except CheckergramError as exc:
        rep.add("command-error", passed=False, detail=str(exc))
    rep.elapsed = time.monotonic() - start
    return rep
