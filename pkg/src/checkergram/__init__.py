"""Checkerboard Gram matrices: factorization, biorthogonal families, and
their structural identities, in exact rational arithmetic."""

from .errors import (
    CheckergramError,
    InsufficientMoments,
    MissingEntry,
    NonzeroRemainder,
    NotHankel,
    OddTruncation,
    OutOfRange,
    ParseError,
    PatternViolation,
    ShapeMismatch,
    Singular,
    SingularConstantTerm,
    SingularPivot,
    TruncationMismatch,
)
from .linalg import (
    FLOAT,
    RATIONAL,
    BlockEntry,
    BlockMatrix,
    invert,
    invert_antidiagonal_pairs,
    kron,
    multiply,
    schur_complement,
    theta_star,
)
from .gram import (
    CheckerboardGram,
    CondensedGram,
    MomentSequence,
    build_checkerboard,
    condensed_eo,
    condensed_hankel,
    condensed_oe,
    hankel_gram,
    kron_lift,
    lambda_shift,
    shifted_even_truncation,
    unwrap_moments,
)
from .ldu import (
    DiagonalFactorization,
    Factorization,
    factorize_checkerboard,
    generic_ldu,
    hankel_factorize,
    reconstruct,
    validate_factor_patterns,
)
from .polys import (
    MatrixPolynomial,
    PolynomialFamily,
    evaluate,
    hankel_system_poly,
    monomial,
    pairing,
    polys_from_factorization,
    quasidet_poly,
    verify_biorthogonality,
    verify_hankel_specialization,
    verify_orthogonality_relations,
)
from .christoffel import (
    Connector,
    christoffel_transform,
    connector_from_D,
    connector_from_L,
    hat_polys_via_relation,
    verify_connector_action,
    verify_q_side,
)
from .kernels import (
    KernelPolynomial,
    SelectionMatrices,
    abc_matrices,
    abc_representation,
    hankel_kernels,
    hat_kernel,
    kernel,
    verify_kernel_relation,
)
from .report import CheckRecord, Report
from .jobs import JobConfig, ingest, parse_config, run

__all__ = [name for name in dir() if not name.startswith("_")]
