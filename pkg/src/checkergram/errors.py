"""Exception types shared across the package."""


class CheckergramError(Exception):
    """Base class for all domain errors raised by this package."""


class ShapeMismatch(CheckergramError):
    """Operands have incompatible dimensions or block orders."""


class Singular(CheckergramError):
    """A matrix that must be invertible is not."""


class PatternViolation(CheckergramError):
    """A structural sparsity or parity constraint is broken."""


class MissingEntry(CheckergramError):
    """A required odd-order Gram entry was not supplied."""


class InsufficientMoments(CheckergramError):
    """The moment sequence is too short for the requested truncation."""


class NotHankel(CheckergramError):
    """A condensed matrix expected to be Hankel is not."""


class OutOfRange(CheckergramError):
    """An index or truncation bound exceeds what the data supports."""


class OddTruncation(CheckergramError):
    """Truncation sizes must be even to keep whole 2x2 block pairs."""


class TruncationMismatch(CheckergramError):
    """Two factorizations do not share a compatible truncation."""


class SingularConstantTerm(CheckergramError):
    """A polynomial constant term that must be invertible is not."""


class NonzeroRemainder(CheckergramError):
    """Exact division by the variable left a nonzero remainder."""


class ParseError(CheckergramError):
    """An input file or request body could not be parsed."""


class SingularPivot(CheckergramError):
    """An elimination pivot is not invertible.

    ``level`` is the block level at which elimination stopped; everything
    computed for earlier levels is valid and, for the structured
    factorization, is carried in ``partial``.
    """

    def __init__(self, level, side="", partial=None):
        self.level = level
        self.side = side
        self.partial = partial
        msg = f"pivot not invertible at block level {level}"
        if side:
            msg += f" ({side})"
        super().__init__(msg)
