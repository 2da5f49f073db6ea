"""Error types raised across the package. All are ValueError subclasses."""


class NonHermitian(ValueError):
    """Matrix deviates from its conjugate transpose beyond tolerance."""


class TraceNotOne(ValueError):
    """Density matrix trace differs from 1 beyond tolerance."""


class NotPSD(ValueError):
    """Matrix has an eigenvalue below the negativity floor."""


class InvalidState(ValueError):
    """Operand is not an acceptable density matrix for the operation."""


class DimensionMismatch(ValueError):
    """Operand dimensions are incompatible."""


class NotExtendedX(ValueError):
    """Matrix lacks the block-X sparsity pattern."""


class NotXStructured(ValueError):
    """Matrix has entries off its diagonal and anti-diagonal."""


class NotXState(ValueError):
    """State is not X-classified."""


class NotTwoQubit(ValueError):
    """Operation requires a 4x4 two-qubit state."""


class UnsupportedTag(ValueError):
    """Structure tag has no defined parameter count."""


class BadSpec(ValueError):
    """Named-state specifier could not be interpreted."""


class ConstraintViolated(ValueError):
    """Input parameters break a required algebraic constraint."""


class ParseError(ValueError):
    """Input file could not be parsed."""
