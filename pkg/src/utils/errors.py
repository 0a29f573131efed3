# src/utils/errors.py


class CertError(Exception):
    """Base class for every error raised by this package."""


class RingSpecError(CertError, ValueError):
    """Ring description or Hermitian data (lambda, mu) is invalid."""


class MatrixShapeError(CertError, ValueError):
    """Matrices of different size or over different rings were combined."""


class NotInvertibleError(CertError, ArithmeticError):
    """Determinant (or element) is not a unit."""


class InvalidIndexError(CertError, ValueError):
    """Index outside Theta or violating i != +-j style constraints."""


class FormParameterError(CertError, ValueError):
    """Heisenberg pair outside the required odd form parameter."""


class IdealError(CertError, ValueError):
    """Ideal is not involution invariant, or a pair is not admissible."""


class NotInGroupError(CertError, ValueError):
    """Matrix handed to a group operation is not a member of the group."""


class DecompositionError(CertError, RuntimeError):
    """An internal identity of a decomposition did not hold.

    This signals an implementation bug rather than bad input; the
    message carries the failing quantity.
    """


class VerificationError(CertError):
    """A certificate does not multiply out to its target."""


class MalformedCertificateError(CertError, ValueError):
    """Certificate JSON does not follow the schema."""


INPUT_ERRORS = (
    RingSpecError,
    InvalidIndexError,
    FormParameterError,
    NotInGroupError,
    IdealError,
    MalformedCertificateError,
    MatrixShapeError,
)
