"""Exception hierarchy for acgb.

Every error raised on purpose by the library derives from :class:`AcgbError`.
The class decides the process exit code used by the command-line driver;
``stage`` is filled in by the pipeline when the error escapes one of its
stages.
"""

from typing import Any, Optional, Tuple


class AcgbError(Exception):
    """Base exception for acgb errors."""

    exit_code = 1

    def __init__(self, message: str, *, stage: Optional[str] = None, data: Any = None):
        self.message = message
        self.stage = stage
        self.data = data
        super().__init__(message)

    def describe(self) -> str:
        """Return the message prefixed with the stage name, if known."""
        if self.stage:
            return f"[{self.stage}] {self.message}"
        return self.message


class ProblemParseError(AcgbError):
    """Raised for malformed problem files."""

    exit_code = 2

    def __init__(self, message: str, line: int = 0, column: int = 0, **kwargs: Any):
        self.line = line
        self.column = column
        if line:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message, **kwargs)


class ProblemError(ProblemParseError):
    """Raised when a well-formed problem file makes no sense (unknown name, ...)."""


class MathDomainError(AcgbError):
    """Raised when the input violates a mathematical precondition."""

    exit_code = 3


class JacobiError(MathDomainError):
    """Raised when a bracket table fails the Jacobi identity."""

    def __init__(self, message: str, witness: Tuple[int, int, int], **kwargs: Any):
        self.witness = witness
        super().__init__(message, **kwargs)


class SingularMatrixError(MathDomainError):
    """Raised for a linear change of variables that is not invertible."""


class SymbolMismatchError(MathDomainError):
    """Raised when a preimage does not have the expected symbol."""


class OrderError(MathDomainError):
    """Raised for orderings an operation cannot work with."""


class DimensionMismatchError(MathDomainError, ValueError):
    """Raised when monomials or polynomials live over different variable counts."""


class ZeroPolynomialError(MathDomainError, ValueError):
    """Raised when an operation needs a nonzero polynomial."""


class VerificationError(MathDomainError):
    """Raised when a computed basis fails its certificate."""

    def __init__(self, message: str, witness: Any = None, **kwargs: Any):
        self.witness = witness
        super().__init__(message, **kwargs)


class ResourceError(AcgbError):
    """Raised when a computation runs out of its configured budget."""

    exit_code = 4


class TermCapExceeded(ResourceError):
    """Raised when a polynomial under reduction grows past the term cap."""


class BasisCapExceeded(ResourceError):
    """Raised when a basis under completion grows past the basis cap."""


class InfiniteUSetError(ResourceError):
    """Raised when a U-set of the lift is infinite.

    A random change of coordinates usually makes the sets finite.
    """

    def __init__(self, message: str, element: Any = None, monomial: Any = None, **kwargs: Any):
        self.element = element
        self.monomial = monomial
        super().__init__(message, **kwargs)
