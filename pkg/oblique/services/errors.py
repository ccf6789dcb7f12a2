"""
Exceptions raised by the operator services.

Every failure the toolkit can signal derives from ObliqueError so that the CLI
and the HTTP app can map the whole family with a single handler.
"""


class ObliqueError(Exception):
    """Base class for all analysis errors."""


class ConvergenceFailure(ObliqueError):
    """An iterative decomposition (SVD, eigensolver) did not converge."""


class NotFinite(ObliqueError):
    pass


class ShapeMismatch(ObliqueError):
    pass


class AmbientMismatch(ObliqueError):
    """Two subspaces (or a subspace and an operator) live in different spaces."""


class NotHermitian(ObliqueError):
    pass


class NotPositive(ObliqueError):
    """The operator has an eigenvalue below the PSD cutoff."""

    def __init__(self, min_eigenvalue: float, threshold: float):
        self.min_eigenvalue = min_eigenvalue
        self.threshold = threshold
        super().__init__(
            f"operator is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e} < {threshold:.3e})"
        )


class NotInvertible(ObliqueError):
    pass


class NotIdempotent(ObliqueError):
    pass


class NotHermitianProjection(ObliqueError):
    pass


class RangeNotIncluded(ObliqueError):
    """Douglas condition R(B) ⊆ R(A) fails.

    `borderline` is set when the residual lies within ten times the threshold.
    """

    def __init__(self, residual: float, threshold: float):
        self.residual = residual
        self.threshold = threshold
        self.borderline = residual <= 10 * threshold
        note = " (borderline)" if self.borderline else ""
        super().__init__(
            f"range not included: residual {residual:.3e} exceeds {threshold:.3e}{note}"
        )


class NotCompatible(ObliqueError):
    pass


class RangeMismatch(ObliqueError):
    pass


class VerificationFailure(ObliqueError):
    """A built-in cross-check between independent computations disagreed."""


class ParseError(ObliqueError):
    def __init__(self, message: str, source: str, line: int, column: int = 1):
        self.source = source
        self.line = line
        self.column = column
        super().__init__(f"{source}:{line}:{column}: {message}")


class UsageError(ObliqueError):
    pass
