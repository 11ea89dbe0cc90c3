"""Exception types shared across the package."""

from __future__ import annotations


class ImspecError(Exception):
    """Base class for all package errors."""


class PoleAtPoint(ImspecError):
    """Evaluation of a rational function at (or too near) a pole."""

    def __init__(self, point: complex, message: str = ""):
        self.point = point
        super().__init__(message or f"denominator vanishes near z = {point}")


class RootFindingFailed(ImspecError):
    """Simultaneous iteration did not converge; carries partial results."""

    def __init__(self, message: str, partial=None):
        self.partial = partial
        super().__init__(message)


class ExpansionAtPole(ImspecError):
    """Taylor expansion requested at a pole of the function."""


class PoleInDisk(ImspecError):
    """Input has a pole strictly inside the unit disk."""


class NotInRO(ImspecError):
    """Derivative has an on-circle zero of multiplicity >= 2; the simple-zero
    factorization does not exist."""


class Unsupported(ImspecError):
    """No closed form is available for this input."""


class DegenerateInput(ImspecError):
    """Identically-zero derivative or similar degenerate input."""


class BranchTrackingFailed(ImspecError):
    """Continuous-logarithm continuation around the circle failed to close."""

    def __init__(self, defect: float, message: str = ""):
        self.defect = defect
        super().__init__(message or f"branch closure defect {defect:.3e} exceeds tolerance")


class QuadratureBudgetExceeded(ImspecError):
    """Adaptive quadrature exceeded its panel budget."""


class TruncationUnreliable(ImspecError):
    """Series truncation tail bound exceeds the accepted fraction of the sum."""


class InvalidWeight(ImspecError):
    """Weighted-space parameter out of range (alpha <= -1)."""


class UnknownEntry(ImspecError):
    """Catalog lookup for a name that does not exist."""


class FunctionSpecParseError(ImspecError):
    """Command-line function specification could not be parsed."""
