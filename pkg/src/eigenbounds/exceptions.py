"""
Exception hierarchy for eigenbounds
"""
from typing import Optional, Tuple


class EigenboundsError(Exception):
    """Base class for every error raised by the package"""


class ConfigError(EigenboundsError):
    """Invalid run configuration (CLI exit code 2)"""


class NumericalError(EigenboundsError):
    """A computation could not produce a trustworthy number (CLI exit code 3)"""


class DomainError(NumericalError, ValueError):
    """Argument outside the domain of a special function or operation"""


class GeometryError(NumericalError, ValueError):
    """Degenerate nuclear geometry or non-orthogonal transformation"""


class ConvergenceError(NumericalError):
    """Quadrature or iteration did not reach the requested tolerance"""

    def __init__(self, message: str, estimates: Optional[Tuple[float, ...]] = None):
        super().__init__(message)
        self.estimates = estimates


class SingularGramError(NumericalError):
    """Gram matrix numerically singular: the basis is linearly dependent"""

    def __init__(self, message: str, min_eigenvalue: Optional[float] = None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class SymmetryError(NumericalError):
    """Group does not match the geometry or the representation is inconsistent"""


class TempleError(NumericalError):
    """Temple's inequality precondition violated"""
