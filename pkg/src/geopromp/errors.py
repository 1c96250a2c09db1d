"""Exception types shared across the package."""


class GeoPrompError(Exception):
    """Base class for all package-specific errors."""


class InvalidArgumentError(GeoPrompError, ValueError):
    """Bad input: mismatched manifolds, degenerate data, malformed files."""


class SingularityError(GeoPrompError, ArithmeticError):
    """Geodesic operation at a point where it is not uniquely defined
    (e.g. log/transport between antipodal sphere points)."""


class ConvergenceError(GeoPrompError, RuntimeError):
    """Iterative solver failed to converge.

    Carries the last iterate so callers can inspect or resume.
    """

    def __init__(self, message, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate
