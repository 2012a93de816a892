"""Exception hierarchy.  The CLI maps these onto exit codes."""


class SuitaError(Exception):
    pass


class ParameterError(SuitaError, ValueError):
    """A parameter lies outside its admissible range (m < 1/2, b out of range, ...)."""


class DomainError(SuitaError, ValueError):
    """A point lies on or outside the domain, or outside a chart's parameter region."""


class ConstraintError(SuitaError, ValueError):
    """Geodesic data violates its algebraic constraints."""


class GeometryError(SuitaError, RuntimeError):
    """A sampled boundary curve is not a simple monotone arc."""


class ConvergenceError(SuitaError, RuntimeError):
    """Numerical iteration did not reach the requested tolerance.

    ``partial`` holds the best value obtained and ``err_est`` its error estimate.
    """

    def __init__(self, message, partial=None, err_est=None):
        super().__init__(message)
        self.partial = partial
        self.err_est = err_est


class CoverageError(SuitaError, RuntimeError):
    """Too many sampled directions had no boundary-chart solution."""

    def __init__(self, message, failed=0, total=0):
        super().__init__(message)
        self.failed = failed
        self.total = total
