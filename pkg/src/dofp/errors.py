"""Exception taxonomy shared by all numerical modules.

Argument/domain problems raise :class:`ValueError` subclasses so the CLI can
map them to exit code 2; everything below :class:`NumericalError` maps to
exit code 3.
"""


class DofpError(Exception):
    """Base class for all package-specific errors."""


class DomainError(DofpError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested exactly at a pole (e.g. gamma at -n)."""


class NumericalError(DofpError, ArithmeticError):
    """Base class for runtime numerical failures (exit code 3)."""


class OverflowRangeError(NumericalError):
    """Result (or an intermediate term) exceeds double-precision range.

    Distinct from :class:`DomainError`: the input is mathematically valid,
    the value just cannot be represented.
    """


class ConvergenceError(NumericalError):
    """A series or iteration failed to meet tolerance within its budget."""


class CancellationError(ConvergenceError):
    """Alternating-series digit loss exceeds the requested tolerance.

    Raised instead of returning a silently wrong value; callers with an
    alternative route (transform inversion, convolution form) catch this
    and fall back.
    """


class InversionError(NumericalError):
    """Numerical Laplace inversion diverged or failed its sanity check."""


class QuadratureError(NumericalError):
    """Adaptive quadrature failed to reach the requested accuracy."""


class GridError(NumericalError):
    """Sampled-function operator given a grid too coarse for its tolerance."""


class RouteError(NumericalError):
    """All evaluation routes for an operation failed.

    Carries the per-route diagnostics so the caller can see what was tried.
    """

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class HorizonError(NumericalError):
    """First-passage simulation exhausted its horizon extensions."""
