"""Exception and warning types raised by bezred."""


class BezredError(Exception):
    """Base class for all bezred errors."""


class DomainError(BezredError, ValueError):
    """An argument lies outside the domain of an operation."""


class AssumptionError(DomainError):
    """A reduction problem violates one of the algorithm's assumptions."""


class UnsupportedOrderError(DomainError):
    """Continuity order above 3 was requested."""


class UnsupportedPlotError(BezredError):
    """Plotting was requested for a curve that is not planar."""


class NumericalError(BezredError, ArithmeticError):
    """Base class for numerical failures."""


class IllConditionedError(NumericalError):
    """A Gram matrix could not be factorized.

    ``condition`` carries the estimated 2-norm condition number.
    """

    def __init__(self, message, condition=float("nan")):
        super().__init__(message)
        self.condition = condition


class DegenerateProblemError(NumericalError):
    """The parameter system is singular (e.g. a zero endpoint tangent)."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class DegenerateTangentWarning(UserWarning):
    """An endpoint tangent of the input curve vanishes."""


class ConvergenceWarning(UserWarning):
    """The parameter optimizer stopped before meeting its tolerance."""
