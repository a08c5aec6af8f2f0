"""Exception hierarchy shared by all modules."""


class FracPlasmaError(Exception):
    """Base class for every error raised by this package."""


class DomainError(FracPlasmaError, ValueError):
    """An argument lies outside the supported domain of an operation."""


class PoleError(FracPlasmaError, ArithmeticError):
    """A function or integrand is evaluated at (or across) a pole."""


class ConvergenceError(FracPlasmaError, ArithmeticError):
    """An iterative method exhausted its budget before reaching tolerance."""


class QuadratureError(ConvergenceError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class MaxPeriodsError(ConvergenceError):
    """The oscillatory integrator ran out of half-periods."""


class TailDivergenceError(ConvergenceError):
    """Half-period contributions of an oscillatory integral do not decay."""


class ResonanceError(FracPlasmaError, ArithmeticError):
    """The linear-response denominator vanishes (Landau resonance)."""


class CaseInvariantError(DomainError):
    """A dispersion case violates its order/frequency constraints."""


class SolvabilityError(DomainError):
    """A power-law symbol falls outside the exponent window with a Green function."""


class AccuracyWarning(UserWarning):
    """A result is returned outside the range where it is accurate."""
