"""Exception types shared across the package.

Everything raised on purpose derives from LineCoxError so callers can catch
the whole family at once. The CLI maps subfamilies to exit codes.
"""


class LineCoxError(Exception):
    """Base class for every error this package raises deliberately."""


# ---- parameter validation -------------------------------------------------

class NonFinite(LineCoxError):
    """A numeric input was nan or inf. The message names the field."""


class NegativeIntensity(LineCoxError):
    """An intensity (lambda, mu, or a point density) was negative."""


class ZeroMu(LineCoxError):
    """mu == 0; the on-line point process would be empty and several
    expressions divide by mu."""


class NonPositiveScale(LineCoxError):
    """Scale factor for rescaling must be finite and > 0."""


class NegativeT(LineCoxError):
    """Distance argument t must be >= 0."""


class NonPositiveParameter(LineCoxError):
    """A physical parameter that must be strictly positive was not."""


# ---- sampling / geometry --------------------------------------------------

class NonPositiveRadius(LineCoxError):
    """Clip radius must be > 0."""


class UnknownLine(LineCoxError):
    """A line id was requested that is not part of the realization."""


class TBeyondClip(LineCoxError):
    """A query distance exceeds the sampled clip radius; results there
    would silently miss geometry."""


class PolicyBudgetNegative(LineCoxError):
    """Turn budget k must be >= 0."""


class DegenerateAngles(LineCoxError):
    """Two line angles coincide to within tolerance; the crossing formulas
    divide by sin of their difference."""


class DomainError(LineCoxError):
    """An inverse trig argument fell outside its domain by more than the
    rounding guard."""


# ---- numerics -------------------------------------------------------------

class QuadratureFailure(LineCoxError):
    """An integral could not be evaluated to the requested tolerance.

    Carries the best value and error estimate seen, plus an optional
    location for nested integrands.
    """

    def __init__(self, message, value=None, error_estimate=None, where=None):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate
        self.where = where


class BudgetExhausted(QuadratureFailure):
    """The subdivision budget ran out before the tolerance was met."""


class GridMismatch(LineCoxError):
    """Two curves share no usable common grid."""


class NoBracket(LineCoxError):
    """Root bracketing failed: the requested quantile is not reached below
    the search cap."""
