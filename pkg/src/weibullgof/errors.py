"""Exception hierarchy shared by the library and the CLI exit-code mapping."""


class WeibullGofError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(WeibullGofError):
    """Invalid specification, flag, or tuning parameter (CLI exit 64)."""


class DataError(WeibullGofError):
    """Malformed or unusable input data (CLI exit 65)."""


class NumericError(WeibullGofError):
    """Numerical failure: non-convergence, overflow, tolerance miss (CLI exit 70)."""


class EstimationError(NumericError):
    """Maximum-likelihood estimation could not produce a usable fit."""


class InsufficientEventsError(EstimationError):
    """Fewer than two uncensored observations; the Weibull MLE is undefined."""


class DegenerateSampleError(EstimationError):
    """All uncensored observations coincide; the shape estimate diverges."""
