class PrecisionEnvelopeError(ValueError):
    """Requested point lies outside the validity envelope of the active precision backend."""


class ConvergenceError(ArithmeticError):
    """An iterative numerical procedure failed to reach its tolerance."""


class RegimeError(ValueError):
    """An asymptotic formula was asked for a point outside its regime."""
