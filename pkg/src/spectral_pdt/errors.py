"""Exception types raised by spectral_pdt."""


class SpectralPdtError(Exception):
    """Base class for library errors."""


class InputError(SpectralPdtError, ValueError):
    """Malformed or out-of-range input."""


class NotBooleanError(InputError):
    """A spectrum does not invert to a +/-1 valued function."""


class UnsupportedNormError(InputError):
    pass


class EmptyPolynomialError(InputError):
    pass


class InvalidTauError(InputError):
    pass


class DimensionTooLargeError(InputError):
    pass


class InconsistentConstraints(InputError):
    """An affine system has no solution."""


class NotFoundError(SpectralPdtError):
    """No constant subspace within the requested co-dimension."""


class InvariantError(SpectralPdtError, AssertionError):
    """An internal invariant failed; indicates a bug, never bad input."""
