"""Exception and warning types raised by absnorm."""


class SpecError(ValueError):
    """A norm or space description could not be parsed or is invalid.

    ``field`` names the offending entry (dotted path) when known.
    """

    def __init__(self, message, field=None):
        self.field = field
        self.reason = message
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)


class InfinityNormExcluded(ValueError):
    """The operation requires F != max-norm, but F(1,1) = 1."""


class InconsistentNorm(ValueError):
    """F(1,1) classification disagrees with pointwise comparison on the grid."""


class ResolutionExhausted(RuntimeError):
    """Grid refinement hit its cap before the certificate could be closed."""


class EmptySample(RuntimeError):
    """No grid point landed in the requested set."""


class DimensionMismatch(ValueError):
    pass


class SingularMatrix(ValueError):
    pass


class CertificationUnavailable(UserWarning):
    """Emitted when a bracket degrades to a sampling-only estimate."""
