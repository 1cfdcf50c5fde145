"""Exception and warning types shared across the package."""


class NhsshError(Exception):
    """Base class for all package errors."""


class ExceptionalPointError(NhsshError):
    """The Bloch field sits at (or numerically on top of) an exceptional point,
    where the two eigenvectors coalesce and the biorthogonal basis breaks down."""


class SpectrumNotRealError(NhsshError):
    """An operation that requires a fully real quasiparticle spectrum was
    called in the broken regime (|Delta| >= |delta| for the SSH ring)."""


class NonConvergenceError(NhsshError):
    """Doubling the grid changed the result by more than the requested tolerance."""


class StepTooLargeError(NhsshError):
    """The dt/2 step-halving check of the time integrator failed."""


class ZeroNormError(NhsshError):
    """A state with (numerically) zero Dirac norm was passed where a
    normalizable state is required."""


class PacketNotInRingError(NhsshError):
    """A ring-interior diagnostic was requested while the wavepacket is not
    (yet, or anymore) contained in the scattering ring."""


class ProtocolTimingError(NhsshError):
    """The flux protocol contradicts the wavepacket arrival-time estimate."""


class ConfigError(NhsshError):
    """Base class for configuration problems (CLI layer)."""


class ParseError(ConfigError):
    """Config document is not syntactically valid JSON."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


class ValidationError(ConfigError):
    """Config document is well-formed but a field is missing or out of range."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class TailsTruncatedWarning(UserWarning):
    """Gaussian wavepacket tails are not negligible at the segment boundary."""
