"""Exception types shared across the library."""


class WavemixError(Exception):
    """Base class for all library errors."""


class GridError(WavemixError):
    """Invalid grid construction parameters."""


class TailContaminationError(WavemixError):
    """A field carries too much mass at the truncated boundary for the
    requested operation to be trustworthy."""


class ResolutionError(WavemixError):
    """Rescaling clipped a non-negligible amount of mass outside the domain."""


class DomainError(WavemixError):
    """Input violates a mathematical domain requirement (negative Burgers
    data, non-positive Cole-Hopf field, time out of range)."""


class MeanZeroError(WavemixError):
    """An operation that requires mean-zero input received data with mass."""


class BlowUpError(WavemixError):
    """A time integration produced norms beyond the blow-up threshold."""


class NewtonError(WavemixError):
    """Newton iteration failed to converge or hit a singular Jacobian."""


class ConfigError(WavemixError):
    """Invalid run configuration (unknown key, type mismatch, constraint)."""
