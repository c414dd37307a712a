"""Exception hierarchy for ddgate."""

from typing import Optional


class DDGateError(Exception):
    """Base class for every error raised by ddgate."""


class DimensionError(DDGateError, ValueError):
    """Qubit-count or matrix-size mismatch."""


class UnsupportedPulseError(DDGateError, ValueError):
    """Pulse the engine cannot realize (letter outside I, X, Z or non-+1 phase)."""


class NotHermitianError(DDGateError, ValueError):
    """Generator handed to a propagator is not Hermitian."""


class NormalizationError(DDGateError, ValueError):
    """State vector is not unit norm."""


class MisalignedTrajectoryError(DDGateError, ValueError):
    """Noise segments do not line up with the plan's intervals."""


class ConfigError(DDGateError, ValueError):
    """Invalid experiment configuration."""

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(message)
        self.key = key


class VerificationError(DDGateError):
    """One or more symbolic checks failed."""

    def __init__(self, message: str, failures: Optional[list[str]] = None):
        super().__init__(message)
        self.failures = list(failures) if failures else []
