"""Exception taxonomy shared across the package.

Every error raised on purpose by this package derives from ``IswapddError``
so callers can catch one base class at the CLI boundary.  Exceptions that
originate from a configuration document carry the dotted key path of the
offending entry in ``key``.
"""


class IswapddError(Exception):
    """Base class for all package-specific errors."""


class NonHermitianInput(IswapddError):
    """A matrix that must be Hermitian failed the Hermiticity check."""


class InvalidSpec(IswapddError):
    """A noise or sequence specification is internally inconsistent."""


class DomainError(IswapddError):
    """A closed-form expression was evaluated outside its domain."""


class InsufficientEnsemble(IswapddError):
    """Too few realizations for the requested statistical estimate."""


class InvalidCount(IswapddError):
    """A pulse count that must be a positive even integer is not."""


class TimelineMismatch(IswapddError):
    """Noise paths do not cover the evolution window of the schedule."""


class TrajectoryFailure(IswapddError):
    """A trajectory produced an unphysical state (norm drift or error
    outside [0, 1] beyond tolerance), or too many trajectories failed."""


class InsufficientData(IswapddError):
    """Not enough points for a fit."""


class NonPositiveError(IswapddError):
    """A fit in log space received a non-positive error value."""


class UnsupportedCombination(IswapddError):
    """Requested sequence/axis combination has no defined template."""


class ConfigError(IswapddError):
    """Structural problem in a configuration document (unknown key,
    wrong type, unreadable file)."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class ValidationError(IswapddError):
    """A configuration value is out of its allowed domain."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class IoError(IswapddError):
    """Failed to write an output artifact."""
