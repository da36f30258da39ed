"""Exception types shared across the package."""


class QhlabError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(QhlabError, ValueError):
    """A parameter violates an operation's precondition."""


class OutsideDomainError(QhlabError, ValueError):
    """A query point does not lie in the open domain."""


class BoundaryContactError(QhlabError, ValueError):
    """A curve vertex touches the boundary (zero boundary distance)."""


class ResolutionTooCoarseError(QhlabError, ValueError):
    """The grid spacing is too coarse for the requested construction."""


class InvalidPairError(QhlabError, ValueError):
    """Two boundary points that must be distinct coincide."""


class NoLandingDetectedError(QhlabError, RuntimeError):
    """Ray endpoints were not Cauchy at this resolution.

    Legitimate outcome on domains without the visibility property; callers
    should usually catch this and flag the ray rather than abort.
    """


class NoFitError(QhlabError, ValueError):
    """The requested growth family cannot dominate the envelope."""


class ConfigError(QhlabError, ValueError):
    """Experiment configuration is malformed; message names the field."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"config field '{field}': {message}")


class InternalError(QhlabError, RuntimeError):
    """Invariant violation that should be unreachable for valid inputs."""
