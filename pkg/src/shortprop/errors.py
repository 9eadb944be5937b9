"""Exception types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for all toolkit errors."""


class DomainError(ToolkitError):
    """A point (or segment) left the potential's evaluation domain."""


class FocalPointError(ToolkitError):
    """Evaluation at or past a focal/caustic time where the formula degenerates."""


class NoUniqueTrajectoryError(ToolkitError):
    """The boundary value problem has no unique solution (shooting diverged)."""


class ConfigurationError(ToolkitError):
    """Grid, resolution, or experiment configuration violates a precondition."""


class DegenerateFieldError(ToolkitError):
    """A wavefunction field is unusable (all nodes, too few frames, ...)."""


class TruncationError(ToolkitError):
    """A wavepacket does not decay at the grid boundary; quadrature would truncate it."""


class InsufficientDataError(ToolkitError):
    """Too few usable points remain for a fit after floor masking."""
