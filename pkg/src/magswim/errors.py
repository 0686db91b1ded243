"""Exception types shared across the package."""


class MagswimError(Exception):
    """Base class for all package-specific errors."""


class SingularDragError(MagswimError):
    """Drag matrix is numerically singular (invalid drag parameters)."""


class SingularOrientationError(MagswimError):
    """Orientation response matrix H is too ill-conditioned to invert."""


class LoopInfeasibleError(MagswimError):
    """Too many control samples along a shape loop fall on the singular set."""


class LoopOutsideFieldError(MagswimError):
    """Shape loop leaves the bounds of a curvature field."""


class MaskedRegionError(MagswimError):
    """Shape loop encloses masked (singular) cells of a curvature field."""


class SignalDomainError(MagswimError):
    """Control signal evaluated outside its time domain."""


class IncommensurateStepError(MagswimError):
    """Trajectory step does not divide the requested period."""


class NonFiniteStateError(MagswimError):
    """Integration produced a non-finite state."""


class ConvergenceError(MagswimError):
    """Fixed-point iteration failed to converge."""


class ConfigError(MagswimError):
    """Invalid or unknown entry in an experiment config."""
