"""Exception types raised by bsosim."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class StepSizeError(ValueError):
    """Integration step too coarse to resolve the counter-rotating term."""


class FrameError(ValueError):
    """State amplitudes are in the wrong representation for the operation."""


class PreconditionError(ValueError):
    """A documented precondition of the operation does not hold."""


class WindowError(ValueError):
    """Averaging window does not cover an integer number of periods."""


class SearchError(RuntimeError):
    """Bracketed root search found no root in the allowed range."""


class AccuracyError(RuntimeError):
    """A numerical result failed its internal convergence check."""


class FitError(RuntimeError):
    """Least-squares fit could not be carried out or did not converge."""


class ConfigError(ValueError):
    """Run configuration is missing keys or holds invalid values."""
