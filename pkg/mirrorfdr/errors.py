"""
Exception hierarchy for mirrorfdr.

Input-validation failures also subclass ValueError so callers that only
catch ValueError keep working.
"""

from typing import Optional, Sequence


class MirrorFdrError(Exception):
    """Base class for every error raised by mirrorfdr."""


class ConfigurationError(MirrorFdrError, ValueError):
    """Invalid or missing configuration."""


class CovarianceError(MirrorFdrError, ValueError):
    """Covariance matrix is not symmetric positive definite."""


class SimulationError(MirrorFdrError):
    """A scenario could not be simulated."""

    def __init__(self, message: str, row: Optional[int] = None):
        super().__init__(message)
        self.row = row


class ModelError(MirrorFdrError, ValueError):
    """Model specification does not match the data or layout."""


class NonFiniteError(MirrorFdrError, FloatingPointError):
    """A log density, ELBO or gradient evaluated to a non-finite value."""

    def __init__(self, message: str, term: Optional[str] = None):
        super().__init__(message)
        self.term = term


class DivergenceError(MirrorFdrError):
    """ADVI optimisation diverged; carries the ELBO trace up to the failure."""

    def __init__(self, message: str, trace: Sequence[float] = ()):
        super().__init__(message)
        self.trace = list(trace)


class SelectionError(MirrorFdrError, ValueError):
    """Invalid input to a selection procedure."""


class BaselineError(MirrorFdrError):
    """A frequentist baseline could not be computed."""
