"""Exception types shared across the package.

``NumericalPreconditionError`` subclasses mark failures of documented
numerical preconditions (stability bounds, deconvolution cutoffs, grid
support); the batch CLI maps them to a dedicated exit code.
"""


class PSQError(Exception):
    """Base class for all errors raised by this package."""


class GridMismatchError(PSQError):
    """Two fields live on different grids; no implicit resampling is done."""


class NumericalPreconditionError(PSQError):
    """A documented numerical precondition was violated."""


class IllPosedSmoothingError(NumericalPreconditionError):
    """Inverse Gaussian/Cohen smoothing would amplify beyond the cutoff."""


class StabilityBoundError(NumericalPreconditionError):
    """Requested time step violates the integrator stability bound."""


class SpanError(NumericalPreconditionError):
    """Grid span too small to hold the requested state."""


class TruncationError(NumericalPreconditionError):
    """A truncated series did not meet its tail bound."""


class UnsupportedObservableError(PSQError):
    """Observable term/smoother combination outside the supported class."""
