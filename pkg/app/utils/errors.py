"""Exception types raised across the sketch pipeline."""


class SlidingKError(Exception):
    """Base class for SlidingK failures that are not plain contract errors."""


class SketchInvalidError(SlidingKError, RuntimeError):
    """No guess of the optimum qualifies: the [m, M] bounds must be widened."""


class DistanceBoundError(SlidingKError, ValueError):
    """A mapping distance exceeded the configured Δ bound."""


class StreamFormatError(SlidingKError, ValueError):
    """Input stream file is malformed (ragged or non-numeric rows)."""
