"""Exception types shared across the toolkit."""


class ClpuError(Exception):
    """Base class for all toolkit errors."""


class ParseError(ClpuError, ValueError):
    """Malformed input file; carries the offending line number when known."""

    def __init__(self, message, line_no=None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class AlignmentError(ClpuError, ValueError):
    """Series do not share a common clock (start/step) or length."""


class InsufficientDataError(ClpuError, ValueError):
    """Not enough usable samples for the requested operation."""


class EstimationError(ClpuError, ValueError):
    """Diversified-demand estimate could not be formed (e.g. missing lags)."""


class SurfaceFitError(ClpuError, ValueError):
    """Ratio-surface regression failed; names the degenerate direction."""


class TruncationError(ClpuError, ValueError):
    """Too much probability mass outside the contribution-factor range."""


class GridTooSmallError(ClpuError, ValueError):
    """Output density grid misses probability mass; suggests wider bounds."""

    def __init__(self, message, suggested_lo=None, suggested_hi=None):
        super().__init__(message)
        self.suggested_lo = suggested_lo
        self.suggested_hi = suggested_hi
