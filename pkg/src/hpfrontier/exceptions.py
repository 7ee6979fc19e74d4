"""Exception hierarchy for the package."""


class FrontierError(Exception):
    """Base class for all errors raised by hpfrontier."""


class EmptyWindow(FrontierError):
    """No observation carries positive kernel weight at the query point."""


class ZeroSpread(FrontierError, ValueError):
    """The design has zero standard deviation, so no bandwidth can be derived."""


class AllEmpty(FrontierError):
    """Every grid point of a curve fell in an empty window."""


class QuadratureError(FrontierError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class SampleFormatError(FrontierError, ValueError):
    """A sample file could not be parsed.

    Parameters
    ----------
    message : str
        Human readable description.
    line : int, optional
        1-based physical line number of the offending row.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NegativeResponse(SampleFormatError):
    """A response value is negative, outside the support {0 <= y <= g(x)}."""
