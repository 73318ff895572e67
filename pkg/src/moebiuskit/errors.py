"""Exception types raised across the toolkit."""


class MoebiusKitError(Exception):
    pass


class DegenerateSegment(MoebiusKitError, ValueError):
    pass


class NotEmbedded(MoebiusKitError, ValueError):
    pass


class OverlapError(MoebiusKitError, ValueError):
    pass


class InvalidCut(MoebiusKitError, ValueError):
    pass


class BadEpsilon(MoebiusKitError, ValueError):
    pass


class TooFewSamples(MoebiusKitError, ValueError):
    pass


class NonDevelopable(MoebiusKitError):
    pass


class StripFormatError(MoebiusKitError, ValueError):
    pass


class PoleError(MoebiusKitError, ValueError):
    pass


class NotParallel(MoebiusKitError, ValueError):
    pass


class ZeroOnPath(MoebiusKitError):
    """A zero of F lies on (or within tolerance of) an evaluated path."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class NotFound(MoebiusKitError):
    """No certified zero within the allowed refinement depth.

    This reports a resolution limit, never a counterexample.
    """


class ContinuityError(MoebiusKitError, ValueError):
    pass


class EndpointError(MoebiusKitError, ValueError):
    pass


class HeightTooSmall(MoebiusKitError, ValueError):
    pass


class InconsistentInput(MoebiusKitError, ValueError):
    pass


class BadBracket(MoebiusKitError, ValueError):
    pass


class DegenerateConfiguration(MoebiusKitError, ValueError):
    pass


class BoundaryPoint(MoebiusKitError, ValueError):
    pass


class FlatPointReached(MoebiusKitError):
    """Tracing hit the zero-mean-curvature set; ``polyline`` holds the partial trace."""

    def __init__(self, message, polyline=None):
        super().__init__(message)
        self.polyline = polyline


class NormalizationFailed(MoebiusKitError, ValueError):
    pass
