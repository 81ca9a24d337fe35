"""
Exception hierarchy for the watchtower solvers
"""


class WatchtowerError(Exception):
    """Base class for every error raised by this package"""


class GeometryError(WatchtowerError):
    pass


class CoincidentPoints(GeometryError):
    pass


class ParallelLines(GeometryError):
    pass


class VerticalLine(GeometryError):
    pass


class DegeneratePolyline(GeometryError):
    pass


class DegenerateBlocker(GeometryError):
    pass


class ValidationError(WatchtowerError):
    """Input data violates a model invariant"""


class TooFewVertices(ValidationError):
    pass


class NonMonotoneX(ValidationError):
    pass


class IntervalInverted(ValidationError):
    pass


class RealizationOutOfBounds(ValidationError):
    pass


class InvalidChannel(ValidationError):
    pass


class InvalidMesh(ValidationError):
    pass


class OutOfRange(WatchtowerError):
    pass


class ApexOutsideStrip(WatchtowerError):
    pass


class EndpointOutsideChannel(WatchtowerError):
    pass


class OutsideDomain(WatchtowerError):
    pass


class CertificateFailure(WatchtowerError):
    """A solver produced a certificate that does not verify (internal bug)"""


class NonPositiveEpsilon(WatchtowerError):
    pass


class BudgetExceeded(WatchtowerError):
    pass


class ParseError(WatchtowerError):
    pass


class RenderError(WatchtowerError):
    pass
