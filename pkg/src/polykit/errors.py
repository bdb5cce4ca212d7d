"""Exception hierarchy shared by all polykit modules."""


class PolykitError(Exception):
    """Base class for every error raised by polykit."""


class MalformedInput(PolykitError):
    pass


class NotSimple(PolykitError):
    """A vertex of the polytope does not have valence 3."""


class NotPolytopal(PolykitError):
    """The graph is not planar or not 3-connected."""


class BadParameter(PolykitError):
    pass


class NotFound(PolykitError):
    pass


class PreconditionViolated(PolykitError):
    pass


class NotMedial(PolykitError):
    """A 4-regular graph that is not the medial graph of a 3-polytope."""


class SizeBound(PolykitError):
    pass


class TorsionDetected(PolykitError):
    pass


class ZeroElement(PolykitError):
    pass


class NotInBeltSpan(PolykitError):
    pass


class NotEvenPolytope(PolykitError):
    pass


class SearchExhausted(PolykitError):
    pass


class InvalidCharacteristic(PolykitError):
    pass
