"""Exception hierarchy shared by every module."""


class NetcayError(Exception):
    """Base class for all library errors."""


class NotAGroup(NetcayError):
    pass


class OrderCapExceeded(NetcayError):
    pass


class NotNormal(NetcayError):
    pass


class AutTooLarge(NetcayError):
    pass


class NotInvariant(NetcayError):
    pass


class NotInverseClosed(NetcayError):
    pass


class ContainsIdentity(NetcayError):
    pass


class EmptyConnectionSet(NetcayError):
    pass


class NotGenerating(NetcayError):
    pass


class NotTransitive(NetcayError):
    pass


class PreconditionFailed(NetcayError):
    pass


class NonConstantIntersection(NetcayError):
    pass


class NotInLattice(NetcayError):
    pass


class ConnectionMeetsKernel(NetcayError):
    pass


class ProductTooLarge(NetcayError):
    pass


class GraphTooLarge(NetcayError):
    pass


class NotConnected(NetcayError):
    pass


class NotNormalEdgeTransitive(NetcayError):
    pass


class InconsistencyDetected(NetcayError):
    """A result that contradicts known mathematics; always a bug upstream."""


class StructureViolation(InconsistencyDetected):
    pass


class ClassificationGap(InconsistencyDetected):
    pass


class MismatchWithBruteForce(InconsistencyDetected):
    pass


class BadParameters(NetcayError):
    pass


class CapExceeded(NetcayError):
    pass


class UnknownCase(NetcayError):
    pass


class SpecParseError(NetcayError):
    pass
