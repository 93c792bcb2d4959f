class PseudoconeError(Exception):
    pass


class MalformedTable(PseudoconeError):
    pass


class NoLimit(PseudoconeError):
    pass


class ShapeMismatch(PseudoconeError):
    pass


class UnknownObject(PseudoconeError):
    pass


class EnumerationCapExceeded(PseudoconeError):
    pass


class NotACone(PseudoconeError):
    pass


class NoTerminalObject(PseudoconeError):
    pass


class FibreLimitMissing(PseudoconeError):
    pass


class NotPreserved(PseudoconeError):
    pass


class IncoherentMonoidalData(PseudoconeError):
    pass


class NotComponentwiseAdjoint(PseudoconeError):
    pass


class NotFree(PseudoconeError):
    pass


class NotNormal(PseudoconeError):
    pass


class MissingRegularResolution(PseudoconeError):
    pass


class ResolutionNotClosed(PseudoconeError):
    pass


class NotClosedUnderInduction(PseudoconeError):
    pass


class EquivariantificationUndefined(PseudoconeError):
    """Eq needs the classes [e, x] to be orbit-stable, i.e. a trivial action."""


class UnknownPoint(PseudoconeError):
    pass


class NotFixed(PseudoconeError):
    pass


class NotInjective(PseudoconeError):
    pass


class UnknownFixture(PseudoconeError):
    pass


class SchemaError(PseudoconeError):
    pass
