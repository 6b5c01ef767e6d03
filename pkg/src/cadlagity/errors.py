"""Exception types raised across the package."""


class CadlagError(ValueError):
    """Base class. ``field`` and ``index`` locate the offending input when known."""

    def __init__(self, message, field=None, index=None):
        self.field = field
        self.index = index
        where = ""
        if field is not None:
            where = field if index is None else f"{field}[{index}]"
            where = f" ({where})"
        super().__init__(message + where)


# path construction / evaluation
class NonMonotoneBreakpoints(CadlagError):
    pass


class BreakpointOutOfRange(CadlagError):
    pass


class LengthMismatch(CadlagError):
    pass


class DimensionMismatch(CadlagError):
    pass


class NonFiniteValue(CadlagError):
    pass


class LeftLimitAtZero(CadlagError):
    pass


class MalformedInput(CadlagError):
    pass


# parameters
class BadParams(CadlagError):
    pass


class BadMu(BadParams):
    pass


class BadP(BadParams):
    pass


class NonpositiveEta(BadParams):
    pass


class ExponentNotIntegrable(BadParams):
    pass


# windows and triples
class UnorderedTriple(CadlagError):
    pass


class EmptyWindow(CadlagError):
    pass


class WindowNotNested(CadlagError):
    pass


class MissingConstants(CadlagError):
    pass
