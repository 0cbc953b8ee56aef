"""Exception hierarchy for chipdist."""


class ChipDistError(Exception):
    """Base class for all errors raised by this package."""


# graph construction
class InvalidHost(ChipDistError, ValueError):
    pass


class LoopEdge(InvalidHost):
    pass


class Disconnected(InvalidHost):
    pass


class EmptyVertexSet(InvalidHost):
    pass


class GenerationFailed(ChipDistError):
    pass


class ParseError(ChipDistError, ValueError):
    pass


# chip-firing
class IllegalFiring(ChipDistError):
    pass


class IllegalScript(IllegalFiring):
    pass


class UnsupportedHost(ChipDistError):
    pass


class PreconditionUnmet(ChipDistError, ValueError):
    pass


class AbelianViolation(ChipDistError, AssertionError):
    pass


# feedback arc sets
class TooLarge(ChipDistError):
    pass


class NotMinimal(ChipDistError, ValueError):
    pass


class NoSource(ChipDistError):
    pass


# divisors
class OutOfRange(ChipDistError, ValueError):
    pass


class HostMismatch(ChipDistError, ValueError):
    pass


class DualityViolation(ChipDistError, AssertionError):
    pass


# reductions
class Overflow(ChipDistError, OverflowError):
    pass


# oracles
class StateSpaceTooLarge(ChipDistError):
    pass


class SearchBoxExceeded(ChipDistError):
    pass
