"""Exception hierarchy shared by all modules."""


class DivpolyError(Exception):
    """Base class for all errors raised by this package."""


class RankMismatch(DivpolyError):
    pass


class NotPointed(DivpolyError):
    pass


class Unbounded(DivpolyError):
    pass


class EmptyInput(DivpolyError):
    pass


class PreconditionError(DivpolyError):
    """An operation's stated precondition does not hold."""


class SearchCapExceeded(DivpolyError):
    """A bounded search hit its cap; signals a mis-sized cap, not absence."""


class UnsupportedRank(DivpolyError):
    """Input exceeds the documented desk-scale rank limit."""
