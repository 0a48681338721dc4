"""Exception hierarchy for the cubical-assembly workbench."""

from __future__ import annotations


class CubenchError(Exception):
    """Base class for every engine failure."""


class DimensionError(CubenchError):
    pass


class CapExceededError(CubenchError):
    pass


class LevelBudgetError(CubenchError):
    """An operation needs a level above the truncation bound."""

    def __init__(self, needed: int, bound: int, what: str = "") -> None:
        self.needed = needed
        self.bound = bound
        label = f" for {what}" if what else ""
        super().__init__(f"level {needed} needed{label}, truncation bound is {bound}")


class NotASieveError(CubenchError):
    pass


class IncompatibleSystemError(CubenchError):
    def __init__(self, witness, left, right) -> None:
        self.witness = witness
        self.left = left
        self.right = right
        super().__init__(f"system parts disagree at {witness}: {left!r} vs {right!r}")


class IncompleteSystemError(CubenchError, ValueError):
    """A system part leaves a member of its sieve without a value."""

    def __init__(self, witness) -> None:
        self.witness = witness
        super().__init__(f"partial assignment misses {witness}")


class AdherenceError(CubenchError):
    pass


class PostconditionError(CubenchError):
    pass


class NotModestError(CubenchError):
    pass


class PERError(CubenchError):
    pass


class ParseError(CubenchError):
    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")
