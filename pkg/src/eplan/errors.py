from __future__ import annotations


class EplanError(Exception):
    """Base class for every error raised by the planner."""


class ParseError(EplanError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class DomainError(EplanError):
    """Well-formed text that does not describe a valid domain."""


class ClassificationError(DomainError):
    """Initial conditions that are not a finitary S5-theory."""


class InitialStateError(DomainError):
    pass


class TransitionError(EplanError):
    pass
