from __future__ import annotations

from dataclasses import dataclass


class DHTError(ValueError):
    """Base class for errors raised by this package."""


class PreconditionError(DHTError):
    pass


class UnsupportedConstruct(DHTError):
    pass


class BudgetExceeded(DHTError):
    def __init__(self, required: int, budget: int):
        super().__init__(f"enumeration needs {required} candidates, budget is {budget}")
        self.required = required
        self.budget = budget


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int

    def __post_init__(self):
        if not 0 <= self.start <= self.end:
            raise ValueError(f"invalid span {self.start}..{self.end}")


class ParseError(DHTError):
    def __init__(self, message: str, span: SourceSpan, text: str = ""):
        super().__init__(f"{message} at {span.start}..{span.end}")
        self.message = message
        self.span = span
        self.text = text
