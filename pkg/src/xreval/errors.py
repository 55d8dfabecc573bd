"""Exception types shared across the toolkit."""

from __future__ import annotations


class XrEvalError(Exception):
    """Base class for every domain error raised by xreval."""


class UnknownOperator(XrEvalError):
    def __init__(self, symbol: str, message: str | None = None):
        self.symbol = symbol
        super().__init__(message or f"unknown operator {symbol!r}")


class DuplicateSymbol(XrEvalError):
    def __init__(self, symbol: str, message: str | None = None):
        self.symbol = symbol
        super().__init__(message or f"duplicate operator symbol {symbol!r}")


class NegativeDuration(XrEvalError, ValueError):
    pass


class UnboundParameter(XrEvalError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unbound parameter {name}")


class ParseError(XrEvalError):
    """A located error in a catalog or model file.

    When a file contains several bad lines, the first error is raised and
    ``errors`` holds all of them in source order.
    """

    def __init__(self, line: int, column: int, message: str, offending_text: str,
                 path: str | None = None):
        self.line = line
        self.column = column
        self.message = message
        self.offending_text = offending_text
        self.path = path
        self.errors: list[ParseError] = [self]
        Exception.__init__(self, self.describe())

    def describe(self) -> str:
        where = f"{self.path}:" if self.path else ""
        return f"{where}{self.line}:{self.column}: {self.message}"


class LocatedDuplicateSymbol(ParseError, DuplicateSymbol):
    def __init__(self, symbol, line, column, offending_text, path=None):
        self.symbol = symbol
        ParseError.__init__(self, line, column, f"duplicate operator symbol {symbol!r}",
                            offending_text, path)


class LocatedUnknownOperator(ParseError, UnknownOperator):
    def __init__(self, symbol, line, column, offending_text, path=None):
        self.symbol = symbol
        ParseError.__init__(self, line, column, f"unknown operator {symbol!r}",
                            offending_text, path)


class SurveyError(XrEvalError, ValueError):
    pass


class WrongItemCount(SurveyError):
    pass


class ItemOutOfRange(SurveyError):
    pass


class WeightsDontSumTo15(SurveyError):
    pass


class MalformedCsv(SurveyError):
    pass


class InsufficientData(XrEvalError):
    pass
