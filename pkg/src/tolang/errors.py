"""Exception hierarchy. Each leaf maps to one CLI exit code."""

from __future__ import annotations


class ToLError(Exception):
    exit_code = 2


class FrontendError(ToLError):
    """Lex/parse failures carry a source position."""

    exit_code = 1

    def __init__(self, message: str, line: int = 0, col: int = 0, length: int = 1):
        self.line, self.col, self.length = line, col, length
        if line:
            message = f"{line}:{col}: {message}"
        super().__init__(message)


class LexError(FrontendError):
    pass


class ParseError(FrontendError):
    pass


class StaticError(ToLError):
    """Name resolution, arity, shape and type errors."""

    exit_code = 2


class UnboundNameError(StaticError):
    pass


class UnknownFunctionError(StaticError):
    pass


class ArityError(StaticError):
    pass


class StarOutsideIteratorError(StaticError):
    pass


class UnboundPlaceholderError(StaticError):
    pass


class MissingInputError(StaticError):
    pass


class ShapeMismatchError(StaticError):
    pass


class DegenerateShapeError(StaticError):
    pass


class VolumeMismatchError(StaticError):
    pass


class MultipleInferError(StaticError):
    pass


class TypeListMismatchError(StaticError):
    pass


class ConversionError(StaticError):
    pass


class NotAPermutationError(StaticError):
    pass


class TolIndexError(StaticError, IndexError):
    pass


class UnsupportedLoweringError(StaticError):
    pass


class UnknownOperatorError(StaticError):
    pass


class CyclicDefinitionError(StaticError):
    pass


class NoOutputError(StaticError):
    """A program run needs at least one ``:=`` binding."""


class DomainError(ToLError):
    exit_code = 3


class TolIOError(ToLError):
    exit_code = 4


class EquivalenceError(ToLError):
    """``lower --check`` found the atomic form disagreeing with direct evaluation."""

    exit_code = 3


class GoldenDriftError(ToLError):
    exit_code = 5
