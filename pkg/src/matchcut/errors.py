"""Exception types shared across the package."""

from __future__ import annotations


class MatchCutError(Exception):
    """Base class for all errors raised by this package."""


class GraphError(MatchCutError, ValueError):
    """Malformed graph data or an operation applied outside its domain."""


class BudgetExceeded(MatchCutError):
    """A bounded search ran out of nodes before reaching a verdict.

    Never interpret this as a negative answer.
    """

    def __init__(self, message: str, nodes: int = 0):
        super().__init__(message)
        self.nodes = nodes


class InvalidColouring(MatchCutError, ValueError):
    """A red-blue colouring fails a required property."""


class FormulaError(MatchCutError, ValueError):
    """A 1-in-k SAT formula violates the restricted positive format."""


class ParseError(MatchCutError, ValueError):
    """Text input that does not follow one of the file grammars."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class VerificationError(MatchCutError):
    """A certificate or construction failed independent re-verification."""


class ProviderError(MatchCutError):
    """No immune graph satisfying a request could be produced."""


class PreconditionError(MatchCutError, ValueError):
    """A gadget construction was called with inputs it cannot accept."""
