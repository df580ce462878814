"""Exception types shared across the package."""


class GreedyTpError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(GreedyTpError):
    """Malformed hypergraph or query text.

    Carries the 1-based line number when known.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line


class InputError(GreedyTpError):
    """Bad user input that is not a syntax error (missing file, bad relation, ...)."""


class BudgetError(GreedyTpError):
    """A configured resource ceiling (edge count, tuple count, ...) was exceeded."""


class ValidationError(GreedyTpError):
    """An internally produced artifact failed its own validity check.

    This always indicates a bug, never bad input; the CLI maps it to a
    dedicated exit code so it cannot be mistaken for a negative decision.
    """


class NoTreeProjection(GreedyTpError):
    """The engine found no tree projection for the given pair / width bound."""
