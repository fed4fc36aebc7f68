"""Exception types shared across the package."""


class KsatlError(Exception):
    """Base class for all package errors."""


class IllegalActionError(KsatlError):
    """A joint action was used at a state where it is not available."""


class ParseError(KsatlError):
    """Formula or history text could not be parsed."""

    def __init__(self, message, pos=None):
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)
        self.pos = pos


class LoadError(KsatlError):
    """A model document could not be loaded."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ResolutionError(KsatlError):
    """A formula mentions agents or propositions unknown to the model."""


class InsufficientBudgetError(KsatlError):
    """A next-step operator was reached with no horizon budget left."""


class UnsupportedQueryError(KsatlError):
    """The fixed-point evaluator only supports propositional temporal targets."""


class IncompleteStrategyError(KsatlError):
    """A strategy profile is undefined on a reachable information class."""
