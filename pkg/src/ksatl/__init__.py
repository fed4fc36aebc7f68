"""Bounded-horizon model checking of coalition abilities under imperfect
information with perfect recall and knowledge sharing inside coalitions."""

from .errors import (
    IllegalActionError,
    IncompleteStrategyError,
    InsufficientBudgetError,
    KsatlError,
    LoadError,
    ParseError,
    ResolutionError,
    UnsupportedQueryError,
)
from .formula import desugar, parse, to_text
from .histories import History, equiv_class, format_history, parse_history, start
from .model import Model, validate_model
from .model_format import BUILTIN_NAMES, builtin, load_model, save_model
from .semantics import (
    StrategyProfile,
    VerdictReport,
    eval_fixedpoint,
    evaluate,
    outcomes,
    synthesize_strategy,
)

__all__ = [
    "BUILTIN_NAMES",
    "History",
    "IllegalActionError",
    "IncompleteStrategyError",
    "InsufficientBudgetError",
    "KsatlError",
    "LoadError",
    "Model",
    "ParseError",
    "ResolutionError",
    "StrategyProfile",
    "UnsupportedQueryError",
    "VerdictReport",
    "builtin",
    "desugar",
    "equiv_class",
    "eval_fixedpoint",
    "evaluate",
    "format_history",
    "load_model",
    "outcomes",
    "parse",
    "parse_history",
    "save_model",
    "start",
    "synthesize_strategy",
    "to_text",
    "validate_model",
]
