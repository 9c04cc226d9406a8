"""Exact symbolic arithmetic over the affine transition symbols."""
from .core import (
    A, PHI, X, XI, Expr, ExprError, ExprZeroDivisionError, IndexRangeError,
    MissingAssignmentError, NonUnitError, PoleError, SymbolId, combine, equals,
    evaluate, normalize, symbol,
)
from .parser import ParseError, evaluate_tree, fold, parse, parse_expr, parse_symbol

__all__ = [
    "A", "PHI", "X", "XI", "Expr", "ExprError", "ExprZeroDivisionError",
    "IndexRangeError", "MissingAssignmentError", "NonUnitError", "PoleError",
    "SymbolId", "combine", "equals", "evaluate", "normalize", "symbol",
    "ParseError", "evaluate_tree", "fold", "parse", "parse_expr", "parse_symbol",
]
