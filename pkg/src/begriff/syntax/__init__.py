"""Concept-script syntax: AST, parser, renderer and structural operations."""

from .ast import (
    And, Atom, Cond, Const, Cov, Exists, Expr, Forall, ForallFun, Formula, FunApp,
    Hole, Horiz, Iff, Mem, Not, OpApp, Or, Span, Term, Var,
)
from .ops import FOL, FREGE, alpha_eq, alpha_key, free_vars, normalize
from .parser import Macro, parse_expr, parse_formula, parse_term
from .render import render

__all__ = [
    "And", "Atom", "Cond", "Const", "Cov", "Exists", "Expr", "Forall", "ForallFun",
    "Formula", "FunApp", "Hole", "Horiz", "Iff", "Mem", "Not", "OpApp", "Or", "Span",
    "Term", "Var", "FOL", "FREGE", "alpha_eq", "alpha_key", "free_vars", "normalize",
    "Macro", "parse_expr", "parse_formula", "parse_term", "render",
]
