"""Pretty printer, the inverse of :mod:`begriff.syntax.parser`.

``parse_formula(render(f)) == f`` for every tree the parser can produce.
Parentheses are inserted only where precedence demands them; binders are
parenthesized whenever they are not the whole of their slot.
"""

from __future__ import annotations

from .ast import (
    And,
    Atom,
    Cond,
    Const,
    Cov,
    Exists,
    Expr,
    Forall,
    ForallFun,
    FunApp,
    Hole,
    Horiz,
    Iff,
    Mem,
    Not,
    OpApp,
    Or,
    Var,
    is_term,
)

ASCII = {
    "all": "all {}. ", "exists": "exists {}. ", "allF": "allF {}. ", "ext": "ext {}. ",
    "not": "not ", "horiz": "horiz ", "->": " -> ", "<->": " <-> ", "&": " & ",
    "|": " | ", "in": " in ", "mem": " mem ", "=": " = ",
}
UNICODE = {
    "all": "∀{}. ", "exists": "∃{}. ", "allF": "∀²{}. ", "ext": "ὲ{}. ",
    "not": "¬", "horiz": "―", "->": " → ", "<->": " ↔ ", "&": " ∧ ",
    "|": " ∨ ", "in": " ∈ ", "mem": " ⌢ ", "=": " = ",
}

BINDER, IFF, COND, OR, AND, UNARY, EQ, MEM, PRIMARY = range(9)

_BINDER_KEYS = {Forall: "all", Exists: "exists", ForallFun: "allF", Cov: "ext"}


def render(e: Expr, style: str = "ascii") -> str:
    """Render ``e`` as concept-script text in ``ascii`` or ``unicode``."""
    if style not in ("ascii", "unicode"):
        raise ValueError(f"unknown style {style!r}")
    table = ASCII if style == "ascii" else UNICODE
    return _Renderer(table).go(e, BINDER, True)


def _level(e: Expr) -> int:
    if isinstance(e, (Forall, Exists, ForallFun, Cov)):
        return BINDER
    if isinstance(e, Iff):
        return IFF
    if isinstance(e, Cond):
        return COND
    if isinstance(e, Or):
        return OR
    if isinstance(e, And):
        return AND
    if isinstance(e, (Not, Horiz)):
        return UNARY
    if isinstance(e, Atom):
        return EQ if e.pred == "=" else MEM
    if isinstance(e, Mem):
        return MEM
    return PRIMARY


class _Renderer:
    def __init__(self, table):
        self.t = table

    def go(self, e: Expr, need: int, formula_slot: bool) -> str:
        # A horizontal over a term in truth-value position is implicit.
        if formula_slot and isinstance(e, Horiz) and is_term(e.body):
            return self.go(e.body, need, False)
        text = self.bare(e)
        lvl = _level(e)
        if lvl < need or (lvl == BINDER and need > BINDER):
            return f"({text})"
        return text

    def bare(self, e: Expr) -> str:
        t = self.t
        if isinstance(e, Var):
            return e.name
        if isinstance(e, Const):
            return e.name
        if isinstance(e, (FunApp, OpApp)):
            head = e.head if isinstance(e, FunApp) else e.symbol
            return head + "(" + ", ".join(self.go(a, BINDER, False) for a in e.args) + ")"
        if isinstance(e, Hole):
            args = ""
            if e.args:
                args = "(" + ", ".join(self.go(a, BINDER, False) for a in e.args) + ")"
            return f"?{e.name}{args}"
        if isinstance(e, (Forall, Exists, ForallFun, Cov)):
            key = _BINDER_KEYS[type(e)]
            return t[key].format(e.var) + self.go(e.body, BINDER, not isinstance(e, Cov))
        if isinstance(e, Iff):
            return self.go(e.left, COND, True) + t["<->"] + self.go(e.right, IFF, True)
        if isinstance(e, Cond):
            return self.go(e.ante, OR, True) + t["->"] + self.go(e.cons, COND, True)
        if isinstance(e, Or):
            return self.go(e.left, OR, True) + t["|"] + self.go(e.right, AND, True)
        if isinstance(e, And):
            return self.go(e.left, AND, True) + t["&"] + self.go(e.right, UNARY, True)
        if isinstance(e, Not):
            return t["not"] + self.go(e.body, UNARY, True)
        if isinstance(e, Horiz):
            return t["horiz"] + self.go(e.body, UNARY, False)
        if isinstance(e, Atom) and e.pred == "=":
            return self.go(e.left, MEM, False) + t["="] + self.go(e.right, MEM, False)
        if isinstance(e, Atom):
            return self.go(e.left, PRIMARY, False) + t["in"] + self.go(e.right, PRIMARY, False)
        if isinstance(e, Mem):
            return self.go(e.left, PRIMARY, False) + t["mem"] + self.go(e.right, PRIMARY, False)
        raise TypeError(f"cannot render {type(e).__name__}")
