"""Recursive-descent parser for the linear concept-script formula language.

Precedence, loosest first::

    binder  all x. / exists x. / allF g. / ext e.   (body extends right)
    <->     right-associative
    ->      right-associative
    | or    left-associative
    & and   left-associative
    not ~ ¬ / horiz ―   prefix
    =       non-associative
    in mem  non-associative
    primary

In the Frege layer a term standing where a truth-value is expected gets an
implicit horizontal, so ``a mem b -> c`` parses as
``Cond(Horiz(Mem(a, b)), Horiz(Var(c)))``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import List, Mapping, Optional, Sequence, Tuple

from ..errors import LayerError, ParseError
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
    Span,
    Var,
    is_term,
    map_children,
)
from .ops import FOL, FREGE, layer_features

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<sym><->|->|:=|∀²|[()\[\],.=~&|¬→↔∧∨∈⌢∀∃ὲ―])
  | (?P<hole>\?[A-Za-z_][A-Za-z0-9_]*'*)
  | (?P<ph>%[0-9]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*'*)
    """,
    re.VERBOSE,
)

_CANON = {
    "¬": "not", "~": "not", "―": "horiz", "→": "->", "↔": "<->", "∧": "&",
    "and": "&", "∨": "|", "or": "|", "∈": "in", "⌢": "mem", "∀": "all",
    "∃": "exists", "∀²": "allF", "ὲ": "ext",
}
KEYWORDS = frozenset({"all", "exists", "allF", "ext", "not", "horiz", "in", "mem", "and", "or"})
_BINDERS = {"all": Forall, "exists": Exists, "allF": ForallFun, "ext": Cov}


@dataclass(frozen=True)
class Token:
    kind: str  # 'sym', 'ident', 'hole', 'ph', 'eof'
    value: str
    start: int
    end: int


def tokenize(text: str, file: str = "<input>") -> List[Token]:
    out: List[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", Span(file, pos, pos + 1))
        kind = m.lastgroup
        if kind != "ws":
            val = m.group()
            if kind in ("sym", "ident"):
                canon = _CANON.get(val, val)
                if kind == "sym" or val in KEYWORDS or canon != val:
                    kind = "sym"
                val = canon
            out.append(Token(kind, val, m.start(), m.end()))
        pos = m.end()
    out.append(Token("eof", "", len(text), len(text)))
    return out


@dataclass(frozen=True)
class Macro:
    """A notation abbreviation expanded at parse time (``let`` in scripts)."""

    params: Tuple[str, ...]
    body: Expr


class Parser:
    def __init__(
        self,
        text: str,
        *,
        file: str = "<input>",
        layer: Optional[str] = None,
        constants: Sequence[str] = (),
        ops: Sequence[str] = (),
        macros: Optional[Mapping[str, Macro]] = None,
        allow_unknown_ops: bool = False,
    ):
        self.text = text
        self.file = file
        self.layer = layer
        self.constants = frozenset(constants)
        self.ops = frozenset(ops)
        self.macros = dict(macros or {})
        self.allow_unknown_ops = allow_unknown_ops
        self.toks = tokenize(text, file)
        self.i = 0

    # -- token helpers ------------------------------------------------------

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, value: str) -> bool:
        t = self.peek()
        return t.kind == "sym" and t.value == value

    def advance(self) -> Token:
        t = self.peek()
        self.i += 1
        return t

    def expect(self, value: str) -> Token:
        if not self.at(value):
            t = self.peek()
            what = "end of input" if t.kind == "eof" else repr(t.value)
            raise ParseError(f"expected {value!r}, found {what}", self._span(t.start, t.end))
        return self.advance()

    def _span(self, start: int, end: int) -> Span:
        return Span(self.file, start, end)

    def _last_end(self) -> int:
        return self.toks[self.i - 1].end if self.i else 0

    # -- grammar ------------------------------------------------------------

    def parse(self, position: str = "formula") -> Expr:
        e = self.expr()
        t = self.peek()
        if t.kind != "eof":
            raise ParseError(f"unexpected {t.value!r}", self._span(t.start, t.end))
        return self.finish(e, position)

    def finish(self, e: Expr, position: str) -> Expr:
        layer = self.layer
        feats = layer_features(e)
        if layer is None:
            if len(feats) > 1:
                raise LayerError("formula mixes FOL and Frege vocabulary")
            layer = next(iter(feats), None)
        elif feats - {layer}:
            raise LayerError(f"{sorted(feats - {layer})[0]} vocabulary in a {layer} formula")
        e = _coerce(e, position == "formula", layer)
        feats = layer_features(e)
        if len(feats) > 1:
            raise LayerError("formula mixes FOL and Frege vocabulary")
        return e

    def expr(self) -> Expr:
        return self.iff()

    def iff(self) -> Expr:
        start = self.peek().start
        left = self.cond()
        if self.at("<->"):
            self.advance()
            right = self.iff()
            return Iff(left, right, span=self._span(start, self._last_end()))
        return left

    def cond(self) -> Expr:
        start = self.peek().start
        left = self.disj()
        if self.at("->"):
            self.advance()
            right = self.cond()
            return Cond(left, right, span=self._span(start, self._last_end()))
        return left

    def disj(self) -> Expr:
        start = self.peek().start
        left = self.conj()
        while self.at("|"):
            self.advance()
            right = self.conj()
            left = Or(left, right, span=self._span(start, self._last_end()))
        return left

    def conj(self) -> Expr:
        start = self.peek().start
        left = self.unary()
        while self.at("&"):
            self.advance()
            right = self.unary()
            left = And(left, right, span=self._span(start, self._last_end()))
        return left

    def unary(self) -> Expr:
        t = self.peek()
        if t.kind == "sym" and t.value in ("not", "horiz"):
            self.advance()
            body = self.unary()
            cls = Not if t.value == "not" else Horiz
            return cls(body, span=self._span(t.start, self._last_end()))
        if t.kind == "sym" and t.value in _BINDERS:
            return self.binder()
        return self.eq()

    def binder(self) -> Expr:
        t = self.advance()
        v = self.peek()
        if v.kind != "ident":
            raise ParseError("binder without a variable", self._span(t.start, v.end))
        self.advance()
        if not self.at("."):
            raise ParseError(f"unbalanced binder {t.value} {v.value}", self._span(t.start, v.end))
        self.advance()
        if self.peek().kind == "eof" or self.at(")"):
            raise ParseError(f"binder {t.value} {v.value} has no body", self._span(t.start, self._last_end()))
        body = self.expr()
        return _BINDERS[t.value](v.value, body, span=self._span(t.start, self._last_end()))

    def eq(self) -> Expr:
        start = self.peek().start
        left = self.mem()
        if self.at("="):
            self.advance()
            right = self.mem()
            if self.at("="):
                t = self.peek()
                raise ParseError("chained '=' needs parentheses", self._span(t.start, t.end))
            return Atom("=", left, right, span=self._span(start, self._last_end()))
        return left

    def mem(self) -> Expr:
        start = self.peek().start
        left = self.primary()
        if self.at("in") or self.at("mem"):
            op = self.advance().value
            right = self.primary()
            span = self._span(start, self._last_end())
            return Atom("in", left, right, span=span) if op == "in" else Mem(left, right, span=span)
        return left

    def primary(self) -> Expr:
        t = self.peek()
        if t.kind == "sym" and t.value == "(":
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "sym" and t.value in _BINDERS:
            return self.binder()
        if t.kind == "hole":
            self.advance()
            args: Tuple[Expr, ...] = ()
            if self.at("("):
                args = self.arglist()
            return Hole(t.value[1:], args, span=self._span(t.start, self._last_end()))
        if t.kind == "ph":
            self.advance()
            return Var(t.value, span=self._span(t.start, t.end))
        if t.kind == "ident":
            self.advance()
            name = t.value
            if self.at("("):
                args = self.arglist()
                span = self._span(t.start, self._last_end())
                return self.application(name, args, span)
            span = self._span(t.start, t.end)
            if name in self.macros:
                return self.expand(name, (), span)
            if name in self.constants:
                return Const(name, span=span)
            return Var(name, span=span)
        what = "end of input" if t.kind == "eof" else repr(t.value)
        raise ParseError(f"unexpected {what}", self._span(t.start, t.end))

    def arglist(self) -> Tuple[Expr, ...]:
        self.expect("(")
        args = [self.expr()]
        while self.at(","):
            self.advance()
            args.append(self.expr())
        self.expect(")")
        return tuple(args)

    def application(self, name: str, args: Tuple[Expr, ...], span: Span) -> Expr:
        if name in self.macros:
            return self.expand(name, args, span)
        if name in self.ops:
            return OpApp(name, args, span=span)
        if self.layer == FOL:
            if self.allow_unknown_ops:
                return OpApp(name, args, span=span)
            raise ParseError(f"unknown symbol {name!r}", span)
        return FunApp(name, args, span=span)

    def expand(self, name: str, args: Tuple[Expr, ...], span: Span) -> Expr:
        from ..substitution import substitute_simultaneous

        m = self.macros[name]
        if len(args) != len(m.params):
            raise ParseError(f"abbreviation {name} takes {len(m.params)} argument(s)", span)
        body = substitute_simultaneous(m.body, dict(zip(m.params, args)), rename=True)
        return _respan(body, span)


def _respan(e: Expr, span: Span) -> Expr:
    e = map_children(e, lambda c: _respan(c, span))
    return replace(e, span=span)


_FORMULA_SLOTS = {
    Not: ("body",),
    Cond: ("ante", "cons"),
    Iff: ("left", "right"),
    And: ("left", "right"),
    Or: ("left", "right"),
    Forall: ("body",),
    Exists: ("body",),
    ForallFun: ("body",),
}


def _coerce(e: Expr, want_formula: bool, layer: Optional[str]) -> Expr:
    slots = _FORMULA_SLOTS.get(type(e), ())
    changes = {}
    for name in ("body", "ante", "cons", "left", "right"):
        if hasattr(e, name):
            child = getattr(e, name)
            new = _coerce(child, name in slots, layer)
            if layer == FOL and isinstance(e, Atom) and not is_term(new):
                raise ParseError("FOL atoms take terms, found a formula", child.span)
            if new is not child:
                changes[name] = new
    if hasattr(e, "args"):
        new_args = tuple(_coerce(a, False, layer) for a in e.args)
        if any(a is not b for a, b in zip(new_args, e.args)):
            changes["args"] = new_args
    if changes:
        e = replace(e, **changes)
    if want_formula and is_term(e):
        if layer == FOL:
            raise ParseError("expected a formula, found a term", e.span)
        return Horiz(e, span=e.span)
    return e


def parse_formula(
    text: str,
    layer: Optional[str] = None,
    *,
    file: str = "<input>",
    constants: Sequence[str] = (),
    ops: Sequence[str] = (),
    macros: Optional[Mapping[str, Macro]] = None,
    allow_unknown_ops: bool = False,
) -> Expr:
    """Parse a formula in formula position (implicit horizontals apply)."""
    return Parser(
        text, file=file, layer=layer, constants=constants, ops=ops,
        macros=macros, allow_unknown_ops=allow_unknown_ops,
    ).parse("formula")


def parse_expr(
    text: str,
    layer: Optional[str] = None,
    *,
    file: str = "<input>",
    constants: Sequence[str] = (),
    ops: Sequence[str] = (),
    macros: Optional[Mapping[str, Macro]] = None,
    allow_unknown_ops: bool = False,
) -> Expr:
    """Parse a term or formula without forcing truth-value position at the root."""
    return Parser(
        text, file=file, layer=layer, constants=constants, ops=ops,
        macros=macros, allow_unknown_ops=allow_unknown_ops,
    ).parse("any")


def parse_term(text: str, **kw) -> Expr:
    e = parse_expr(text, **kw)
    if not is_term(e):
        raise ParseError("expected a term", e.span)
    return e


__all__ = ["Macro", "Parser", "parse_expr", "parse_formula", "parse_term", "tokenize", "FREGE", "FOL"]
