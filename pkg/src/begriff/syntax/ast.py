"""Abstract syntax shared by the first-order layer and the Frege layer.

Every node is an immutable dataclass. ``span`` is carried for diagnostics
only and never takes part in equality or hashing; literal ``==`` compares
names exactly, use :func:`begriff.syntax.ops.alpha_eq` for equality up to
renaming of bound variables.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from typing import Callable, Iterator, Optional, Tuple


@dataclass(frozen=True)
class Span:
    file: str
    start: int
    end: int

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError("span start after end")

    def contains(self, other: "Span") -> bool:
        return self.file == other.file and self.start <= other.start and other.end <= self.end

    def __str__(self) -> str:
        return f"{self.file}:{self.start}-{self.end}"


_span = field(default=None, compare=False, repr=False)


class Expr:
    """Marker base for all AST nodes."""

    __slots__ = ()
    span: Optional[Span]

    def with_span(self, span: Optional[Span]):
        return replace(self, span=span)


class Term(Expr):
    __slots__ = ()


class Formula(Expr):
    __slots__ = ()


# --- terms -----------------------------------------------------------------


@dataclass(frozen=True)
class Var(Term):
    name: str
    span: Optional[Span] = _span


@dataclass(frozen=True)
class Const(Term):
    """A registered defined constant (rank-0 symbol), e.g. the Russell class ``V``."""

    name: str
    span: Optional[Span] = _span


@dataclass(frozen=True)
class FunApp(Term):
    """Application of a function variable (Frege layer), ``f(a)``."""

    head: str
    args: Tuple[Expr, ...]
    span: Optional[Span] = _span


@dataclass(frozen=True)
class OpApp(Term):
    """Application of a defined operation symbol of positive rank (FOL layer)."""

    symbol: str
    args: Tuple[Expr, ...]
    span: Optional[Span] = _span


@dataclass(frozen=True)
class Cov(Term):
    """Course-of-values abstraction binding one object variable."""

    var: str
    body: Expr
    span: Optional[Span] = _span


@dataclass(frozen=True)
class Mem(Term):
    """Frege's ``xi ⌢ zeta``; a term, not an atomic predicate."""

    left: Expr
    right: Expr
    span: Optional[Span] = _span


# --- formulas --------------------------------------------------------------

MEMBERSHIP = "in"
IDENTITY = "="


@dataclass(frozen=True)
class Atom(Formula):
    pred: str
    left: Expr
    right: Expr
    span: Optional[Span] = _span


@dataclass(frozen=True)
class Horiz(Formula):
    body: Expr
    span: Optional[Span] = _span


@dataclass(frozen=True)
class Not(Formula):
    body: Expr
    span: Optional[Span] = _span


@dataclass(frozen=True)
class Cond(Formula):
    ante: Expr
    cons: Expr
    span: Optional[Span] = _span


@dataclass(frozen=True)
class Iff(Formula):
    left: Expr
    right: Expr
    span: Optional[Span] = _span


@dataclass(frozen=True)
class And(Formula):
    left: Expr
    right: Expr
    span: Optional[Span] = _span


@dataclass(frozen=True)
class Or(Formula):
    left: Expr
    right: Expr
    span: Optional[Span] = _span


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Expr
    span: Optional[Span] = _span


@dataclass(frozen=True)
class ForallFun(Formula):
    """Second-order generality over a one-place function variable."""

    var: str
    body: Expr
    span: Optional[Span] = _span


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Expr
    span: Optional[Span] = _span


@dataclass(frozen=True)
class Hole(Formula):
    """A schema metavariable, ``?phi(x)``. Never part of a certified theorem."""

    name: str
    args: Tuple[Expr, ...] = ()
    span: Optional[Span] = _span


OBJECT_BINDERS = (Forall, Exists, Cov)
BINDERS = (Forall, Exists, Cov, ForallFun)
BINARY = (Cond, Iff, And, Or)
TERM_TYPES = (Var, Const, FunApp, OpApp, Cov, Mem)


def is_term(e: Expr) -> bool:
    return isinstance(e, Term)


def is_formula(e: Expr) -> bool:
    return isinstance(e, Formula)


def children(e: Expr) -> Iterator[Expr]:
    """Immediate subexpressions, left to right in source order."""
    for f in fields(e):
        if f.name == "span":
            continue
        v = getattr(e, f.name)
        if isinstance(v, Expr):
            yield v
        elif isinstance(v, tuple):
            yield from (x for x in v if isinstance(x, Expr))


def map_children(e: Expr, fn: Callable[[Expr], Expr]) -> Expr:
    """Rebuild ``e`` with ``fn`` applied to each immediate subexpression."""
    changes = {}
    for f in fields(e):
        if f.name == "span":
            continue
        v = getattr(e, f.name)
        if isinstance(v, Expr):
            nv = fn(v)
            if nv is not v:
                changes[f.name] = nv
        elif isinstance(v, tuple) and v and isinstance(v[0], Expr):
            nt = tuple(fn(x) for x in v)
            if any(a is not b for a, b in zip(nt, v)):
                changes[f.name] = nt
    return replace(e, **changes) if changes else e


def walk(e: Expr) -> Iterator[Expr]:
    """Pre-order traversal."""
    yield e
    for c in children(e):
        yield from walk(c)


def strip_spans(e: Expr) -> Expr:
    e = map_children(e, strip_spans)
    return replace(e, span=None) if e.span is not None else e
