"""Structural operations over the AST: free variables, alpha-equivalence,
horizontal normalization, occurrence enumeration and layer detection."""

from __future__ import annotations

from typing import FrozenSet, Iterable, List, Set, Tuple

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
    OpApp,
    Or,
    Var,
    children,
    is_formula,
    map_children,
    walk,
)

FOL = "fol"
FREGE = "frege"


def free_obj_vars(e: Expr) -> FrozenSet[str]:
    out: Set[str] = set()
    _fov(e, frozenset(), out)
    return frozenset(out)


def _fov(e: Expr, bound: FrozenSet[str], out: Set[str]) -> None:
    if isinstance(e, Var):
        if e.name not in bound:
            out.add(e.name)
        return
    if isinstance(e, (Forall, Exists, Cov)):
        _fov(e.body, bound | {e.var}, out)
        return
    for c in children(e):
        _fov(c, bound, out)


def free_fun_vars(e: Expr) -> FrozenSet[str]:
    out: Set[str] = set()
    _ffv(e, frozenset(), out)
    return frozenset(out)


def _ffv(e: Expr, bound: FrozenSet[str], out: Set[str]) -> None:
    if isinstance(e, FunApp) and e.head not in bound:
        out.add(e.head)
    if isinstance(e, ForallFun):
        _ffv(e.body, bound | {e.var}, out)
        return
    for c in children(e):
        _ffv(c, bound, out)


def free_vars(e: Expr) -> FrozenSet[str]:
    """Object and function variables occurring free in ``e``."""
    return free_obj_vars(e) | free_fun_vars(e)


def all_names(e: Expr) -> Set[str]:
    """Every variable name used anywhere, bound or free; used for freshness."""
    names: Set[str] = set()
    for n in walk(e):
        if isinstance(n, Var):
            names.add(n.name)
        elif isinstance(n, (Forall, Exists, Cov, ForallFun)):
            names.add(n.var)
        elif isinstance(n, FunApp):
            names.add(n.head)
    return names


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    name = base
    while name in avoid:
        name += "'"
    return name


def constants(e: Expr) -> Set[str]:
    """Defined constants and operation symbols occurring in ``e``."""
    out: Set[str] = set()
    for n in walk(e):
        if isinstance(n, Const):
            out.add(n.name)
        elif isinstance(n, OpApp):
            out.add(n.symbol)
    return out


# --- alpha equivalence -----------------------------------------------------


def alpha_key(e: Expr) -> tuple:
    """A hashable canonical form; equal keys iff alpha-equivalent."""
    return _key(e, ())


def _key(e: Expr, env: Tuple[Tuple[str, str], ...]) -> tuple:
    if isinstance(e, Var):
        for i, (kind, name) in enumerate(reversed(env)):
            if kind == "o" and name == e.name:
                return ("#", i)
        return ("var", e.name)
    if isinstance(e, FunApp):
        head: tuple = ("fvar", e.head)
        for i, (kind, name) in enumerate(reversed(env)):
            if kind == "f" and name == e.head:
                head = ("#f", i)
                break
        return ("app", head) + tuple(_key(a, env) for a in e.args)
    if isinstance(e, (Forall, Exists, Cov)):
        return (type(e).__name__, _key(e.body, env + (("o", e.var),)))
    if isinstance(e, ForallFun):
        return ("ForallFun", _key(e.body, env + (("f", e.var),)))
    if isinstance(e, Const):
        return ("const", e.name)
    if isinstance(e, OpApp):
        return ("op", e.symbol) + tuple(_key(a, env) for a in e.args)
    if isinstance(e, Atom):
        return ("atom", e.pred, _key(e.left, env), _key(e.right, env))
    if isinstance(e, Hole):
        return ("hole", e.name) + tuple(_key(a, env) for a in e.args)
    return (type(e).__name__,) + tuple(_key(c, env) for c in children(e))


def alpha_eq(a: Expr, b: Expr) -> bool:
    return alpha_key(a) == alpha_key(b)


# --- normalization ---------------------------------------------------------


def normalize(e: Expr) -> Expr:
    """Collapse the horizontal over anything already truth-valued.

    ``Horiz(Horiz(t))`` becomes ``Horiz(t)``, and ``Horiz(phi)`` becomes
    ``phi`` whenever ``phi`` is a formula node (negation, conditional,
    identity, generality, ...). Horizontals over plain terms are kept.
    """
    e = map_children(e, normalize)
    if isinstance(e, Horiz) and is_formula(e.body):
        return e.body
    return e


# --- occurrences -----------------------------------------------------------


def free_occurrence_paths(e: Expr, name: str) -> List[Tuple[int, ...]]:
    """Paths (child-index tuples) of free occurrences of object variable
    ``name``, in left-to-right order."""
    out: List[Tuple[int, ...]] = []

    def go(n: Expr, path: Tuple[int, ...]) -> None:
        if isinstance(n, Var):
            if n.name == name:
                out.append(path)
            return
        if isinstance(n, (Forall, Exists, Cov)) and n.var == name:
            return
        for i, c in enumerate(children(n)):
            go(c, path + (i,))

    go(e, ())
    return out


def subexpr_paths(e: Expr, target: Expr) -> List[Tuple[int, ...]]:
    """Paths of subexpressions alpha-equivalent to ``target`` (pre-order).

    Only occurrences whose free variables are not bound at that position
    count, so replacing them is meaningful.
    """
    key = alpha_key(target)
    fv = free_obj_vars(target)
    ffv = free_fun_vars(target)
    out: List[Tuple[int, ...]] = []

    def go(n: Expr, path: Tuple[int, ...], bound: FrozenSet[str], bound_f: FrozenSet[str]) -> None:
        if not (fv & bound) and not (ffv & bound_f) and alpha_key(n) == key:
            out.append(path)
            return
        if isinstance(n, (Forall, Exists, Cov)):
            go(n.body, path + (0,), bound | {n.var}, bound_f)
            return
        if isinstance(n, ForallFun):
            go(n.body, path + (0,), bound, bound_f | {n.var})
            return
        for i, c in enumerate(children(n)):
            go(c, path + (i,), bound, bound_f)

    go(e, (), frozenset(), frozenset())
    return out


def get_at(e: Expr, path: Tuple[int, ...]) -> Expr:
    for i in path:
        e = list(children(e))[i]
    return e


def binders_along(e: Expr, path: Tuple[int, ...]) -> Tuple[Set[str], Set[str]]:
    """Object and function variables bound at position ``path`` of ``e``."""
    obj: Set[str] = set()
    fun: Set[str] = set()
    for i in path:
        if isinstance(e, (Forall, Exists, Cov)):
            obj.add(e.var)
        elif isinstance(e, ForallFun):
            fun.add(e.var)
        e = list(children(e))[i]
    return obj, fun


def preorder(e: Expr, path: Tuple[int, ...] = ()):
    """Yield ``(path, node)`` for every node, parents before children."""
    yield path, e
    for i, c in enumerate(children(e)):
        yield from preorder(c, path + (i,))


def replace_at(e: Expr, path: Tuple[int, ...], new: Expr) -> Expr:
    if not path:
        return new
    idx = [0]
    head, rest = path[0], path[1:]

    def fn(c: Expr) -> Expr:
        i = idx[0]
        idx[0] += 1
        return replace_at(c, rest, new) if i == head else c

    return map_children(e, fn)


# --- layers ----------------------------------------------------------------


def layer_features(e: Expr) -> Set[str]:
    """Which layer-specific vocabulary ``e`` uses."""
    out: Set[str] = set()
    for n in walk(e):
        if isinstance(n, (Iff, And, Or, Exists, OpApp)) or (
            isinstance(n, Atom) and n.pred == "in"
        ):
            out.add(FOL)
        elif isinstance(n, (Mem, Cov, FunApp, ForallFun, Horiz)):
            out.add(FREGE)
    return out


def cond_chain(e: Expr) -> List[Expr]:
    """Antecedents and final consequent of a right-nested conditional."""
    out = []
    while isinstance(e, Cond):
        out.append(e.ante)
        e = e.cons
    out.append(e)
    return out


__all__ = [
    "FOL",
    "FREGE",
    "alpha_eq",
    "alpha_key",
    "all_names",
    "binders_along",
    "constants",
    "cond_chain",
    "fresh_name",
    "free_fun_vars",
    "free_obj_vars",
    "free_occurrence_paths",
    "free_vars",
    "get_at",
    "layer_features",
    "normalize",
    "preorder",
    "replace_at",
    "subexpr_paths",
]
