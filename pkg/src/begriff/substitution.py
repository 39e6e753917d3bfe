"""Capture-avoiding substitution, second-order substitution of function
abstracts, and schema instantiation with side conditions."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple, Union

from .errors import ArityError, CaptureError, MissingBinding, SelectorError, SideConditionViolation
from .syntax.ast import (
    Cov,
    Exists,
    Expr,
    Forall,
    ForallFun,
    FunApp,
    Hole,
    Var,
    children,
    map_children,
)
from .syntax.ops import (
    all_names,
    free_fun_vars,
    free_obj_vars,
    free_occurrence_paths,
    fresh_name,
    get_at,
    normalize,
    replace_at,
)

DISTINCT = "distinct"
FREE = "free"

_OBJ_BINDERS = (Forall, Exists, Cov)


# --- first-order substitution ----------------------------------------------


def substitute_var(f: Expr, x: str, t: Expr) -> Expr:
    """Replace every free occurrence of object variable ``x`` by ``t``.

    Raises :class:`CaptureError` instead of renaming when a free variable of
    ``t`` would fall under a binder.
    """
    return substitute_simultaneous(f, {x: t})


def substitute_simultaneous(f: Expr, mapping: Mapping[str, Expr], rename: bool = False) -> Expr:
    """Simultaneous substitution for object variables.

    With ``rename=False`` capture is an error; with ``rename=True`` bound
    variables are renamed (by appending primes) to avoid it.
    """
    mapping = {k: v for k, v in mapping.items() if not (isinstance(v, Var) and v.name == k)}
    if not mapping:
        return f
    return _subst(f, dict(mapping), rename)


def _fv_of(mapping: Mapping[str, Expr]) -> Tuple[Set[str], Set[str]]:
    obj: Set[str] = set()
    fun: Set[str] = set()
    for t in mapping.values():
        obj |= free_obj_vars(t)
        fun |= free_fun_vars(t)
    return obj, fun


def _subst(e: Expr, mapping: Dict[str, Expr], rename: bool) -> Expr:
    if isinstance(e, Var):
        return mapping.get(e.name, e)
    if isinstance(e, _OBJ_BINDERS):
        inner = {k: v for k, v in mapping.items() if k != e.var}
        if not inner:
            return e
        relevant = {k: v for k, v in inner.items() if k in free_obj_vars(e.body)}
        if not relevant:
            return e
        obj_fv, _ = _fv_of(relevant)
        var, body = e.var, e.body
        if var in obj_fv:
            if not rename:
                raise CaptureError(var, e.span)
            avoid = obj_fv | all_names(body) | set(relevant)
            new = fresh_name(var, avoid)
            body = _subst(body, {var: Var(new)}, rename)
            var = new
        return replace(e, var=var, body=_subst(body, relevant, rename))
    if isinstance(e, ForallFun):
        relevant = {k: v for k, v in mapping.items() if k in free_obj_vars(e.body)}
        if not relevant:
            return e
        _, fun_fv = _fv_of(relevant)
        var, body = e.var, e.body
        if var in fun_fv:
            if not rename:
                raise CaptureError(var, e.span)
            new = fresh_name(var, fun_fv | all_names(body))
            body = rename_fun_var(body, var, new)
            var = new
        return replace(e, var=var, body=_subst(body, relevant, rename))
    return map_children(e, lambda c: _subst(c, mapping, rename))


def rename_fun_var(e: Expr, old: str, new: str) -> Expr:
    """Rename free applications of function variable ``old`` to ``new``."""
    if isinstance(e, ForallFun) and e.var == old:
        return e
    e = map_children(e, lambda c: rename_fun_var(c, old, new))
    if isinstance(e, FunApp) and e.head == old:
        return replace(e, head=new)
    return e


def substitute_occurrences(f: Expr, x: str, y: Union[str, Expr], occurrences: Iterable[int]) -> Expr:
    """Replace the selected free occurrences of ``x`` (1-based, left to right).

    The replacement must be free for ``x`` at every selected position.
    """
    target = Var(y) if isinstance(y, str) else y
    paths = free_occurrence_paths(f, x)
    selected = sorted(set(occurrences))
    for k in selected:
        if k < 1 or k > len(paths):
            raise SelectorError(f"occurrence {k} of {x} out of range 1..{len(paths)}")
    tv = free_obj_vars(target)
    for k in selected:
        path = paths[k - 1]
        for binder in _binders_over(f, path):
            if binder in tv:
                raise CaptureError(binder, get_at(f, path).span, f"occurrence {k} of {x}")
    for k in selected:
        f = replace_at(f, paths[k - 1], target)
    return f


def _binders_over(e: Expr, path: Tuple[int, ...]) -> List[str]:
    out = []
    for i in path:
        if isinstance(e, _OBJ_BINDERS):
            out.append(e.var)
        e = list(children(e))[i]
    return out


# --- second-order substitution ---------------------------------------------


@dataclass(frozen=True)
class FunctionAbstract:
    """A function expression with ordered placeholders, e.g. ``not % mem %``.

    ``params`` name the placeholder variables (``%`` and ``%2`` in the
    script language, or ordinary names for formula metavariables).
    """

    params: Tuple[str, ...]
    body: Expr

    def __post_init__(self):
        if len(set(self.params)) != len(self.params):
            raise ValueError("placeholders must be distinct")

    @property
    def arity(self) -> int:
        return len(self.params)

    def free_obj_vars(self) -> Set[str]:
        return set(free_obj_vars(self.body)) - set(self.params)

    def free_fun_vars(self) -> Set[str]:
        return set(free_fun_vars(self.body))

    def apply(self, args: Sequence[Expr]) -> Expr:
        if len(args) != self.arity:
            raise ArityError(f"abstract takes {self.arity} argument(s), got {len(args)}")
        # Bound variables of the abstract are renamed fresh so no argument is captured.
        return substitute_simultaneous(self.body, dict(zip(self.params, args)), rename=True)


def substitute_function(f: Expr, fvar: str, abstract: FunctionAbstract) -> Expr:
    """Replace every application ``fvar(t...)`` by ``abstract`` filled with ``t...``.

    Raises :class:`CaptureError` when a free variable of the abstract would
    be bound at the application site, :class:`ArityError` on arity mismatch.
    """
    obj = abstract.free_obj_vars()
    fun = abstract.free_fun_vars()
    return normalize(_fsubst(f, fvar, abstract, obj, fun, frozenset(), frozenset()))


def _fsubst(e, fvar, ab, obj, fun, bound, bound_f):
    if isinstance(e, ForallFun):
        if e.var == fvar:
            return e
        return replace(e, body=_fsubst(e.body, fvar, ab, obj, fun, bound, bound_f | {e.var}))
    if isinstance(e, _OBJ_BINDERS):
        return replace(e, body=_fsubst(e.body, fvar, ab, obj, fun, bound | {e.var}, bound_f))
    e = map_children(e, lambda c: _fsubst(c, fvar, ab, obj, fun, bound, bound_f))
    if isinstance(e, FunApp) and e.head == fvar:
        hit = (obj & bound) or (fun & bound_f)
        if hit:
            raise CaptureError(sorted(hit)[0], e.span, f"filling {fvar}")
        return ab.apply(e.args)
    return e


def fill_holes(f: Expr, name: str, value: Union[FunctionAbstract, Expr]) -> Expr:
    """Discharge ``?name(...)`` holes; filling is literal (no renaming of the
    host binders) so schema side conditions can see would-be captures."""
    if isinstance(f, Hole) and f.name == name:
        if isinstance(value, FunctionAbstract):
            return value.apply(f.args)
        if f.args:
            raise ArityError(f"metavariable {name} is applied but bound to a closed formula")
        return value
    return map_children(f, lambda c: fill_holes(c, name, value))


def rename_object_vars(f: Expr, mapping: Mapping[str, str]) -> Expr:
    """Literal, textual renaming of object variables including binders."""
    if not mapping:
        return f
    if isinstance(f, Var):
        return replace(f, name=mapping.get(f.name, f.name))
    if isinstance(f, _OBJ_BINDERS):
        f = replace(f, var=mapping.get(f.var, f.var))
    return map_children(f, lambda c: rename_object_vars(c, mapping))


# --- schemas ---------------------------------------------------------------

Binding = Union[Expr, FunctionAbstract, Tuple[int, ...]]


@dataclass(frozen=True)
class SubstitutionPlan:
    bindings: Tuple[Tuple[str, Binding], ...]
    convention: str = DISTINCT
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        names = [n for n, _ in self.bindings]
        if len(set(names)) != len(names):
            dup = next(n for n in names if names.count(n) > 1)
            raise ValueError(f"binding target {dup!r} bound twice")
        if self.convention not in (DISTINCT, FREE):
            raise ValueError(f"unknown convention {self.convention!r}")

    @classmethod
    def of(cls, convention: str = DISTINCT, **bindings: Binding) -> "SubstitutionPlan":
        return cls(tuple(bindings.items()), convention)

    def as_dict(self) -> Dict[str, Binding]:
        return dict(self.bindings)

    def merged(self, other: "SubstitutionPlan") -> "SubstitutionPlan":
        return SubstitutionPlan(self.bindings + other.bindings, self.convention, self.labels + other.labels)


@dataclass(frozen=True)
class SideCondition:
    name: str
    clause: str
    check: Callable[["SchemaContext"], bool]


@dataclass
class SchemaContext:
    """What a side condition gets to inspect while a schema is instantiated."""

    schema: "Schema"
    plan: SubstitutionPlan
    images: Dict[str, str]
    values: Dict[str, Binding]
    result: Optional[Expr] = None


@dataclass(frozen=True)
class Schema:
    """A formula template with variable and formula metavariables.

    ``var_metavars`` are object variables of the template that a plan may
    rename; ``hole_metavars`` are ``?name`` holes that a plan must bind.
    ``prepare`` may derive extra hole values (for instance the partially
    substituted copy of a formula) and ``finalize`` post-processes the filled
    body (for instance universal closure over parameters).
    """

    id: str
    layer: str
    body: Expr
    var_metavars: Tuple[str, ...] = ()
    hole_metavars: Tuple[str, ...] = ()
    conditions: Tuple[SideCondition, ...] = ()
    prepare: Optional[Callable[[SchemaContext], Dict[str, Binding]]] = None
    finalize: Optional[Callable[[SchemaContext, Expr], Expr]] = None
    extra_keys: Tuple[str, ...] = ()
    description: str = ""


def instantiate_schema(s: Schema, plan: SubstitutionPlan) -> Expr:
    """Instantiate ``s`` under ``plan``, checking its side conditions.

    Under ``convention=distinct`` distinct variable metavariables must be
    sent to distinct variables; under ``convention=free`` the renaming is
    applied literally even when it identifies variables.
    """
    values = plan.as_dict()
    allowed = set(s.var_metavars) | set(s.hole_metavars) | set(s.extra_keys)
    for name in values:
        if name not in allowed:
            raise MissingBinding(f"schema {s.id} has no metavariable {name!r}")
    missing = [h for h in s.hole_metavars if h not in values]
    if missing:
        raise MissingBinding(f"schema {s.id} needs a binding for {missing[0]!r}")
    images: Dict[str, str] = {}
    for v in s.var_metavars:
        val = values.get(v, Var(v))
        if not isinstance(val, Var):
            raise SideConditionViolation(f"{v} must be bound to a variable", s.id)
        images[v] = val.name
    ctx = SchemaContext(s, plan, images, values)
    if plan.convention == DISTINCT:
        seen: Dict[str, str] = {}
        for v, img in images.items():
            if img in seen:
                raise SideConditionViolation(
                    f"metavariables {seen[img]} and {v} both stand for {img}",
                    "different variables stand for different variables",
                )
            seen[img] = v
    if s.prepare is not None:
        values = {**values, **s.prepare(ctx)}
        ctx.values = values
    body = rename_object_vars(s.body, {k: v for k, v in images.items() if k != v})
    for h in s.hole_metavars + tuple(k for k in values if k not in s.hole_metavars and k not in images):
        if h in values and not isinstance(values[h], tuple):
            body = fill_holes(body, h, values[h])
    if s.finalize is not None:
        body = s.finalize(ctx, body)
    ctx.result = body
    for cond in s.conditions:
        if not cond.check(ctx):
            raise SideConditionViolation(cond.name, cond.clause)
    return normalize(body)


def holes(e: Expr) -> List[str]:
    out: List[str] = []
    stack = [e]
    while stack:
        n = stack.pop()
        if isinstance(n, Hole):
            out.append(n.name)
        stack.extend(children(n))
    return out


__all__ = [
    "DISTINCT",
    "FREE",
    "FunctionAbstract",
    "Schema",
    "SchemaContext",
    "SideCondition",
    "SubstitutionPlan",
    "fill_holes",
    "holes",
    "instantiate_schema",
    "rename_fun_var",
    "rename_object_vars",
    "substitute_function",
    "substitute_occurrences",
    "substitute_simultaneous",
    "substitute_var",
]
