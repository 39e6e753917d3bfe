"""The axiom schemas of both layers.

First-order set theory: comprehension ``C``, extensionality as a
biconditional ``E1`` and as a substitutivity schema ``E2``, plus the
universal-instantiation axiom ``UI``.

Frege layer: Basic Laws III and V, the derived laws IIIb and IIIe, the
appendix amendments V'b and V'c, law ``L1`` (f(a) = a ⌢ ὲf(ε)) and its two
consequences ``P77`` and ``P82``. Frege's laws are stated with free Latin
letters (implicitly general) and free function letters; a plan instantiates
them one binding at a time, exactly as a theorem would be instantiated.
"""

from __future__ import annotations

from typing import Dict, List

from ..errors import CaptureError, SelectorError, SideConditionViolation
from ..substitution import (
    FunctionAbstract,
    Schema,
    SchemaContext,
    SideCondition,
    substitute_occurrences,
    substitute_var,
)
from ..syntax.ast import Expr, Forall, Var
from ..syntax.ops import FOL, FREGE, free_obj_vars, free_occurrence_paths
from ..syntax.parser import parse_formula


def _formula_value(ctx: SchemaContext, key: str, at: str) -> Expr:
    val = ctx.values[key]
    if isinstance(val, FunctionAbstract):
        return val.apply((Var(ctx.images[at]),))
    return val


def _ordered_free(e: Expr) -> List[str]:
    seen: List[str] = []
    for name in sorted(free_obj_vars(e), key=lambda n: free_occurrence_paths(e, n)[0]):
        seen.append(name)
    return seen


# --- comprehension ---------------------------------------------------------


def _c_prepare(ctx: SchemaContext) -> Dict[str, Expr]:
    return {"phi": _formula_value(ctx, "phi", "x")}


def _c_finalize(ctx: SchemaContext, body: Expr) -> Expr:
    x = ctx.images["x"]
    zs = [z for z in _ordered_free(ctx.values["phi"]) if z != x]
    for z in reversed(zs):
        body = Forall(z, body)
    return body


def _c_y_not_free(ctx: SchemaContext) -> bool:
    return ctx.images["y"] not in free_obj_vars(ctx.values["phi"])


COMPREHENSION = Schema(
    id="C",
    layer=FOL,
    body=parse_formula("exists y. all x. (x in y <-> ?phi)", FOL),
    var_metavars=("x", "y"),
    hole_metavars=("phi",),
    conditions=(
        SideCondition(
            "y is not a free variable of phi(x)",
            "Comprehension: z1..zn are the free variables of phi(x) other than x, and y is not free in phi(x)",
            _c_y_not_free,
        ),
    ),
    prepare=_c_prepare,
    finalize=_c_finalize,
    description="for each condition phi(x), a set of exactly the phi-satisfiers",
)

EXTENSIONALITY = Schema(
    id="E1",
    layer=FOL,
    body=parse_formula("all x. all y. ((all z. (z in x <-> z in y)) <-> x = y)", FOL),
    var_metavars=("x", "y", "z"),
    description="sets with the same members are identical, and conversely",
)


def _e2_prepare(ctx: SchemaContext) -> Dict[str, Expr]:
    x, y = ctx.images["x"], ctx.images["y"]
    phi = _formula_value(ctx, "phi", "x")
    occ = ctx.values.get("occ", ())
    try:
        phixy = substitute_occurrences(phi, x, y, occ)
    except CaptureError as exc:
        raise SideConditionViolation(
            f"{y} is not free for {x} at the selected occurrences",
            "Extensionality (substitutivity): y is free for x in all occurrences of x which it replaces",
        ) from exc
    except SelectorError as exc:
        raise SideConditionViolation(str(exc), "occurrence selector") from exc
    return {"phi": phi, "phixy": phixy}


SUBSTITUTIVITY = Schema(
    id="E2",
    layer=FOL,
    body=parse_formula("all x. all y. (x = y -> (?phi <-> ?phixy))", FOL),
    var_metavars=("x", "y"),
    hole_metavars=("phi",),
    extra_keys=("occ",),
    prepare=_e2_prepare,
    description="identicals are substitutable at zero, one or more chosen occurrences",
)


def _ui_prepare(ctx: SchemaContext) -> Dict[str, Expr]:
    if "t" not in ctx.values:
        raise SideConditionViolation("UI needs a term t", "universal instantiation")
    phi = ctx.values["phi"]
    if isinstance(phi, FunctionAbstract):
        phi = phi.apply((Var(ctx.images["v"]),))
    try:
        phit = substitute_var(phi, ctx.images["v"], ctx.values["t"])
    except CaptureError as exc:
        raise SideConditionViolation("t is not free for v in phi", "universal instantiation") from exc
    return {"phi": phi, "phit": phit}


UNIVERSAL_INSTANTIATION = Schema(
    id="UI",
    layer=FOL,
    body=parse_formula("(all v. ?phi) -> ?phit", FOL),
    var_metavars=("v",),
    hole_metavars=("phi",),
    extra_keys=("t",),
    prepare=_ui_prepare,
    description="from a generality, any instance",
)


# --- Frege -----------------------------------------------------------------


def _law(id: str, text: str, description: str) -> Schema:
    return Schema(id=id, layer=FREGE, body=parse_formula(text, FREGE), description=description)


FREGE_LAWS = (
    _law("III", "f(a = b) -> f(allF g. (g(b) -> g(a)))", "Basic Law III: identicals share every property"),
    _law("IIIb", "not g(a) -> (g(b) -> not a = b)", "from Basic Law III"),
    _law("IIIe", "a = a", "reflexivity, from Basic Law III"),
    _law("V", "((ext e. g(e)) = (ext al. f(al))) = (all x. g(x) = f(x))", "Basic Law V"),
    _law(
        "V'b",
        "((ext e. f(e)) = (ext al. g(al))) -> (not a = (ext e. f(e)) -> f(a) = g(a))",
        "appendix amendment, first form",
    ),
    _law(
        "V'c",
        "((ext e. f(e)) = (ext al. g(al))) -> (not a = (ext al. g(al)) -> f(a) = g(a))",
        "appendix amendment, second form",
    ),
    _law("L1", "f(a) = a mem (ext e. f(e))", "an object falls under a concept iff it is a member of its extension"),
    _law("P77", "F(f(a)) -> F(a mem (ext e. f(e)))", "from L1"),
    _law("P82", "F(a mem (ext e. f(e))) -> F(f(a))", "from L1"),
)

FOL_SCHEMAS = (COMPREHENSION, EXTENSIONALITY, SUBSTITUTIVITY, UNIVERSAL_INSTANTIATION)


def default_schemas(layer: str) -> Dict[str, Schema]:
    pool = FOL_SCHEMAS if layer == FOL else FREGE_LAWS
    return {s.id: s for s in pool}
