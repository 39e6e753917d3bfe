"""Inference rules. Each rule maps premise formulas plus arguments to a
conclusion, or raises. Rules are pure; the theory records the results."""

from __future__ import annotations

from itertools import product
from typing import TYPE_CHECKING, Callable, Dict, List, Optional, Sequence, Tuple

from ..errors import CaptureError, ShapeMismatch, SelectorError
from ..substitution import FunctionAbstract, SubstitutionPlan, substitute_function, substitute_var
from ..syntax.ast import And, Atom, Cond, Const, Expr, Forall, Horiz, Iff, Not, Or
from ..syntax.ops import (
    alpha_eq,
    alpha_key,
    binders_along,
    free_fun_vars,
    free_obj_vars,
    get_at,
    normalize,
    preorder,
    replace_at,
    subexpr_paths,
)
from ..syntax.render import render

if TYPE_CHECKING:
    from .theory import Theory

# Rules that are not valid in general; every use is reported by the audit.
UNSOUND_RULES = frozenset({"inspec", "corefer"})


def _need(cond: bool, rule: str, what: str) -> None:
    if not cond:
        raise ShapeMismatch(f"{rule}: {what}")


def _select(paths: List, at: Optional[Sequence[int]], rule: str, default_all: bool) -> List:
    if not paths:
        raise ShapeMismatch(f"{rule}: no matching position")
    if at is None:
        return list(paths) if default_all else [paths[0]]
    out = []
    for k in at:
        if k < 1 or k > len(paths):
            raise SelectorError(f"{rule}: position {k} out of range 1..{len(paths)}")
        out.append(paths[k - 1])
    return out


def _replace_many(e: Expr, paths: List, new: Expr, rule: str) -> Expr:
    fo, ff = free_obj_vars(new), free_fun_vars(new)
    for p in paths:
        obj, fun = binders_along(e, p)
        if fo & obj or ff & fun:
            raise CaptureError(sorted((fo & obj) | (ff & fun))[0], None, rule)
    # Deepest and rightmost first so earlier paths stay valid.
    for p in sorted(paths, reverse=True):
        e = replace_at(e, p, new)
    return e


# --- instantiation ---------------------------------------------------------


def apply_bindings(th: "Theory", f: Expr, plan: SubstitutionPlan) -> Expr:
    """Apply a plan's bindings one after another, consulting the guard."""
    for name, val in plan.bindings:
        if isinstance(val, FunctionAbstract):
            f = substitute_function(f, name, val)
        elif isinstance(val, Expr):
            if name in free_obj_vars(f):
                th.check_guard(name, val)
                f = substitute_var(f, name, val)
        else:
            raise ShapeMismatch(f"binding {name} is not a term or abstract")
    return normalize(f)


def r_axiom(th, prems, plan, args):
    schema = th.schema(args["schema"])
    plan = plan or SubstitutionPlan(())
    if schema.var_metavars or schema.hole_metavars:
        from ..substitution import instantiate_schema

        return instantiate_schema(schema, plan)
    return apply_bindings(th, schema.body, plan)


def r_inst(th, prems, plan, args):
    _need(plan is not None, "inst", "needs a plan")
    return apply_bindings(th, prems[0], plan)


def r_spec(th, prems, plan, args):
    f = prems[0]
    _need(isinstance(f, Forall), "spec", "premise is not a generality")
    _need(plan is not None and len(plan.bindings) == 1, "spec", "needs exactly one binding")
    name, t = plan.bindings[0]
    _need(name == f.var, "spec", f"binding targets {name} but the bound variable is {f.var}")
    th.check_guard(name, t)
    return normalize(substitute_var(f.body, name, t))


def r_gen(th, prems, plan, args):
    var = args["var"]
    for a in args.get("_assumption_formulas", ()):
        if var in free_obj_vars(a):
            raise ShapeMismatch(f"gen: {var} is free in an assumption")
    return Forall(var, prems[0])


def r_mp(th, prems, plan, args):
    imp, ant = prems
    _need(isinstance(imp, Cond), "mp", "first premise is not a conditional")
    _need(alpha_eq(imp.ante, ant), "mp", "antecedent does not match the second premise")
    return imp.cons


def r_contra(th, prems, plan, args):
    f = prems[0]
    _need(isinstance(f, Cond), "contra", "premise is not a conditional")
    return Cond(Not(f.cons), Not(f.ante))


def r_ig(th, prems, plan, args):
    f = prems[0]
    _need(isinstance(f, Cond) and isinstance(f.cons, Not), "Ig", "premise is not of shape p -> not p")
    _need(alpha_eq(f.ante, f.cons.body), "Ig", "antecedent and negated consequent differ")
    return f.cons


def _rw_iffcomm(e):
    return Iff(e.right, e.left) if isinstance(e, Iff) else None


def _rw_negshift(e):
    if isinstance(e, Not) and isinstance(e.body, Iff):
        return Iff(e.body.left, Not(e.body.right))
    return None


def _rw_dneg(e):
    if isinstance(e, Not) and isinstance(e.body, Not):
        return e.body.body
    return None


def _rw_eqsym(e):
    if isinstance(e, Atom) and e.pred == "=":
        return Atom("=", e.right, e.left)
    return None


def _rw_contra(e):
    return Cond(Not(e.cons), Not(e.ante)) if isinstance(e, Cond) else None


def _rw_exchange(e):
    if isinstance(e, Cond) and isinstance(e.cons, Cond):
        return Cond(e.cons.ante, Cond(e.ante, e.cons.cons))
    return None


EQUIVALENCES: Dict[str, Callable[[Expr], Optional[Expr]]] = {
    "iffcomm": _rw_iffcomm,
    "negshift": _rw_negshift,
    "dneg": _rw_dneg,
    "eqsym": _rw_eqsym,
    "contra": _rw_contra,
    "exchange": _rw_exchange,
}


def r_eqv(th, prems, plan, args):
    name = args["name"]
    rw = EQUIVALENCES.get(name)
    _need(rw is not None, "eqv", f"unknown equivalence {name!r}")
    f = prems[0]
    sites = [(p, rw(n)) for p, n in preorder(f) if rw(n) is not None]
    _need(bool(sites), "eqv", f"{name} applies nowhere")
    at = args.get("at")
    chosen = _select(sites, at, "eqv", default_all=False)
    for p, new in sorted(chosen, key=lambda s: s[0], reverse=True):
        f = replace_at(f, p, new)
    return normalize(f)


# --- propositional ---------------------------------------------------------


def _atoms(f: Expr, out: Dict[tuple, int]) -> None:
    if isinstance(f, Not):
        _atoms(f.body, out)
    elif isinstance(f, (Cond, Iff, And, Or)):
        for c in (f.ante, f.cons) if isinstance(f, Cond) else (f.left, f.right):
            _atoms(c, out)
    else:
        out.setdefault(alpha_key(f), len(out))


def _value(f: Expr, atoms: Dict[tuple, int], row: Tuple[bool, ...]) -> bool:
    if isinstance(f, Not):
        return not _value(f.body, atoms, row)
    if isinstance(f, Cond):
        return (not _value(f.ante, atoms, row)) or _value(f.cons, atoms, row)
    if isinstance(f, Iff):
        return _value(f.left, atoms, row) == _value(f.right, atoms, row)
    if isinstance(f, And):
        return _value(f.left, atoms, row) and _value(f.right, atoms, row)
    if isinstance(f, Or):
        return _value(f.left, atoms, row) or _value(f.right, atoms, row)
    return row[atoms[alpha_key(f)]]


MAX_TAUT_ATOMS = 16


def is_tautological_consequence(prems: Sequence[Expr], goal: Expr) -> bool:
    """Truth-table check treating non-connective subformulas as atoms."""
    atoms: Dict[tuple, int] = {}
    for f in list(prems) + [goal]:
        _atoms(f, atoms)
    if len(atoms) > MAX_TAUT_ATOMS:
        raise ShapeMismatch(f"taut: {len(atoms)} atoms exceed the limit of {MAX_TAUT_ATOMS}")
    for row in product((False, True), repeat=len(atoms)):
        if all(_value(p, atoms, row) for p in prems) and not _value(goal, atoms, row):
            return False
    return True


def r_taut(th, prems, plan, args):
    goal = normalize(args["goal"])
    _need(is_tautological_consequence(prems, goal), "taut", "goal is not a tautological consequence")
    return goal


def r_fol(th, prems, plan, args):
    from ..prover.check import check_trace
    from ..prover.tableau import Limits, Proved, close_universally, prove_from

    goal = normalize(args["goal"])
    limits = Limits(depth=args.get("depth", 6), gamma=args.get("gamma", 100))
    # Free variables of a premise are general unless an open assumption fixes them.
    fixed = set(args.get("_fixed", ()))
    res = prove_from([close_universally(p, fixed) for p in prems], goal, limits)
    _need(isinstance(res, Proved), "fol", "the prover found no closed tableau within its limits")
    _need(check_trace(res.trace), "fol", "the certificate failed independent checking")
    return goal


# --- identity --------------------------------------------------------------


def _strip_horiz(e: Expr) -> Expr:
    return e.body if isinstance(e, Horiz) else e


def r_negid(th, prems, plan, args):
    f = prems[0]
    _need(
        isinstance(f, Atom) and f.pred == "=" and isinstance(f.left, Not),
        "negid",
        "premise is not of shape (not t) = u",
    )
    return normalize(Not(Atom("=", _strip_horiz(f.left.body), f.right)))


def r_leib(th, prems, plan, args):
    eq, f = prems
    _need(isinstance(eq, Atom) and eq.pred == "=", "leib", "first premise is not an identity")
    paths = _select(subexpr_paths(f, eq.left), args.get("at"), "leib", default_all=True)
    return normalize(_replace_many(f, paths, eq.right, "leib"))


def r_fold(th, prems, plan, args):
    name = args["name"]
    d = th.definiens(name)
    paths = _select(subexpr_paths(prems[0], d), args.get("at"), "fold", default_all=True)
    return _replace_many(prems[0], paths, Const(name), "fold")


def r_unfold(th, prems, plan, args):
    name = args["name"]
    d = th.definiens(name)
    paths = _select(subexpr_paths(prems[0], Const(name)), args.get("at"), "unfold", default_all=True)
    return normalize(_replace_many(prems[0], paths, d, "unfold"))


# --- audited, not generally valid ------------------------------------------


def r_inspec(th, prems, plan, args):
    """Instantiate a generality nested inside a formula, in place."""
    _need(plan is not None and len(plan.bindings) == 1, "inspec", "needs exactly one binding")
    var, t = plan.bindings[0]
    f = prems[0]
    sites = [p for p, n in preorder(f) if isinstance(n, Forall) and n.var == var]
    path = _select(sites, args.get("at"), "inspec", default_all=False)[0]
    th.check_guard(var, t)
    node = get_at(f, path)
    obj, fun = binders_along(f, path)
    if free_obj_vars(t) & obj or free_fun_vars(t) & fun:
        raise CaptureError(sorted(free_obj_vars(t) & obj)[0] if free_obj_vars(t) & obj else var, None, "inspec")
    return normalize(replace_at(f, path, substitute_var(node.body, var, t)))


def r_corefer(th, prems, plan, args):
    """From (A = B) = phi conclude (A = N) = phi when N abbreviates A."""
    name = args["name"]
    f = prems[0]
    _need(
        isinstance(f, Atom) and f.pred == "=" and isinstance(f.left, Atom) and f.left.pred == "=",
        "corefer",
        "premise is not of shape (A = B) = phi",
    )
    _need(alpha_eq(f.left.left, th.definiens(name)), "corefer", f"{name} does not abbreviate {render(f.left.left)}")
    return Atom("=", Atom("=", f.left.left, Const(name)), f.right)


def r_assume(th, prems, plan, args):
    return normalize(args["goal"])


RULES: Dict[str, Tuple[Callable, Optional[int]]] = {
    "axiom": (r_axiom, 0),
    "inst": (r_inst, 1),
    "spec": (r_spec, 1),
    "gen": (r_gen, 1),
    "mp": (r_mp, 2),
    "contra": (r_contra, 1),
    "Ig": (r_ig, 1),
    "eqv": (r_eqv, 1),
    "taut": (r_taut, None),
    "fol": (r_fol, None),
    "negid": (r_negid, 1),
    "leib": (r_leib, 2),
    "fold": (r_fold, 1),
    "unfold": (r_unfold, 1),
    "inspec": (r_inspec, 1),
    "corefer": (r_corefer, 1),
    "assume": (r_assume, 0),
}
