"""Independent replay of tableau traces.

Nothing here is shared with the search: rule shapes, quantifier
instantiation and the congruence test are reimplemented in the plainest
way available, so a bug in the prover cannot vouch for itself.
"""

from __future__ import annotations

from typing import List, Sequence, Set, Tuple

from ..syntax.ast import And, Atom, Cond, Cov, Exists, Expr, Forall, ForallFun, Iff, Not, OpApp, Or, Var, map_children, walk
from ..syntax.ops import alpha_key
from .tableau import Node, Trace

Signed = Tuple[bool, Expr]


class TraceRejected(Exception):
    pass


def check_trace(trace: Trace) -> bool:
    try:
        verify_trace(trace)
    except TraceRejected:
        return False
    return True


def verify_trace(trace: Trace) -> None:
    """Raise :class:`TraceRejected` unless every leaf of the trace closes."""
    _check(list(trace.roots), trace.tree)


def _check(branch: List[Signed], node: Node) -> None:
    if node.rule == "close":
        _closed(branch, node.closure)
        return
    if not 0 <= node.source < len(branch):
        raise TraceRejected(f"{node.rule} cites missing formula {node.source}")
    exts = _apply(branch, node)
    if len(exts) != len(node.children):
        raise TraceRejected(f"{node.rule} yields {len(exts)} branches, trace has {len(node.children)}")
    for ext, child in zip(exts, node.children):
        _check(branch + ext, child)


def _names(branch: Sequence[Signed]) -> Set[str]:
    out: Set[str] = set()
    for _, f in branch:
        for n in walk(f):
            if isinstance(n, Var):
                out.add(n.name)
            elif isinstance(n, (Forall, Exists, Cov, ForallFun)):
                out.add(n.var)
    return out


def _apply(branch: List[Signed], node: Node) -> List[List[Signed]]:
    sign, f = branch[node.source]
    r = node.rule
    if r == "alpha":
        if isinstance(f, Not):
            return [[(not sign, f.body)]]
        if sign and isinstance(f, And):
            return [[(True, f.left), (True, f.right)]]
        if not sign and isinstance(f, Or):
            return [[(False, f.left), (False, f.right)]]
        if not sign and isinstance(f, Cond):
            return [[(True, f.ante), (False, f.cons)]]
    elif r == "beta":
        if sign and isinstance(f, Or):
            return [[(True, f.left)], [(True, f.right)]]
        if not sign and isinstance(f, And):
            return [[(False, f.left)], [(False, f.right)]]
        if sign and isinstance(f, Cond):
            return [[(False, f.ante)], [(True, f.cons)]]
        if isinstance(f, Iff):
            a, b = f.left, f.right
            return [[(True, a), (sign, b)], [(False, a), (not sign, b)]]
    elif r in ("gamma", "delta"):
        universal = (sign and isinstance(f, Forall)) or (not sign and isinstance(f, Exists))
        existential = (sign and isinstance(f, Exists)) or (not sign and isinstance(f, Forall))
        if node.term is None:
            raise TraceRejected(f"{r} without a term")
        if r == "gamma" and universal:
            return [[(sign, _inst(f.body, f.var, node.term))]]
        if r == "delta" and existential:
            t = node.term
            if not isinstance(t, Var) or t.name in _names(branch):
                raise TraceRejected("delta witness is not fresh")
            return [[(sign, _inst(f.body, f.var, t))]]
    raise TraceRejected(f"{r} does not apply to formula {node.source}")


def _fv(e: Expr) -> Set[str]:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, (Forall, Exists, Cov)):
        return _fv(e.body) - {e.var}
    out: Set[str] = set()
    for n in _kids(e):
        out |= _fv(n)
    return out


def _kids(e: Expr) -> List[Expr]:
    found: List[Expr] = []
    map_children(e, lambda c: found.append(c) or c)
    return found


def _inst(e: Expr, x: str, t: Expr) -> Expr:
    """Replace free ``x`` by ``t``, renaming binders that would capture."""
    if isinstance(e, Var):
        return t if e.name == x else e
    if isinstance(e, (Forall, Exists, Cov)):
        if e.var == x or x not in _fv(e.body):
            return e
        var, body = e.var, e.body
        if var in _fv(t):
            taken = _fv(t) | _fv(body) | {x}
            new = var
            while new in taken:
                new += "'"
            body, var = _inst(body, var, Var(new)), new
        return type(e)(var, _inst(body, x, t))
    return map_children(e, lambda c: _inst(c, x, t))


def _congruent(equations: List[Tuple[Expr, Expr]], goals: List[Tuple[Expr, Expr]]) -> bool:
    """Naive fixpoint: classes of subterms merged by equations and congruence."""
    terms = {}

    def add(t: Expr) -> None:
        terms[alpha_key(t)] = t
        if isinstance(t, OpApp):
            for a in t.args:
                add(a)

    for s, t in equations + goals:
        add(s)
        add(t)
    cls = {k: {k} for k in terms}

    def merge(a, b):
        if cls[a] is cls[b]:
            return False
        joined = cls[a] | cls[b]
        for k in joined:
            cls[k] = joined
        return True

    for s, t in equations:
        merge(alpha_key(s), alpha_key(t))
    changed = True
    while changed:
        changed = False
        apps = [t for t in terms.values() if isinstance(t, OpApp)]
        for p in apps:
            for q in apps:
                if p.symbol == q.symbol and len(p.args) == len(q.args) and all(
                    alpha_key(b) in cls[alpha_key(a)] for a, b in zip(p.args, q.args)
                ):
                    changed |= merge(alpha_key(p), alpha_key(q))
    return all(alpha_key(t) in cls[alpha_key(s)] for s, t in goals)


def _closed(branch: List[Signed], c: tuple) -> None:
    if not c:
        raise TraceRejected("leaf without closure")

    def get(i: int) -> Signed:
        if not isinstance(i, int) or not 0 <= i < len(branch):
            raise TraceRejected(f"closure cites missing formula {i}")
        return branch[i]

    if c[0] == "pair":
        (s1, f1), (s2, f2) = get(c[1]), get(c[2])
        if s1 == s2 or alpha_key(f1) != alpha_key(f2):
            raise TraceRejected("closing pair is not complementary")
        return
    eqs = []
    for i in c[1]:
        s, f = get(i)
        if not (s and isinstance(f, Atom) and f.pred == "="):
            raise TraceRejected("closure uses a formula that is not a true identity")
        eqs.append((f.left, f.right))
    if c[0] == "eq":
        s, f = get(c[2])
        if s or not (isinstance(f, Atom) and f.pred == "="):
            raise TraceRejected("eq closure needs a false identity")
        if not _congruent(eqs, [(f.left, f.right)]):
            raise TraceRejected("identity sides are not congruent")
        return
    if c[0] == "cong":
        (s1, a), (s2, b) = get(c[2]), get(c[3])
        if not (s1 and not s2 and isinstance(a, Atom) and isinstance(b, Atom) and a.pred == b.pred == "in"):
            raise TraceRejected("cong closure needs a true and a false membership")
        if not _congruent(eqs, [(a.left, b.left), (a.right, b.right)]):
            raise TraceRejected("membership arguments are not congruent")
        return
    raise TraceRejected(f"unknown closure {c[0]!r}")
