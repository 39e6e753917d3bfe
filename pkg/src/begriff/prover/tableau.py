"""Signed analytic tableau for first-order logic with equality.

The search is untrusted. A successful run returns a :class:`Trace` which
:func:`begriff.prover.check.check_trace` replays with its own rule
implementation and its own congruence test.

Strategy: on each branch apply non-branching rules, then branching rules,
and only when neither is left run a gamma round, instantiating every
universal with every ground term of the branch not yet used for it. A
branch with no ground terms gets one fresh constant. ``Limits.depth``
caps gamma rounds, ``Limits.gamma`` caps instantiations per branch and
``Limits.seconds`` optionally bounds wall-clock time.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple, Union

from ..errors import LayerError
from ..substitution import substitute_simultaneous
from ..syntax.ast import And, Atom, Cond, Exists, Expr, Forall, Iff, Not, OpApp, Or, Var
from ..syntax.ops import FREGE, alpha_key, free_obj_vars, layer_features, normalize

Signed = Tuple[bool, Expr]


@dataclass(frozen=True)
class Limits:
    depth: int = 6
    gamma: int = 100
    seconds: Optional[float] = None


@dataclass(frozen=True)
class Node:
    """One tableau step.

    ``rule`` is ``close``, ``alpha``, ``beta``, ``delta`` or ``gamma``.
    Expansion nodes name the branch index they expand (``source``) and,
    for quantifier rules, the instantiating term. A ``close`` node carries
    ``closure``: ``("pair", i, j)``, ``("eq", eqs, i)`` for a refuted
    identity or ``("cong", eqs, i, j)`` for congruent membership atoms,
    where ``eqs`` are the indices of the true identities used.
    """

    rule: str
    source: int = -1
    term: Optional[Expr] = None
    children: Tuple["Node", ...] = ()
    closure: Optional[tuple] = None

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)


@dataclass(frozen=True)
class Trace:
    roots: Tuple[Signed, ...]
    tree: Node


@dataclass(frozen=True)
class Proved:
    trace: Trace


@dataclass(frozen=True)
class Unknown:
    reason: str


Result = Union[Proved, Unknown]


def kind(sf: Signed) -> str:
    sign, f = sf
    if isinstance(f, Not):
        return "alpha"
    if isinstance(f, And):
        return "alpha" if sign else "beta"
    if isinstance(f, Or):
        return "beta" if sign else "alpha"
    if isinstance(f, Cond):
        return "beta" if sign else "alpha"
    if isinstance(f, Iff):
        return "beta"
    if isinstance(f, Forall):
        return "gamma" if sign else "delta"
    if isinstance(f, Exists):
        return "delta" if sign else "gamma"
    return "atom"


def expand(sf: Signed, term: Optional[Expr] = None) -> List[List[Signed]]:
    """The branch extensions produced by one rule application."""
    sign, f = sf
    if isinstance(f, Not):
        return [[(not sign, f.body)]]
    if isinstance(f, And):
        return [[(True, f.left), (True, f.right)]] if sign else [[(False, f.left)], [(False, f.right)]]
    if isinstance(f, Or):
        return [[(True, f.left)], [(True, f.right)]] if sign else [[(False, f.left), (False, f.right)]]
    if isinstance(f, Cond):
        return [[(False, f.ante)], [(True, f.cons)]] if sign else [[(True, f.ante), (False, f.cons)]]
    if isinstance(f, Iff):
        if sign:
            return [[(True, f.left), (True, f.right)], [(False, f.left), (False, f.right)]]
        return [[(True, f.left), (False, f.right)], [(False, f.left), (True, f.right)]]
    if isinstance(f, (Forall, Exists)):
        return [[(sign, substitute_simultaneous(f.body, {f.var: term}, rename=True))]]
    raise ValueError("atoms do not expand")


def ground_terms(f: Expr, bound: FrozenSet[str] = frozenset(), out: Optional[Dict[tuple, Expr]] = None) -> Dict[tuple, Expr]:
    """Closed terms at argument positions, keyed for deduplication."""
    if out is None:
        out = {}
    if isinstance(f, (Forall, Exists)):
        ground_terms(f.body, bound | {f.var}, out)
    elif isinstance(f, Atom):
        for t in (f.left, f.right):
            _terms(t, bound, out)
    elif isinstance(f, Not):
        ground_terms(f.body, bound, out)
    elif isinstance(f, (And, Or, Iff)):
        ground_terms(f.left, bound, out)
        ground_terms(f.right, bound, out)
    elif isinstance(f, Cond):
        ground_terms(f.ante, bound, out)
        ground_terms(f.cons, bound, out)
    return out


def _terms(t: Expr, bound: FrozenSet[str], out: Dict[tuple, Expr]) -> None:
    if isinstance(t, OpApp):
        for a in t.args:
            _terms(a, bound, out)
    if not (free_obj_vars(t) & bound):
        out.setdefault(alpha_key(t), t)


# --- congruence closure ----------------------------------------------------


class Congruence:
    """Union-find over ground terms, closed under operation congruence."""

    def __init__(self, terms: Sequence[Expr], equations: Sequence[Tuple[Expr, Expr]]):
        self.parent: Dict[tuple, tuple] = {}
        self.terms: Dict[tuple, Expr] = {}
        for t in terms:
            self._add(t)
        for s, t in equations:
            self._add(s)
            self._add(t)
            self.union(alpha_key(s), alpha_key(t))
        self._close()

    def _add(self, t: Expr) -> None:
        k = alpha_key(t)
        if k not in self.parent:
            self.parent[k] = k
            self.terms[k] = t
            if isinstance(t, OpApp):
                for a in t.args:
                    self._add(a)

    def find(self, k: tuple) -> tuple:
        while self.parent[k] != k:
            self.parent[k] = self.parent[self.parent[k]]
            k = self.parent[k]
        return k

    def union(self, a: tuple, b: tuple) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb, key=repr)] = min(ra, rb, key=repr)
        return True

    def _close(self) -> None:
        apps = [t for t in self.terms.values() if isinstance(t, OpApp)]
        changed = True
        while changed:
            changed = False
            sig: Dict[tuple, tuple] = {}
            for t in apps:
                s = (t.symbol,) + tuple(self.find(alpha_key(a)) for a in t.args)
                k = alpha_key(t)
                if s in sig:
                    changed |= self.union(sig[s], k)
                else:
                    sig[s] = k

    def same(self, s: Expr, t: Expr) -> bool:
        self._add(s)
        self._add(t)
        self._close()
        return self.find(alpha_key(s)) == self.find(alpha_key(t))


def find_closure(branch: Sequence[Signed]) -> Optional[tuple]:
    seen: Dict[Tuple[bool, tuple], int] = {}
    for i, (sign, f) in enumerate(branch):
        k = alpha_key(f)
        if (not sign, k) in seen:
            return ("pair", seen[(not sign, k)], i)
        seen.setdefault((sign, k), i)
    eqs = [i for i, (s, f) in enumerate(branch) if s and isinstance(f, Atom) and f.pred == "="]
    neg_eq = [i for i, (s, f) in enumerate(branch) if not s and isinstance(f, Atom) and f.pred == "="]
    pos_in = [i for i, (s, f) in enumerate(branch) if s and isinstance(f, Atom) and f.pred == "in"]
    neg_in = [i for i, (s, f) in enumerate(branch) if not s and isinstance(f, Atom) and f.pred == "in"]
    if not neg_eq and not (eqs and pos_in and neg_in):
        return None
    cc = Congruence([], [(branch[i][1].left, branch[i][1].right) for i in eqs])
    for i in neg_eq:
        f = branch[i][1]
        if cc.same(f.left, f.right):
            return ("eq", tuple(eqs), i)
    if eqs:
        for i in pos_in:
            for j in neg_in:
                a, b = branch[i][1], branch[j][1]
                if cc.same(a.left, b.left) and cc.same(a.right, b.right):
                    return ("cong", tuple(eqs), i, j)
    return None


# --- search ----------------------------------------------------------------


class _OutOfBudget(Exception):
    pass


class _Search:
    def __init__(self, limits: Limits):
        self.limits = limits
        self.fresh = 0
        self.deadline = None if limits.seconds is None else time.monotonic() + limits.seconds

    def new_constant(self, branch: Sequence[Signed]) -> Var:
        names = set()
        for _, f in branch:
            names |= {k[1] for k in ground_terms(f) if k[0] == "var"}
        while True:
            self.fresh += 1
            name = f"?{self.fresh}"
            if name not in names:
                return Var(name)

    def run(self, branch: List[Signed], done: FrozenSet[int], used: FrozenSet[Tuple[int, tuple]], rounds: int) -> Node:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise _OutOfBudget("time")
        c = find_closure(branch)
        if c is not None:
            return Node("close", closure=c)
        for want in ("alpha", "delta"):
            for i, sf in enumerate(branch):
                if i in done or kind(sf) != want:
                    continue
                if want == "delta":
                    term = self.new_constant(branch)
                    child = self.run(branch + expand(sf, term)[0], done | {i}, used, rounds)
                    return Node("delta", i, term, (child,))
                return Node("alpha", i, None, (self.run(branch + expand(sf)[0], done | {i}, used, rounds),))
        betas = [i for i, sf in enumerate(branch) if i not in done and kind(sf) == "beta"]
        if betas:
            # Prefer a split that leaves at most one branch open.
            pick = betas[0]
            for i in betas:
                if sum(find_closure(branch + ext) is None for ext in expand(branch[i])) <= 1:
                    pick = i
                    break
            kids = tuple(self.run(branch + ext, done | {pick}, used, rounds) for ext in expand(branch[pick]))
            return Node("beta", pick, None, kids)
        if rounds >= self.limits.depth:
            raise _OutOfBudget("depth")
        terms: Dict[tuple, Expr] = {}
        for _, f in branch:
            ground_terms(f, out=terms)
        pending = []
        gammas = [i for i, sf in enumerate(branch) if kind(sf) == "gamma"]
        if not gammas:
            raise _OutOfBudget("saturated")
        if not terms:
            t = self.new_constant(branch)
            terms[alpha_key(t)] = t
        for i in gammas:
            for k, t in terms.items():
                if (i, k) not in used:
                    pending.append((i, k, t))
        if not pending:
            raise _OutOfBudget("saturated")
        if len(used) + len(pending) > self.limits.gamma:
            raise _OutOfBudget("gamma")
        return self._gamma_chain(branch, done, used, rounds, pending)

    def _gamma_chain(self, branch, done, used, rounds, pending) -> Node:
        if not pending:
            return self.run(branch, done, used, rounds + 1)
        (i, k, t), rest = pending[0], pending[1:]
        ext = expand(branch[i], t)[0]
        child = self._gamma_chain(branch + ext, done, used | {(i, k)}, rounds, rest)
        return Node("gamma", i, t, (child,))


def _check_layer(f: Expr) -> None:
    if FREGE in layer_features(f):
        raise LayerError("the prover handles first-order formulas only")


def close_universally(f: Expr, keep: Set[str] = frozenset()) -> Expr:
    for v in sorted(free_obj_vars(f) - set(keep), reverse=True):
        f = Forall(v, f)
    return f


def prove_from(premises: Sequence[Expr], goal: Expr, limits: Limits = Limits()) -> Result:
    """Try to show ``goal`` from closed ``premises``.

    Free variables of the goal act as constants.
    """
    for f in list(premises) + [goal]:
        _check_layer(f)
    roots: List[Signed] = [(True, normalize(p)) for p in premises] + [(False, normalize(goal))]
    try:
        tree = _Search(limits).run(roots, frozenset(), frozenset(), 0)
    except _OutOfBudget as exc:
        return Unknown(f"no closed tableau: {exc.args[0]} limit reached")
    except RecursionError:
        return Unknown("no closed tableau: recursion limit reached")
    return Proved(Trace(tuple(roots), tree))


def prove(f: Expr, limits: Limits = Limits()) -> Result:
    """Try to prove ``f``; never answers "disproved"."""
    return prove_from((), f, limits)


__all__ = ["Limits", "Node", "Proved", "Trace", "Unknown", "close_universally", "prove", "prove_from"]
