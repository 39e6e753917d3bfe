"""The theorem store.

Only :class:`Theory` mints :class:`Theorem` values. Every certified formula
is recorded with the :class:`ProofStep` that produced it, and
:meth:`Theory.replay` re-runs the whole log against a fresh store.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from ..errors import GuardBlocked, LayerError, ModeError, ShapeMismatch, UnknownStep
from ..substitution import DISTINCT, SubstitutionPlan, Schema
from ..syntax.ast import Atom, Const, Cov, Expr, Horiz, Not, Span, Var, map_children, walk
from ..syntax.ops import FOL, FREGE, alpha_eq, alpha_key, constants, free_vars, layer_features, normalize
from ..syntax.render import render
from .rules import RULES, UNSOUND_RULES
from .schemas import default_schemas

CLASSICAL = "classical"
GUARDED = "guarded"
MODES = (CLASSICAL, GUARDED)

_KERNEL = object()

# Rules whose conclusion is the stated goal; for the rest a goal is a check.
GOAL_RULES = frozenset({"taut", "fol", "assume"})


@dataclass(frozen=True)
class Theorem:
    """A kernel-certified formula. ``assumptions`` lists open hypotheses."""

    id: str
    formula: Expr
    step: str
    mode: str
    assumptions: FrozenSet[str] = frozenset()
    token: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.token is not _KERNEL:
            raise TypeError("theorems are constructed only by the kernel")

    def text(self, style: str = "ascii") -> str:
        return render(self.formula, style)


@dataclass(frozen=True)
class ProofStep:
    id: str
    rule: str
    premises: Tuple[str, ...]
    plan: Optional[SubstitutionPlan]
    conclusion: Expr
    args: Tuple[Tuple[str, object], ...] = ()
    span: Optional[Span] = None
    anchor: Optional[str] = None

    @property
    def sound(self) -> bool:
        return self.rule not in UNSOUND_RULES

    def arg(self, key: str, default=None):
        return dict(self.args).get(key, default)


@dataclass(frozen=True)
class Guard:
    theorem: str
    term: Expr


@dataclass(frozen=True)
class ConsistencyReport:
    pairs: Tuple[Tuple[str, str], ...]
    deep: bool = False

    @property
    def consistent(self) -> bool:
        return not self.pairs


class Theory:
    """Signature, schemas, definitions, theorem store and mode."""

    def __init__(
        self,
        name: str = "theory",
        layer: str = FOL,
        mode: str = CLASSICAL,
        convention: str = DISTINCT,
        schemas: Optional[Dict[str, Schema]] = None,
    ):
        if layer not in (FOL, FREGE):
            raise ValueError(f"unknown layer {layer!r}")
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
        self.name = name
        self.layer = layer
        self.mode = mode
        self.convention = convention
        self.schemas: Dict[str, Schema] = dict(schemas) if schemas is not None else default_schemas(layer)
        self.definitions: Dict[str, Expr] = {}
        self.operations: Dict[str, int] = {}
        self.store: Dict[str, Theorem] = {}
        self.steps: Dict[str, ProofStep] = {}
        self.guards: Dict[tuple, Guard] = {}
        self.flags: List[Tuple[str, str]] = []
        self._keys: Dict[tuple, str] = {}
        self._log: List[tuple] = []
        self._auto = 0

    # --- signature ---------------------------------------------------------

    def schema(self, sid: str) -> Schema:
        if sid not in self.schemas:
            raise UnknownStep(f"no schema {sid!r} in the {self.layer} layer")
        return self.schemas[sid]

    def define(self, name: str, definiens: Expr) -> None:
        """Register ``name`` as an abbreviation for the closed ``definiens``."""
        if name in self.definitions or name in self.operations:
            raise ShapeMismatch(f"{name} is already defined")
        if free_vars(definiens):
            raise ShapeMismatch(f"definiens of {name} has free variables {sorted(free_vars(definiens))}")
        if name in constants(definiens):
            raise ShapeMismatch(f"{name} occurs in its own definiens")
        unknown = constants(definiens) - set(self.definitions) - set(self.operations)
        if unknown:
            raise ShapeMismatch(f"definiens of {name} uses undefined {sorted(unknown)}")
        self.definitions[name] = normalize(definiens)
        self._log.append(("define", name, definiens))

    def declare_operation(self, symbol: str, arity: int) -> None:
        if symbol in self.definitions or symbol in self.operations:
            raise ShapeMismatch(f"{symbol} is already in the signature")
        self.operations[symbol] = arity
        self._log.append(("operation", symbol, arity))

    def definiens(self, name: str) -> Expr:
        if name not in self.definitions:
            raise ShapeMismatch(f"{name} is not a defined constant")
        return self.definitions[name]

    def unfold_all(self, e: Expr) -> Expr:
        """Replace every defined constant by its definiens, recursively."""
        if isinstance(e, Const) and e.name in self.definitions:
            return self.unfold_all(self.definitions[e.name])
        return map_children(e, self.unfold_all)

    # --- store -------------------------------------------------------------

    def theorem(self, ref: Union[str, Theorem]) -> Theorem:
        if isinstance(ref, Theorem):
            if self.store.get(ref.id) is not ref:
                raise UnknownStep(f"theorem {ref.id} does not belong to this theory")
            return ref
        if ref not in self.store:
            raise UnknownStep(f"no theorem {ref!r}")
        return self.store[ref]

    def __contains__(self, ref: str) -> bool:
        return ref in self.store

    def __iter__(self):
        return iter(self.store.values())

    def __len__(self) -> int:
        return len(self.store)

    def find(self, formula: Expr) -> Optional[Theorem]:
        """A stored theorem alpha-equivalent to ``formula``, if any."""
        tid = self._keys.get(alpha_key(normalize(formula)))
        return self.store[tid] if tid is not None else None

    def _fresh_id(self) -> str:
        while True:
            self._auto += 1
            tid = f"t{self._auto}"
            if tid not in self.store:
                return tid

    # --- guards ------------------------------------------------------------

    def check_guard(self, var: str, term: Expr) -> None:
        if self.mode != GUARDED:
            return
        g = self.guards.get(alpha_key(normalize(term)))
        if g is not None:
            raise GuardBlocked(var, render(term), g.theorem)

    def register_guard(self, ref: Union[str, Theorem]) -> Guard:
        """Index a distinctness theorem; later instantiations by its term are blocked."""
        if self.mode != GUARDED:
            raise ModeError("guards can only be registered in guarded mode")
        thm = self.theorem(ref)
        term = guarded_term(thm.formula, self.definitions)
        g = Guard(thm.id, term)
        self.guards.setdefault(alpha_key(normalize(term)), g)
        self._log.append(("guard", thm.id))
        return g

    # --- inference ---------------------------------------------------------

    def axiom(
        self,
        schema: str,
        plan: Optional[SubstitutionPlan] = None,
        *,
        id: Optional[str] = None,
        anchor: Optional[str] = None,
        span: Optional[Span] = None,
    ) -> Theorem:
        return self.infer("axiom", (), plan, id=id, anchor=anchor, span=span, schema=schema)

    def instantiate_theorem(self, ref, var: str, t: Expr, *, id: Optional[str] = None, anchor=None) -> Theorem:
        thm = self.theorem(ref)
        return self.infer("inst", [thm], SubstitutionPlan(((var, t),)), id=id, anchor=anchor)

    def infer(
        self,
        rule: str,
        premises: Sequence[Union[str, Theorem]] = (),
        plan: Optional[SubstitutionPlan] = None,
        *,
        id: Optional[str] = None,
        anchor: Optional[str] = None,
        span: Optional[Span] = None,
        **args,
    ) -> Theorem:
        if rule not in RULES:
            raise UnknownStep(f"unknown rule {rule!r}")
        fn, arity = RULES[rule]
        prems = [self.theorem(p) for p in premises]
        if arity is not None and len(prems) != arity:
            raise ShapeMismatch(f"{rule} takes {arity} premise(s), got {len(prems)}")
        tid = id if id is not None else self._fresh_id()
        if tid in self.store:
            raise ShapeMismatch(f"theorem id {tid!r} is already used")
        assumptions = frozenset().union(*(p.assumptions for p in prems)) if prems else frozenset()
        call_args = dict(args)
        if rule == "gen":
            call_args["_assumption_formulas"] = [self.store[a].formula for a in assumptions]
        if rule == "fol":
            call_args["_fixed"] = set().union(*(free_vars(self.store[a].formula) for a in assumptions))
        claimed = call_args.pop("goal", None) if rule not in GOAL_RULES else None
        conclusion = fn(self, [p.formula for p in prems], plan, call_args)
        if claimed is not None and not alpha_eq(normalize(claimed), normalize(conclusion)):
            raise ShapeMismatch(f"{rule} concludes {render(conclusion)}, not the stated goal")
        self._check_closed_vocabulary(conclusion)
        if rule == "assume":
            assumptions = frozenset({tid})
        step = ProofStep(
            tid, rule, tuple(p.id for p in prems), plan, conclusion, tuple(sorted(args.items())), span, anchor
        )
        return self._record(step, assumptions)

    def _check_closed_vocabulary(self, f: Expr) -> None:
        feats = layer_features(f)
        if feats - {self.layer}:
            raise LayerError(f"conclusion uses {sorted(feats - {self.layer})} vocabulary in a {self.layer} theory")
        for n in walk(f):
            if isinstance(n, Const) and n.name not in self.definitions and n.name not in self.operations:
                raise ShapeMismatch(f"unregistered constant {n.name}")

    def _record(self, step: ProofStep, assumptions: FrozenSet[str]) -> Theorem:
        thm = Theorem(step.id, step.conclusion, step.id, self.mode, assumptions, _KERNEL)
        key = alpha_key(normalize(step.conclusion))
        inner = _unnegated_key(step.conclusion)
        if inner is not None and inner in self._keys:
            self.flags.append((self._keys[inner], thm.id))
        elif _negation_key(step.conclusion) in self._keys:
            self.flags.append((thm.id, self._keys[_negation_key(step.conclusion)]))
        self.store[thm.id] = thm
        self.steps[thm.id] = step
        self._keys.setdefault(key, thm.id)
        self._log.append(("step", step))
        return thm

    # --- audits ------------------------------------------------------------

    def check_consistency(self, deep: bool = False) -> ConsistencyReport:
        """Pairs ``(phi, not phi)`` in the store, identified by theorem ids.

        The default comparison is up to alpha-equivalence after horizontal
        normalization. ``deep=True`` also unfolds defined constants, reads
        identities symmetrically and cancels double negations.
        """
        canon = (lambda f: _canonical(self.unfold_all(f))) if deep else normalize
        by_key: Dict[tuple, str] = {}
        for thm in self.store.values():
            by_key.setdefault(alpha_key(canon(thm.formula)), thm.id)
        pairs = []
        for thm in self.store.values():
            f = canon(thm.formula)
            if isinstance(f, Not):
                pos = by_key.get(alpha_key(f.body))
                if pos is not None and by_key.get(alpha_key(f)) == thm.id:
                    pairs.append((pos, thm.id))
        return ConsistencyReport(tuple(pairs), deep)

    def audit(self) -> List[ProofStep]:
        """Steps that used a rule outside the sound core."""
        return [s for s in self.steps.values() if not s.sound]

    def replay(self) -> "Theory":
        """Re-run the full log in a fresh theory; raises if any step differs."""
        fresh = Theory(self.name, self.layer, self.mode, self.convention, self.schemas)
        for entry in self._log:
            kind = entry[0]
            if kind == "define":
                fresh.define(entry[1], entry[2])
            elif kind == "operation":
                fresh.declare_operation(entry[1], entry[2])
            elif kind == "guard":
                fresh.register_guard(entry[1])
            else:
                s: ProofStep = entry[1]
                thm = fresh.infer(
                    s.rule, s.premises, s.plan, id=s.id, anchor=s.anchor, span=s.span, **dict(s.args)
                )
                if thm.formula != s.conclusion:
                    raise ShapeMismatch(f"replay of {s.id} produced a different formula")
        return fresh


def guarded_term(f: Expr, definitions: Dict[str, Expr]) -> Expr:
    """The term a distinctness theorem protects.

    Accepted shapes are ``not (v = T)`` (or ``not (T = v)``) with ``v`` a free
    variable, and ``not (T = T)``; ``T`` must be closed and either a
    course-of-values term or a defined constant.
    """
    f = normalize(f)
    if not (isinstance(f, Not) and isinstance(f.body, Atom) and f.body.pred == "="):
        raise ShapeMismatch("a guard must have the shape not (a = T)")
    left, right = f.body.left, f.body.right

    def ok(t: Expr) -> bool:
        closed = not free_vars(t)
        return closed and (isinstance(t, Cov) or (isinstance(t, Const) and t.name in definitions))

    if isinstance(left, Var) and ok(right):
        return right
    if isinstance(right, Var) and ok(left):
        return left
    if alpha_key(left) == alpha_key(right) and ok(left):
        return left
    raise ShapeMismatch("the guarded term must be a closed course-of-values term or defined constant")


def _negation_key(f: Expr) -> tuple:
    return alpha_key(normalize(Not(f)))


def _unnegated_key(f: Expr) -> Optional[tuple]:
    f = normalize(f)
    return alpha_key(f.body) if isinstance(f, Not) else None


def _canonical(e: Expr) -> Expr:
    e = normalize(map_children(e, _canonical))
    if isinstance(e, Not) and isinstance(e.body, Not):
        return e.body.body
    if isinstance(e, Atom) and e.pred == "=":
        a, b = sorted((e.left, e.right), key=lambda t: repr(alpha_key(t)))
        return replace(e, left=a, right=b)
    if isinstance(e, Horiz) and isinstance(e.body, Horiz):
        return e.body
    return e

