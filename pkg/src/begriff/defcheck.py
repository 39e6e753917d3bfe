"""Proper definitions of new operation symbols.

A definition ``O(x1..xn) = y <-> psi`` is proper in a theory when

(i)   x1..xn, y are distinct variables,
(ii)  psi has no free variables other than x1..xn, y,
(iii) psi uses only primitive and previously defined symbols, and
(iv)  ``exists! y. psi`` is derivable.

:func:`check_definition` reports each restriction separately. Eliminability
is exercised by :func:`eliminate`; non-creativity by
:func:`conservativity_check`, which compares finite models of the base
theory with those that can be expanded by the new symbol.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import BegriffError
from .substitution import substitute_simultaneous
from .syntax.ast import And, Atom, Cond, Const, Exists, Expr, Forall, Iff, Not, OpApp, Or, Var, map_children, walk
from .syntax.ops import FOL, FREGE, all_names, constants, free_obj_vars, fresh_name, layer_features, normalize
from .syntax.parser import parse_formula
from .syntax.render import render

PASS = "pass"
FAIL = "fail"


@dataclass(frozen=True)
class Definition:
    symbol: str
    psi: Expr
    xs: Tuple[str, ...] = ()
    y: str = "y"

    @property
    def rank(self) -> int:
        return len(self.xs)

    def head(self, args: Optional[Sequence[Expr]] = None) -> Expr:
        args = tuple(args) if args is not None else tuple(Var(x) for x in self.xs)
        return Const(self.symbol) if self.rank == 0 else OpApp(self.symbol, args)

    def axiom(self) -> Expr:
        """The definitional axiom, universally closed."""
        f: Expr = Iff(Atom("=", self.head(), Var(self.y)), self.psi)
        for v in reversed(self.xs + (self.y,)):
            f = Forall(v, f)
        return f

    def text(self) -> str:
        args = f"({', '.join(self.xs)})" if self.xs else ""
        return f"{self.symbol}{args} = {self.y} <-> {render(self.psi)}"


@dataclass(frozen=True)
class Verdict:
    status: str
    reason: str = ""

    @property
    def passed(self) -> bool:
        return self.status == PASS


@dataclass(frozen=True)
class Conservativity:
    """``kind`` is ``NonCreativeUpTo`` or ``Creative``."""

    kind: str
    size: int
    witness: Optional[str] = None
    partial: bool = False
    base_models: int = 0
    expandable_models: int = 0
    battery: int = 0

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class DefReport:
    definition: str
    restrictions: Dict[str, Verdict]
    elimination: List[str] = field(default_factory=list)
    refutation: Optional[str] = None
    conservativity: Optional[Conservativity] = None

    @property
    def proper(self) -> bool:
        return all(v.passed for v in self.restrictions.values())

    def as_dict(self) -> dict:
        return {
            "definition": self.definition,
            "restrictions": {k: {"status": v.status, "reason": v.reason} for k, v in self.restrictions.items()},
            "proper": self.proper,
            "elimination": list(self.elimination),
            "refutation": self.refutation,
            "conservativity": self.conservativity.as_dict() if self.conservativity else None,
        }


class DefinitionError(BegriffError):
    pass


_DEF_RE = re.compile(
    r"^definition\s+(?P<sym>[A-Za-z][\w']*)\s*(?:\((?P<xs>[^)]*)\))?\s*=\s*(?P<y>[A-Za-z][\w']*)\s*<->\s*(?P<psi>.+)$"
)


def parse_definition(line: str, *, constants: Sequence[str] = (), ops: Sequence[str] = ()) -> Definition:
    """Read ``definition O(x1, ..., xn) = y <-> psi``."""
    m = _DEF_RE.match(line.strip())
    if not m:
        raise DefinitionError(f"cannot read definition {line.strip()!r}")
    xs = tuple(x.strip() for x in m.group("xs").split(",")) if m.group("xs") else ()
    psi = parse_formula(m.group("psi"), FOL, constants=constants, ops=ops)
    return Definition(m.group("sym"), psi, xs, m.group("y"))


def read_definitions(text: str, *, constants: Sequence[str] = (), ops: Sequence[str] = ()) -> List[Definition]:
    """Definitions of a ``.cs`` file, each able to use the ones before it."""
    out: List[Definition] = []
    cs, os_ = list(constants), list(ops)
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not line.startswith("definition"):
            raise DefinitionError(f"unexpected line {line!r}")
        d = parse_definition(line, constants=cs, ops=os_)
        out.append(d)
        (cs if d.rank == 0 else os_).append(d.symbol)
    return out


# --- restrictions ----------------------------------------------------------


def exists_unique(d: Definition) -> Expr:
    """``exists y. (psi & all y'. (psi[y'/y] -> y' = y))`` with a fresh y'."""
    y2 = fresh_name(d.y, all_names(d.psi) | {d.y} | set(d.xs))
    psi2 = substitute_simultaneous(d.psi, {d.y: Var(y2)}, rename=True)
    return Exists(d.y, And(d.psi, Forall(y2, Cond(psi2, Atom("=", Var(y2), Var(d.y))))))


# Prover attempts inside the checker are advisory, so they get a short budget.
PROVER_SECONDS = 1.0


def check_definition(theory, d: Definition, *, use_prover: bool = False, max_size: Optional[int] = None) -> DefReport:
    """Check restrictions (i)-(iv); failures are verdicts, not errors."""
    from .prover.tableau import Limits, Proved, close_universally, prove_from

    limits = Limits(seconds=PROVER_SECONDS)
    if theory.layer != FOL:
        raise DefinitionError("definitions are checked in first-order theories")
    vs = d.xs + (d.y,)
    dup = sorted({v for v in vs if vs.count(v) > 1})
    r1 = Verdict(FAIL, f"{', '.join(dup)} repeated") if dup else Verdict(PASS)

    extra = sorted(free_obj_vars(d.psi) - set(vs))
    r2 = Verdict(FAIL, f"{', '.join(extra)} free in psi") if extra else Verdict(PASS)

    known = set(theory.operations) | set(theory.definitions)
    used = constants(d.psi)
    if d.symbol in used:
        r3 = Verdict(FAIL, f"{d.symbol} occurs in its own definiens")
    elif d.symbol in known:
        r3 = Verdict(FAIL, f"{d.symbol} is already in the signature")
    elif used - known:
        r3 = Verdict(FAIL, f"{', '.join(sorted(used - known))} not primitive or previously defined")
    elif FREGE in layer_features(d.psi):
        r3 = Verdict(FAIL, "psi is not in the first-order language")
    else:
        r3 = Verdict(PASS)

    eu = exists_unique(d)
    hit = theory.find(eu)
    if hit is not None:
        r4 = Verdict(PASS, f"theorem {hit.id}")
    else:
        r4 = Verdict(FAIL, "exists! y psi is not in the theorem store")
        if use_prover:
            base = [close_universally(a) for a in base_axioms(theory)]
            res = prove_from(base, close_universally(eu), limits)
            if isinstance(res, Proved):
                r4 = Verdict(PASS, "derived by the prover")
    report = DefReport(d.text(), {"i": r1, "ii": r2, "iii": r3, "iv": r4})

    if not r4.passed:
        refute = Not(Exists(d.y, d.psi))
        res = prove_from([close_universally(a) for a in base_axioms(theory)], close_universally(refute), limits)
        if isinstance(res, Proved):
            report.refutation = render(close_universally(refute))
    if r1.passed and r2.passed and r3.passed:
        probe = Atom("=", d.head(), Var(fresh_name("w", set(vs) | all_names(d.psi))))
        report.elimination = [render(probe), render(eliminate(probe, d))]
        if max_size is not None:
            report.conservativity = conservativity_check(theory, d, max_size)
    return report


# --- eliminability ---------------------------------------------------------


def occurrences(f: Expr, symbol: str) -> int:
    """Count uses of ``symbol``; deliberately unrelated to the rewriter."""
    return sum(
        1
        for n in walk(f)
        if (isinstance(n, Const) and n.name == symbol) or (isinstance(n, OpApp) and n.symbol == symbol)
    )


def _innermost(t: Expr, symbol: str) -> Optional[Expr]:
    """Leftmost occurrence of the symbol whose arguments are symbol-free."""
    if isinstance(t, OpApp):
        for a in t.args:
            hit = _innermost(a, symbol)
            if hit is not None:
                return hit
        return t if t.symbol == symbol else None
    if isinstance(t, Const) and t.name == symbol:
        return t
    return None


def _replace_term(t: Expr, target: Expr, new: Expr) -> Tuple[Expr, bool]:
    if t == target:
        return new, True
    if isinstance(t, OpApp):
        args, done = [], False
        for a in t.args:
            if not done:
                a, done = _replace_term(a, target, new)
            args.append(a)
        return OpApp(t.symbol, tuple(args)), done
    return t, False


MAX_REWRITES = 10_000


def eliminate(f: Expr, d: Definition) -> Expr:
    """Rewrite away every occurrence of ``d.symbol``.

    Each atom ``A[O(t)]`` becomes ``exists y'. (psi[t/x, y'/y] & A[y'])``,
    innermost occurrence first, with ``y'`` fresh for the whole formula.
    """
    if occurrences(d.psi, d.symbol):
        raise DefinitionError(f"{d.symbol} occurs in its own definiens")
    avoid = set(all_names(f)) | (all_names(d.psi) - set(d.xs) - {d.y})
    budget = [MAX_REWRITES]

    def atom(a: Atom) -> Expr:
        for side in (a.left, a.right):
            hit = _innermost(side, d.symbol)
            if hit is not None:
                break
        else:
            return a
        budget[0] -= 1
        if budget[0] < 0:
            raise DefinitionError("elimination did not terminate")
        w = fresh_name(d.y, avoid)
        avoid.add(w)
        args = hit.args if isinstance(hit, OpApp) else ()
        inst = substitute_simultaneous(d.psi, {**dict(zip(d.xs, args)), d.y: Var(w)}, rename=True)
        avoid.update(all_names(inst))
        left, done = _replace_term(a.left, hit, Var(w))
        right = a.right if done else _replace_term(a.right, hit, Var(w))[0]
        return Exists(w, And(inst, go(Atom(a.pred, left, right))))

    def go(e: Expr) -> Expr:
        if isinstance(e, Atom):
            return atom(e)
        return map_children(e, go)

    out = normalize(go(f))
    if occurrences(out, d.symbol):
        raise DefinitionError("elimination left an occurrence behind")
    return out


# --- non-creativity --------------------------------------------------------


def base_axioms(theory) -> List[Expr]:
    """Closed axiom instances of the theory, without open assumptions."""
    out = []
    for thm in theory:
        step = theory.steps[thm.id]
        if step.rule == "axiom" and not thm.assumptions and not free_obj_vars(thm.formula):
            out.append(thm.formula)
    return out


def sentence_battery(consts: Sequence[str] = (), variables: Tuple[str, str] = ("x", "y")) -> List[Expr]:
    """Base-language sentences of quantifier depth at most two over two variables.

    Matrices are literals and binary combinations (and, or, if) of literals
    built from membership and identity atoms over the variables and any
    constants; prefixes are every one- and two-quantifier string binding
    the free variables of the matrix.
    """
    x, y = variables
    terms = [Var(x), Var(y)] + [Const(c) for c in consts]
    atoms: List[Expr] = []
    for s, t in product(terms, repeat=2):
        atoms.append(Atom("in", s, t))
    for i, s in enumerate(terms):
        for t in terms[i + 1 :]:
            atoms.append(Atom("=", s, t))
    lits = atoms + [Not(a) for a in atoms]
    matrices: List[Expr] = list(lits)
    for i, a in enumerate(lits):
        for b in lits[i + 1 :]:
            matrices += [And(a, b), Or(a, b), Cond(a, b), Cond(b, a)]
    out: List[Expr] = []
    quants = (Forall, Exists)
    for m in matrices:
        fv = free_obj_vars(m)
        if not fv:
            out.append(m)
        elif len(fv) == 1:
            v = next(iter(fv))
            out += [Q(v, m) for Q in quants]
        else:
            for order in ((x, y), (y, x)):
                for Q1, Q2 in product(quants, repeat=2):
                    out.append(Q1(order[0], Q2(order[1], m)))
    return out


def conservativity_check(
    theory,
    d: Definition,
    max_size: int,
    *,
    timeout: Optional[float] = None,
) -> Conservativity:
    """Search for a base sentence true in every model of the extended theory
    but false in some model of the base theory, up to ``max_size``."""
    from .prover.models import Signature, compile_formula, iter_models

    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    deadline = None if timeout is None else time.monotonic() + timeout
    base = base_axioms(theory)
    sig = Signature.of(base)
    sig = Signature(sig.constants + tuple(c for c in theory.definitions if c not in sig.constants), sig.operations)
    for s, n in theory.operations.items():
        if n == 0 and s not in sig.constants:
            sig = Signature(sig.constants + (s,), sig.operations)
        elif n > 0 and s not in dict(sig.operations):
            sig = Signature(sig.constants, sig.operations + ((s, n),))
    battery = sentence_battery(sig.constants)
    defax = d.axiom()
    models = []  # (size, compiled-battery truth row, expandable)
    done = 0
    partial = False
    for k in range(1, max_size + 1):
        comp = [compile_formula(s, k) for s in battery]
        for m in iter_models(base, k, sig):
            if deadline is not None and time.monotonic() > deadline:
                partial = True
                break
            ext = _expandable(m, d, defax)
            mem = [[(i, j) in m.member for j in range(k)] for i in range(k)]
            cs = dict(m.constants)
            fs = {s: dict(t) for s, t in m.functions}
            row = tuple(c(mem, cs, fs, {}) for c in comp)
            models.append((row, ext))
        if partial:
            break
        done = k
    seen = set()
    unique = []
    for i in range(len(battery)):
        vec = tuple(r[i] for r, _ in models)
        if vec not in seen:
            seen.add(vec)
            unique.append(i)
    n_ext = sum(1 for _, e in models if e)
    for i in unique:
        in_ext = all(r[i] for r, e in models if e)
        in_base = all(r[i] for r, _ in models)
        if in_ext and not in_base:
            return Conservativity(
                "Creative", done if not partial else done + 1, render(battery[i]), partial, len(models), n_ext, len(unique)
            )
    return Conservativity("NonCreativeUpTo", done, None, partial, len(models), n_ext, len(unique))


def _expandable(m, d: Definition, defax: Expr) -> bool:
    """Whether some interpretation of the new symbol satisfies its axiom."""
    from .prover.models import Model, evaluate

    k = m.size
    keys = list(product(range(k), repeat=d.rank))
    for vals in product(range(k), repeat=len(keys)):
        if d.rank == 0:
            cand = Model(k, m.member, m.constants + ((d.symbol, vals[0]),), m.functions)
        else:
            table = tuple(zip(keys, vals))
            cand = Model(k, m.member, m.constants, m.functions + ((d.symbol, table),))
        if evaluate(defax, cand):
            return True
    return False
