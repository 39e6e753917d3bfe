"""Finite models of first-order membership theories.

A model has carrier ``{0, ..., size-1}``, a membership relation, values
for constants (defined constants and free variables alike) and tables for
operation symbols. :func:`evaluate` is a direct recursive evaluator kept
deliberately simple; the search compiles formulas into closures instead,
and every model it returns is re-checked with :func:`evaluate`.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from ..errors import LayerError
from ..syntax.ast import And, Atom, Cond, Const, Exists, Expr, Forall, Iff, Not, OpApp, Or, Var, walk
from ..syntax.ops import FREGE, free_obj_vars, layer_features


@dataclass(frozen=True)
class Model:
    size: int
    member: FrozenSet[Tuple[int, int]]
    constants: Tuple[Tuple[str, int], ...] = ()
    functions: Tuple[Tuple[str, Tuple[Tuple[Tuple[int, ...], int], ...]], ...] = ()

    def const(self, name: str) -> int:
        return dict(self.constants)[name]

    def apply(self, symbol: str, args: Tuple[int, ...]) -> int:
        return dict(dict(self.functions)[symbol])[args]

    def members(self, b: int) -> List[int]:
        return [a for a in range(self.size) if (a, b) in self.member]

    def as_dict(self) -> dict:
        return {
            "size": self.size,
            "member": sorted([list(p) for p in self.member]),
            "constants": dict(self.constants),
            "functions": {s: [[list(k), v] for k, v in tbl] for s, tbl in self.functions},
        }


@dataclass(frozen=True)
class NoneUpTo:
    max_size: int


@dataclass(frozen=True)
class Signature:
    constants: Tuple[str, ...] = ()
    operations: Tuple[Tuple[str, int], ...] = ()

    @classmethod
    def of(cls, formulas: Sequence[Expr]) -> "Signature":
        consts: Dict[str, None] = {}
        ops: Dict[str, int] = {}
        for f in formulas:
            for v in sorted(free_obj_vars(f)):
                consts.setdefault(v)
            for n in walk(f):
                if isinstance(n, Const):
                    consts.setdefault(n.name)
                elif isinstance(n, OpApp):
                    if ops.setdefault(n.symbol, len(n.args)) != len(n.args):
                        raise ValueError(f"{n.symbol} used with two arities")
        return cls(tuple(consts), tuple(ops.items()))

    def merged(self, other: "Signature") -> "Signature":
        cs = dict.fromkeys(self.constants + other.constants)
        ops = dict(self.operations)
        ops.update(other.operations)
        return Signature(tuple(cs), tuple(ops.items()))


# --- the oracle evaluator --------------------------------------------------


def evaluate(f: Expr, m: Model, env: Optional[Mapping[str, int]] = None) -> bool:
    """Truth of ``f`` in ``m`` under ``env``; free variables fall back to constants."""
    env = dict(env or {})
    if isinstance(f, Atom):
        a, b = _term(f.left, m, env), _term(f.right, m, env)
        return a == b if f.pred == "=" else (a, b) in m.member
    if isinstance(f, Not):
        return not evaluate(f.body, m, env)
    if isinstance(f, And):
        return evaluate(f.left, m, env) and evaluate(f.right, m, env)
    if isinstance(f, Or):
        return evaluate(f.left, m, env) or evaluate(f.right, m, env)
    if isinstance(f, Cond):
        return (not evaluate(f.ante, m, env)) or evaluate(f.cons, m, env)
    if isinstance(f, Iff):
        return evaluate(f.left, m, env) == evaluate(f.right, m, env)
    if isinstance(f, Forall):
        return all(evaluate(f.body, m, {**env, f.var: d}) for d in range(m.size))
    if isinstance(f, Exists):
        return any(evaluate(f.body, m, {**env, f.var: d}) for d in range(m.size))
    raise LayerError(f"cannot evaluate {type(f).__name__} in a membership model")


def _term(t: Expr, m: Model, env: Mapping[str, int]) -> int:
    if isinstance(t, Var):
        return env[t.name] if t.name in env else m.const(t.name)
    if isinstance(t, Const):
        return m.const(t.name)
    if isinstance(t, OpApp):
        return m.apply(t.symbol, tuple(_term(a, m, env) for a in t.args))
    raise LayerError(f"cannot evaluate term {type(t).__name__}")


# --- compiled evaluation for search -----------------------------------------

# A compiled formula takes (member matrix, constant values, tables, env).
Compiled = Callable[[list, dict, dict, dict], bool]


def compile_formula(f: Expr, size: int) -> Compiled:
    dom = range(size)

    def term(t):
        if isinstance(t, Var):
            n = t.name
            return lambda mem, cs, fs, env: env[n] if n in env else cs[n]
        if isinstance(t, Const):
            n = t.name
            return lambda mem, cs, fs, env: cs[n]
        if isinstance(t, OpApp):
            s, args = t.symbol, [term(a) for a in t.args]
            return lambda mem, cs, fs, env: fs[s][tuple(a(mem, cs, fs, env) for a in args)]
        raise LayerError(f"cannot evaluate term {type(t).__name__}")

    def go(f):
        if isinstance(f, Atom):
            l, r = term(f.left), term(f.right)
            if f.pred == "=":
                return lambda mem, cs, fs, env: l(mem, cs, fs, env) == r(mem, cs, fs, env)
            return lambda mem, cs, fs, env: mem[l(mem, cs, fs, env)][r(mem, cs, fs, env)]
        if isinstance(f, Not):
            b = go(f.body)
            return lambda *a: not b(*a)
        if isinstance(f, And):
            l, r = go(f.left), go(f.right)
            return lambda *a: l(*a) and r(*a)
        if isinstance(f, Or):
            l, r = go(f.left), go(f.right)
            return lambda *a: l(*a) or r(*a)
        if isinstance(f, Cond):
            l, r = go(f.ante), go(f.cons)
            return lambda *a: (not l(*a)) or r(*a)
        if isinstance(f, Iff):
            l, r = go(f.left), go(f.right)
            return lambda *a: l(*a) == r(*a)
        if isinstance(f, (Forall, Exists)):
            b, v, q = go(f.body), f.var, all if isinstance(f, Forall) else any
            return lambda mem, cs, fs, env: q(b(mem, cs, fs, {**env, v: d}) for d in dom)
        raise LayerError(f"cannot evaluate {type(f).__name__} in a membership model")

    return go(f)


def _check_fol(formulas: Sequence[Expr]) -> None:
    for f in formulas:
        if FREGE in layer_features(f):
            raise LayerError("model search handles first-order formulas only")


def iter_models(axioms: Sequence[Expr], size: int, signature: Optional[Signature] = None) -> Iterator[Model]:
    """All models of ``axioms`` with the given carrier size, in lexicographic
    order of (membership bits, constant values, operation tables)."""
    if size < 1:
        raise ValueError("carrier size must be positive")
    _check_fol(axioms)
    sig = Signature.of(axioms) if signature is None else signature.merged(Signature.of(axioms))
    compiled = [compile_formula(a, size) for a in axioms]
    cells = [(i, j) for i in range(size) for j in range(size)]
    op_shapes = [(s, list(product(range(size), repeat=n))) for s, n in sig.operations]
    for bits in range(1 << len(cells)):
        mem = [[False] * size for _ in range(size)]
        pairs = []
        for k, (i, j) in enumerate(cells):
            if bits >> (len(cells) - 1 - k) & 1:
                mem[i][j] = True
                pairs.append((i, j))
        for cvals in product(range(size), repeat=len(sig.constants)):
            cs = dict(zip(sig.constants, cvals))
            for tables in product(*(product(range(size), repeat=len(keys)) for _, keys in op_shapes)):
                fs = {s: dict(zip(keys, vals)) for (s, keys), vals in zip(op_shapes, tables)}
                if all(c(mem, cs, fs, {}) for c in compiled):
                    yield Model(
                        size,
                        frozenset(pairs),
                        tuple(cs.items()),
                        tuple((s, tuple(sorted(fs[s].items()))) for s, _ in op_shapes),
                    )


def find_model(axioms: Sequence[Expr], max_size: int) -> Union[Model, NoneUpTo]:
    """The first model by size then lexicographic order, or ``NoneUpTo``."""
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    for k in range(1, max_size + 1):
        for m in iter_models(axioms, k):
            if not all(evaluate(a, m) for a in axioms):
                raise AssertionError("search and oracle evaluator disagree")
            return m
    return NoneUpTo(max_size)
