"""Randomized invariants: round-trip, capture-freedom, alpha, composition, spans."""

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from begriff.errors import CaptureError
from begriff.prover.models import Model, evaluate
from begriff.substitution import substitute_simultaneous
from begriff.syntax import (
    FOL, And, Atom, Cond, Exists, Forall, Horiz, Iff, Not, Or, Var,
    alpha_eq, alpha_key, free_vars, normalize, parse_formula, render,
)
from begriff.syntax.ast import children
from begriff.syntax.ops import free_obj_vars

from conftest import SCRIPTS, replay

NAMES = ["x", "y", "z", "w"]
var = st.sampled_from(NAMES).map(Var)
atom = st.builds(Atom, st.sampled_from(["in", "="]), var, var)


def _extend(children):
    binop = st.sampled_from([And, Or, Cond, Iff])
    quant = st.sampled_from([Forall, Exists])
    return st.one_of(
        st.builds(Not, children),
        st.builds(lambda c, a, b: c(a, b), binop, children, children),
        st.builds(lambda q, v, b: q(v, b), quant, st.sampled_from(NAMES), children),
    )


formulas = st.recursive(atom, _extend, max_leaves=8)


def random_model(seed: int) -> Model:
    rng = random.Random(seed)
    k = rng.randint(1, 3)
    member = frozenset((i, j) for i in range(k) for j in range(k) if rng.random() < 0.5)
    return Model(k, member, tuple((n, rng.randrange(k)) for n in NAMES))


@settings(max_examples=300, deadline=None)
@given(formulas)
def test_render_parse_round_trip(f):
    assert parse_formula(render(f), FOL) == f


@settings(max_examples=1000, deadline=None)
@given(formulas, st.sampled_from(NAMES), var, st.integers(0, 10_000))
def test_substitution_is_capture_free(f, x, t, seed):
    out = substitute_simultaneous(f, {x: t}, rename=True)
    expected = (free_obj_vars(f) - {x}) | (free_obj_vars(t) if x in free_obj_vars(f) else set())
    if not (isinstance(t, Var) and t.name == x):
        assert free_obj_vars(out) == expected
    # semantic substitution lemma: f[t/x] under env = f under env[x := value of t]
    m = random_model(seed)
    env = dict(m.constants)
    assert evaluate(out, m, env) == evaluate(f, m, {**env, x: env[t.name]})
    try:
        strict = substitute_simultaneous(f, {x: t})
    except CaptureError:
        return
    assert alpha_eq(strict, out)


@settings(max_examples=300, deadline=None)
@given(formulas, st.sampled_from(NAMES), st.sampled_from(["u", "v"]))
def test_bound_renaming_preserves_alpha_class(f, x, fresh):
    q = Forall(x, f)
    renamed = Forall(fresh, substitute_simultaneous(f, {x: Var(fresh)}, rename=True))
    assert alpha_key(q) == alpha_key(renamed)
    assert free_vars(q) == free_vars(renamed)


@settings(max_examples=300, deadline=None)
@given(formulas, var, var, st.integers(0, 10_000))
def test_composition(f, t, u, seed):
    # f[t/x][u/y] and f[t[u/y]/x, u/y] agree semantically
    a = substitute_simultaneous(substitute_simultaneous(f, {"x": t}, rename=True), {"y": u}, rename=True)
    tu = u if t.name == "y" else t
    b = substitute_simultaneous(f, {"x": tu, "y": u}, rename=True)
    m = random_model(seed)
    env = dict(m.constants)
    assert evaluate(a, m, env) == evaluate(b, m, env)


@settings(max_examples=200, deadline=None)
@given(formulas, st.integers(1, 3))
def test_horizontal_normalization(f, n):
    wrapped = f
    for _ in range(n):
        wrapped = Horiz(wrapped)
    assert normalize(wrapped) == normalize(f)
    assert normalize(normalize(f)) == normalize(f)


@settings(max_examples=200, deadline=None)
@given(formulas)
def test_spans_nest(f):
    text = render(f)
    parsed = parse_formula(text, FOL)

    def check(e, outer):
        if e.span is not None:
            assert 0 <= e.span.start <= e.span.end <= len(text)
            if outer is not None:
                assert outer.start <= e.span.start and e.span.end <= outer.end
            outer = e.span
        for c in children(e):
            check(c, outer)

    check(parsed, None)


def test_corpus_round_trip():
    seen = 0
    for name in SCRIPTS:
        res = replay(name)
        th = res.theory
        consts = list(th.definitions)
        for thm in th:
            text = render(thm.formula)
            back = parse_formula(text, th.layer, constants=consts)
            assert normalize(back) == normalize(thm.formula), (name, thm.id, text)
            seen += 1
    assert seen > 40


def test_mode_monotonicity():
    for name in SCRIPTS:
        guarded = replay(name, "guarded")
        classical = replay(name, "classical")
        for s in guarded.steps:
            if s.status == "certified" and s.rule != "guard":
                c = classical.step(s.id)
                assert c.status == "certified", (name, s.id)
                assert alpha_eq(guarded.theory.theorem(s.id).formula, classical.theory.theorem(s.id).formula)

