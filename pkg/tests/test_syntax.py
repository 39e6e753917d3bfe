import pytest

from begriff.errors import LayerError, ParseError
from begriff.syntax import (
    FOL, FREGE, And, Atom, Cond, Const, Cov, Exists, Forall, FunApp, Horiz, Iff, Mem, Not, Or, Var,
    alpha_eq, free_vars, normalize, parse_formula, parse_term, render,
)
from begriff.syntax.ops import all_names, preorder


def fol(text, **kw):
    return parse_formula(text, FOL, **kw)


def frege(text, **kw):
    return parse_formula(text, FREGE, **kw)


x, y, z = Var("x"), Var("y"), Var("z")


class TestPrecedence:
    def test_iff_and_cond_are_right_associative(self):
        assert fol("x in y -> y in z -> z in x") == Cond(Atom("in", x, y), Cond(Atom("in", y, z), Atom("in", z, x)))
        f = fol("x = x <-> y = y <-> z = z")
        assert isinstance(f, Iff) and isinstance(f.right, Iff)

    def test_and_binds_tighter_than_or(self):
        f = fol("x in y | y in z & z in x")
        assert isinstance(f, Or) and isinstance(f.right, And)

    def test_not_covers_identity(self):
        assert fol("not x = y") == Not(Atom("=", x, y))

    def test_binder_body_extends_right(self):
        f = fol("all x. x in y -> y in x")
        assert isinstance(f, Forall) and isinstance(f.body, Cond)

    def test_unicode_spellings(self):
        assert fol("∀x. (x ∈ y ↔ ¬x ∈ x)") == fol("all x. (x in y <-> not x in x)")


class TestFregeLayer:
    def test_implicit_horizontal(self):
        f = frege("a mem b -> c")
        assert f == Cond(Horiz(Mem(Var("a"), Var("b"))), Horiz(Var("c")))

    def test_function_application_and_course_of_values(self):
        t = parse_term("ext e. f(e)", layer=FREGE)
        assert t == Cov("e", FunApp("f", (Var("e"),)))

    def test_prefixed_operand_of_identity_needs_parentheses(self):
        with pytest.raises(ParseError):
            frege("horiz f(a) = horiz g(a)")
        assert isinstance(frege("(horiz f(a)) = (horiz g(a))"), Atom)

    def test_layers_do_not_mix(self):
        with pytest.raises(LayerError):
            fol("x mem y")


class TestErrors:
    @pytest.mark.parametrize("text", ["x in", "(x = y", "all . x = x", "x = y )", "x @ y"])
    def test_malformed(self, text):
        with pytest.raises(ParseError):
            fol(text)

    def test_error_carries_span(self):
        with pytest.raises(ParseError) as info:
            fol("x = = y")
        assert info.value.span is not None


class TestRender:
    @pytest.mark.parametrize(
        "text",
        [
            "all x. (x in y <-> not x in x)",
            "exists y. all x. (x in y <-> not x = x)",
            "(x in y -> y in z) -> x in z",
            "not (all x. x = x) | y = y & z in z",
        ],
    )
    def test_round_trip_fol(self, text):
        f = fol(text)
        assert fol(render(f)) == f

    def test_round_trip_frege_with_defined_constant(self):
        f = frege("V mem V -> not V mem V", constants=["V"])
        assert isinstance(f.ante.body.left, Const)
        assert frege(render(f), constants=["V"]) == f

    def test_unicode_style_parses_back(self):
        f = fol("all x. (x in y <-> not x in x)")
        assert fol(render(f, "unicode")) == f


class TestOps:
    def test_alpha_equivalence(self):
        assert alpha_eq(fol("all x. x in y"), fol("all z. z in y"))
        assert not alpha_eq(fol("all x. x in y"), fol("all y. y in y"))

    def test_free_vars(self):
        assert free_vars(fol("all x. (x in y & exists z. z = w)")) == {"y", "w"}

    def test_normalize_collapses_horizontal_of_formula(self):
        f = Horiz(Horiz(Not(Horiz(Mem(Var("a"), Var("b"))))))
        assert normalize(f) == Not(Horiz(Mem(Var("a"), Var("b"))))

    def test_normalize_keeps_horizontal_of_term(self):
        h = Horiz(Var("a"))
        assert normalize(h) == h

    def test_all_names_and_preorder(self):
        f = fol("all x. x in y")
        assert all_names(f) == {"x", "y"}
        assert [p for p, _ in preorder(f)] == [(), (0,), (0, 0), (0, 1)]

    def test_exists_parses(self):
        assert fol("exists x. x = x") == Exists("x", Atom("=", x, x))
