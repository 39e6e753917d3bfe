import pytest

from begriff.errors import (
    CaptureError, GuardBlocked, LayerError, ModeError, SelectorError, ShapeMismatch, UnknownStep,
)
from begriff.kernel.rules import UNSOUND_RULES, is_tautological_consequence
from begriff.kernel.theory import CLASSICAL, GUARDED, Theorem, Theory, guarded_term
from begriff.substitution import FunctionAbstract, SubstitutionPlan
from begriff.syntax import FOL, FREGE, Var, alpha_eq, parse_formula, parse_term


def fol(t, **kw):
    return parse_formula(t, FOL, **kw)


def frege(t, **kw):
    return parse_formula(t, FREGE, **kw)


def plan(**b):
    return SubstitutionPlan(tuple(b.items()))


R = parse_term("ext e. not e mem e", layer=FREGE)


class TestStore:
    def test_theorems_cannot_be_forged(self):
        with pytest.raises(TypeError):
            Theorem("x", fol("x = x"), "x", CLASSICAL)

    def test_find_is_up_to_alpha(self):
        th = Theory(layer=FOL)
        th.axiom("E1", id="e1")
        e1 = th.theorem("e1").formula
        assert th.find(e1).id == "e1"
        assert "e1" in th and len(th) == 1

    def test_duplicate_id(self):
        th = Theory(layer=FOL)
        th.axiom("E1", id="e1")
        with pytest.raises(ShapeMismatch):
            th.axiom("E1", id="e1")

    def test_unknown_theorem_and_rule(self):
        th = Theory(layer=FOL)
        with pytest.raises(UnknownStep):
            th.infer("mp", ["nope", "nada"])
        with pytest.raises(UnknownStep):
            th.infer("magic", [])

    def test_foreign_theorem(self):
        a, b = Theory(layer=FOL), Theory(layer=FOL)
        t = a.axiom("E1")
        with pytest.raises(UnknownStep):
            b.infer("gen", [t], var="z")

    def test_arity_checked(self):
        th = Theory(layer=FOL)
        t = th.axiom("E1")
        with pytest.raises(ShapeMismatch):
            th.infer("mp", [t])


class TestRules:
    def setup_method(self):
        self.th = Theory(layer=FOL)

    def assume(self, text, id):
        return self.th.infer("assume", [], id=id, goal=fol(text))

    def test_mp(self):
        imp = self.assume("x in y -> y in x", "h1")
        ant = self.assume("x in y", "h2")
        out = self.th.infer("mp", [imp, ant])
        assert out.formula == fol("y in x")
        assert out.assumptions == {"h1", "h2"}

    def test_mp_mismatch(self):
        imp = self.assume("x in y -> y in x", "h1")
        other = self.assume("y in y", "h2")
        with pytest.raises(ShapeMismatch):
            self.th.infer("mp", [imp, other])

    def test_gen_respects_assumptions(self):
        h = self.assume("x in y", "h")
        with pytest.raises(ShapeMismatch):
            self.th.infer("gen", [h], var="x")
        assert self.th.infer("gen", [h], var="z").formula == fol("all z. x in y")

    def test_spec_and_capture(self):
        g = self.assume("all x. exists y. x in y", "g")
        assert self.th.infer("spec", [g], plan(x=Var("z"))).formula == fol("exists y. z in y")
        with pytest.raises(CaptureError):
            self.th.infer("spec", [g], plan(x=Var("y")))
        with pytest.raises(ShapeMismatch):
            self.th.infer("spec", [g], plan(y=Var("z")))

    def test_eqv_sites(self):
        h = self.assume("(x in y <-> y in x) & (y = y <-> x = x)", "h")
        second = self.th.infer("eqv", [h], name="iffcomm", at=(2,))
        assert second.formula == fol("(x in y <-> y in x) & (x = x <-> y = y)")
        with pytest.raises(SelectorError):
            self.th.infer("eqv", [h], name="iffcomm", at=(3,))

    def test_taut(self):
        h = self.assume("x in y -> not x = y", "h")
        out = self.th.infer("taut", [h], goal=fol("x = y -> not x in y"))
        assert alpha_eq(out.formula, fol("x = y -> not x in y"))
        with pytest.raises(ShapeMismatch):
            self.th.infer("taut", [h], goal=fol("x = y"))

    def test_tautology_checker(self):
        assert is_tautological_consequence([], fol("x in y | not x in y"))
        assert not is_tautological_consequence([], fol("x in y"))

    def test_fol_rule_proves_with_certificate(self):
        e1 = self.th.axiom("E1")
        goal = fol("all u. all v. ((all z. (z in u <-> z in v)) -> u = v)")
        assert self.th.infer("fol", [e1], goal=goal).formula == goal

    def test_fol_rule_refuses_invalid(self):
        with pytest.raises(ShapeMismatch):
            self.th.infer("fol", [], goal=fol("exists y. all x. x in y"))

    def test_vocabulary_is_closed(self):
        with pytest.raises(LayerError):
            self.th.infer("assume", [], goal=frege("a mem b"))


class TestFregeRules:
    def setup_method(self):
        self.th = Theory(layer=FREGE)
        self.th.define("V", R)

    def test_russell_instances(self):
        i = plan(f=FunctionAbstract(("%",), frege("not % mem %")))
        ii = plan(F=FunctionAbstract(("%",), frege("horiz %")))
        theta = self.th.axiom("P82", i.merged(ii).merged(plan(a=R)))
        r = "(ext e. not e mem e)"
        assert theta.formula == frege(f"{r} mem {r} -> not {r} mem {r}")
        iota = self.th.infer("Ig", [theta])
        assert iota.formula.body.body.left == R

    def test_fold_and_unfold(self):
        h = self.th.infer("assume", [], goal=frege("(ext e. not e mem e) mem (ext e. not e mem e)"))
        folded = self.th.infer("fold", [h], name="V")
        assert folded.formula == frege("V mem V", constants=["V"])
        one = self.th.infer("unfold", [folded], name="V", at=(1,))
        assert one.formula == frege("(ext e. not e mem e) mem V", constants=["V"])

    def test_define_rejects_open_or_circular(self):
        with pytest.raises(ShapeMismatch):
            self.th.define("W", parse_term("ext e. e mem a", layer=FREGE))
        with pytest.raises(ShapeMismatch):
            self.th.define("V", R)

    def test_unsound_rules_are_audited(self):
        h = self.th.infer("assume", [], goal=frege("all a. a mem a"))
        self.th.infer("inspec", [h], plan(a=Var("b")))
        assert {s.rule for s in self.th.audit()} == {"inspec"}
        assert UNSOUND_RULES == {"inspec", "corefer"}


class TestGuards:
    def make(self, mode):
        th = Theory(layer=FREGE, mode=mode)
        d = th.infer("assume", [], id="d", goal=frege("not a = (ext e. not e mem e)"))
        return th, d

    def test_guard_blocks_instantiation(self):
        th, d = self.make(GUARDED)
        th.register_guard(d)
        law = th.infer("assume", [], id="law", goal=frege("all a. a mem a"))
        with pytest.raises(GuardBlocked) as info:
            th.infer("spec", [law], plan(a=R))
        assert info.value.blocking_id == "d"
        assert th.infer("spec", [law], plan(a=Var("b"))).formula == frege("b mem b")

    def test_alpha_variant_is_blocked_too(self):
        th, d = self.make(GUARDED)
        th.register_guard(d)
        law = th.infer("assume", [], goal=frege("all a. a mem a"))
        with pytest.raises(GuardBlocked):
            th.infer("spec", [law], plan(a=parse_term("ext u. not u mem u", layer=FREGE)))

    def test_classical_mode_has_no_guards(self):
        th, d = self.make(CLASSICAL)
        with pytest.raises(ModeError):
            th.register_guard(d)

    def test_guard_shape(self):
        assert guarded_term(frege("not a = (ext e. not e mem e)"), {}) == R
        with pytest.raises(ShapeMismatch):
            guarded_term(frege("a = (ext e. not e mem e)"), {})
        with pytest.raises(ShapeMismatch):
            guarded_term(frege("not a = b"), {})


class TestAudits:
    def test_consistency_pairs(self):
        th = Theory(layer=FOL)
        th.infer("assume", [], id="p", goal=fol("x in x"))
        th.infer("assume", [], id="q", goal=fol("not x in x"))
        assert th.check_consistency().pairs == (("p", "q"),)
        assert th.flags == [("p", "q")]

    def test_deep_consistency_reads_identity_symmetrically(self):
        th = Theory(layer=FOL)
        th.infer("assume", [], id="p", goal=fol("x = y"))
        th.infer("assume", [], id="q", goal=fol("not y = x"))
        assert th.check_consistency().consistent
        assert th.check_consistency(deep=True).pairs == (("p", "q"),)

    def test_replay_matches(self):
        th = Theory(layer=FOL)
        e1 = th.axiom("E1", id="e1")
        th.infer("gen", [e1], id="g", var="w")
        fresh = th.replay()
        assert [t.formula for t in fresh] == [t.formula for t in th]
