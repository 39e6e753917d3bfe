import pytest

from begriff.kernel.script import BLOCKED, CERTIFIED, REJECTED, SKIPPED, read_header, run_script
from begriff.syntax import alpha_eq, parse_formula

from conftest import CORPUS, SCRIPTS, replay


def run_text(text, mode="classical"):
    return run_script("<test>", mode, text=text)


class TestDirectives:
    def test_unknown_directive_is_an_error_with_line(self):
        r = run_text("layer fol\nfrobnicate")
        assert not r.ok and r.error.startswith("line 2")

    def test_missing_premise_rejects_step(self):
        r = run_text("layer fol\nstep a: mp [x, y]")
        assert r.step("a").status == REJECTED and not r.ok

    def test_failed_expectation(self):
        r = run_text("layer fol\nstep a: axiom E1\nexpect a: x = x")
        assert r.step("a").status == CERTIFIED
        assert not r.ok and "expected" in r.expectations[0].message

    def test_side_condition_rejects(self):
        r = run_text("layer fol\nstep a: axiom C with phi(x) := x in y")
        assert r.step("a").status == REJECTED

    def test_goal_checked_against_conclusion(self):
        ok = run_text("layer fol\nstep a: axiom C with phi(x) := not x = x |- exists y. all x. (x in y <-> not x = x)")
        assert ok.ok
        bad = run_text("layer fol\nstep a: axiom C with phi(x) := not x = x |- exists y. all x. x in y")
        assert not bad.ok

    def test_header(self):
        h = read_header((CORPUS / "zf_star_from_E2.cs").read_text(encoding="utf-8"))
        assert h.layer == "fol" and "(I)" in h.anchors and h.kind == "script"


class TestCorpus:
    @pytest.mark.parametrize("name", SCRIPTS)
    @pytest.mark.parametrize("mode", ["classical", "guarded"])
    def test_every_script_checks(self, name, mode):
        r = replay(name, mode)
        assert r.error is None
        assert r.ok, [(s.id, s.status, s.message) for s in r.steps if s.status not in (CERTIFIED, SKIPPED)]

    def test_spans_point_at_step_lines(self):
        path = CORPUS / "frege_guarded.cs"
        text = path.read_text(encoding="utf-8")
        r = replay("frege_guarded.cs", "guarded")
        for sid, step in r.theory.steps.items():
            assert text[step.span.start : step.span.end].startswith(f"step {sid}")

    def test_guard_is_skipped_classically(self):
        r = replay("frege_guarded.cs", "classical")
        assert {s.status for s in r.steps if s.rule == "guard"} == {SKIPPED}

    def test_expected_blocked_certifies_classically(self):
        g, c = replay("frege_guarded.cs", "guarded"), replay("frege_guarded.cs", "classical")
        for sid in ("3iii", "theta", "selfV"):
            assert g.step(sid).status == BLOCKED
            assert c.step(sid).status == CERTIFIED

    def test_classical_guarded_script_is_inconsistent(self):
        assert replay("frege_guarded.cs", "classical").consistency.pairs == (("selfV", "10"),)

    def test_audit_lists_reconstruction_steps(self):
        audited = replay("frege_guarded.cs", "guarded").theory.audit()
        assert audited and {s.rule for s in audited} <= {"inspec", "corefer"}

    def test_replay_of_store(self):
        for name in SCRIPTS:
            th = replay(name, "guarded").theory
            assert len(th.replay()) == len(th)

    def test_convention(self):
        r = replay("zf_E1_convention.cs")
        assert r.step("selfd").status == REJECTED and r.step("selff").status == CERTIFIED

    def test_way_out_derivation(self):
        th = replay("frege_wayout_Vc.cs").theory
        assert {"Vc1", "Vb1"} <= set(th.store)

    def test_empty_set_uniqueness(self):
        th = replay("theory_empty.cs").theory
        eu = parse_formula(
            "exists y. ((all x. (x in y <-> not x = x)) & (all y'. ((all x. (x in y' <-> not x = x)) -> y' = y)))",
            "fol",
        )
        assert alpha_eq(th.theorem("eu").formula, eu)


def test_deep_consistency_exposes_guarded_clash():
    th = replay("frege_guarded.cs", "guarded").theory
    assert th.check_consistency().pairs == ()
    assert th.check_consistency(deep=True).pairs == (("10b", "10"),)
