import dataclasses
import time

import pytest

from begriff.errors import LayerError
from begriff.prover.check import TraceRejected, check_trace, verify_trace
from begriff.prover.models import Model, NoneUpTo, Signature, evaluate, find_model, iter_models
from begriff.prover.tableau import Limits, Node, Proved, Trace, Unknown, close_universally, prove, prove_from
from begriff.syntax import FOL, FREGE, Var, parse_formula

import oracles


def fol(t, **kw):
    return parse_formula(t, FOL, **kw)


RA = "not exists y. all x. (x in y <-> not x in x)"
E1 = "all x. all y. ((all z. (z in x <-> z in y)) <-> x = y)"


def proved(f, **kw):
    res = prove(fol(f, **kw))
    assert isinstance(res, Proved), res
    assert check_trace(res.trace)
    return res


class TestTableau:
    @pytest.mark.parametrize(
        "text",
        [
            RA,
            "all x. x = x",
            "all x. all y. (x = y -> y = x)",
            "all x. all y. all z. (x = y & y = z -> x = z)",
            "all x. all y. (x = y -> (x in x -> y in y))",
            "(all x. x in a) -> exists x. x in a",
            "not (all x. (x in y <-> not x in x))",
            "exists x. (x in a -> all y. y in a)",
        ],
    )
    def test_valid(self, text):
        proved(text)

    def test_congruence_over_operations(self):
        proved("all x. all y. (x = y -> g(x) = g(y))", ops=["g"])

    @pytest.mark.parametrize("text", ["exists y. all x. x in y", "all x. all y. x = y", "a in a"])
    def test_invalid_is_unknown(self, text):
        assert isinstance(prove(fol(text), Limits(depth=4, gamma=30)), Unknown)

    def test_unknown_on_time_budget(self):
        res = prove(fol("exists y. all x. (x in y <-> x in x)"), Limits(depth=50, gamma=10_000, seconds=0.05))
        assert isinstance(res, Unknown)

    def test_premises(self):
        res = prove_from([fol(E1)], fol("all u. all v. ((all z. (z in u <-> z in v)) -> u = v)"))
        assert isinstance(res, Proved) and check_trace(res.trace)

    def test_layer_mismatch(self):
        with pytest.raises(LayerError):
            prove(parse_formula("a mem b", FREGE))

    def test_deterministic(self):
        assert prove(fol(RA)) == prove(fol(RA))

    def test_close_universally(self):
        assert close_universally(fol("x in y"), {"y"}) == fol("all x. x in y")


class TestChecker:
    def trace(self):
        res = prove(fol(RA))
        return res.trace

    def test_accepts(self):
        verify_trace(self.trace())

    def _leaf(self, node):
        while node.rule != "close":
            node = node.children[0]
        return node

    def _replace_first_leaf(self, node, new_leaf):
        if node.rule == "close":
            return new_leaf
        kids = (self._replace_first_leaf(node.children[0], new_leaf),) + node.children[1:]
        return dataclasses.replace(node, children=kids)

    def test_rejects_bogus_closure(self):
        t = self.trace()
        bad = self._replace_first_leaf(t.tree, Node("close", closure=("pair", 0, 0)))
        with pytest.raises(TraceRejected):
            verify_trace(Trace(t.roots, bad))

    def test_rejects_missing_leaf_closure(self):
        t = self.trace()
        bad = self._replace_first_leaf(t.tree, Node("close"))
        assert not check_trace(Trace(t.roots, bad))

    def test_rejects_wrong_goal(self):
        t = self.trace()
        forged = Trace(((False, fol("exists y. all x. x in y")),), t.tree)
        assert not check_trace(forged)

    def test_rejects_stale_delta_witness(self):
        roots = ((True, fol("exists x. x in a")), (False, fol("a in a")))
        tree = Node("delta", 0, Var("a"), (Node("close", closure=("pair", 2, 1)),))
        assert not check_trace(Trace(roots, tree))


class TestModels:
    def test_e1_alone(self):
        m = find_model([fol(E1)], 2)
        assert m == Model(1, frozenset())
        # oracle: both 1-element relations are extensional; the empty one is first
        assert [sorted(r) for r in oracles.relations(1) if oracles.extensional(r, 1)][0] == []

    def test_unsatisfiable_pair(self):
        assert find_model([fol("a in a"), fol("not a in a")], 3) == NoneUpTo(3)

    def test_russell_instance_has_no_model(self):
        axioms = [fol(E1), fol("all x. (x in a <-> not x in x)")]
        assert find_model(axioms, 3) == NoneUpTo(3)
        assert all(not oracles.russell_instance_models(k) for k in (1, 2, 3))

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_guarded_russell_condition_matches_oracle(self, k):
        axioms = [fol(E1), fol("all x. ((x in a <-> not x in x) -> not x = a)")]
        found = {(m.member, m.const("a")) for m in iter_models(axioms, k)}
        assert found == set(oracles.star_models(k))

    def test_size_two_model_of_star(self):
        axioms = [fol(E1), fol("all x. ((x in a <-> not x in x) -> not x = a)")]
        m = next(iter_models(axioms, 2))
        assert all(evaluate(a, m) for a in axioms)
        assert all(evaluate(fol("(x in a <-> not x in x) -> not x = a"), m, {"x": d}) for d in range(2))

    def test_operations_are_total(self):
        axioms = [fol("all x. g(x) = x", ops=["g"])]
        m = next(iter_models(axioms, 2))
        assert [m.apply("g", (d,)) for d in range(2)] == [0, 1]

    def test_zero_size(self):
        with pytest.raises(ValueError):
            find_model([fol(E1)], 0)

    def test_signature(self):
        sig = Signature.of([fol("all x. g(x) = a", ops=["g"])])
        assert sig.constants == ("a",) and sig.operations == (("g", 1),)


def test_ra_within_limits_and_fast():
    t0 = time.perf_counter()
    res = prove(fol(RA), Limits(depth=6, gamma=100))
    assert isinstance(res, Proved) and time.perf_counter() - t0 < 1.0
