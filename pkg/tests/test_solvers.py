import functools
import itertools

import pytest

from conftest import build_net, oc
from prefcsp import cprnet, lptree
from prefcsp.cpnet import dominance_oracle, improving_flips, improving_sequence, restrict
from prefcsp.csp import Constraint, ConstraintSet, identity_propagator, propagate, solve_all
from prefcsp.errors import BudgetExhausted, EqualOutcomes, ModelMismatch
from prefcsp.model import PartialAssignment, VariableSet, enumerate_outcomes
from prefcsp.selftest import cpr_corpus, dominance_corpus, lp_corpus
from prefcsp.solvers import Answer, DominanceTester, acyclic_cp_dt, search_cpr, search_lp


def forbid_all(vars):
    return ConstraintSet(vars, (Constraint.empty(vars.names[:2]),))


# -- constrained optimisation -----------------------------------------------------

def test_cprnet_constrained_optimum(r1_doc):
    res = search_cpr(r1_doc.model, r1_doc.constraints)
    assert res.outcome == oc(r1_doc.vars, "a2 b2 c1 d1")
    assert res.trace[-1].kind == "found"


def test_cprnet_forward_propagation_trace(r1_doc):
    res = search_cpr(r1_doc.model, r1_doc.constraints, propagator=functools.partial(propagate, level="forward"))
    assert res.outcome == oc(r1_doc.vars, "a2 b2 c1 d1")
    kinds = [(e.kind, e.variable, e.value) for e in res.trace if e.kind in ("try", "wipeout")]
    assert kinds == [
        ("try", "A", "a1"),
        ("try", "C", "c1"),
        ("wipeout", "D", None),
        ("try", "C", "c2"),
        ("wipeout", "B", None),
        ("try", "A", "a2"),
        ("try", "B", "b2"),
    ]


def test_cprnet_without_constraints(r0):
    assert search_cpr(r0, ConstraintSet(r0.vars)).outcome == oc(r0.vars, "a1 b1 c1")


def test_cprnet_infeasible(r0):
    assert search_cpr(r0, forbid_all(r0.vars)).outcome is None


def test_lptree_constrained_optimum(l2_doc):
    res = search_lp(l2_doc.model, l2_doc.constraints)
    assert res.outcome.format() == "A=a2,B=b2,C=c2,D=d1"


def test_lptree_forward_propagation(l2_doc):
    res = search_lp(l2_doc.model, l2_doc.constraints, propagator=functools.partial(propagate, level="forward"))
    assert res.outcome.format() == "A=a2,B=b2,C=c2,D=d1"


def test_lptree_without_constraints(l1):
    assert search_lp(l1, ConstraintSet(l1.vars)).outcome == oc(l1.vars, "a1 b1 c1")


def test_lptree_infeasible(l1):
    assert search_lp(l1, forbid_all(l1.vars)).outcome is None


def test_mismatched_variables(r0, l1):
    other = VariableSet({"A": ["a1", "a2"], "B": ["b1", "b2"]})
    with pytest.raises(ModelMismatch):
        search_cpr(r0, ConstraintSet(other))
    with pytest.raises(ModelMismatch):
        search_lp(l1, ConstraintSet(other))


CPR = list(cpr_corpus(80, seed=41))
LP = list(lp_corpus(80, seed=42))


@pytest.mark.parametrize("k", range(len(CPR)))
def test_cpr_search_without_propagation_is_still_exact(k):
    net, cs = CPR[k]
    feasible = solve_all(cs)
    got = search_cpr(net, cs, propagator=identity_propagator).outcome
    assert got == cprnet.best(net, feasible)
    for level in ("gac", "forward"):
        assert search_cpr(net, cs, propagator=functools.partial(propagate, level=level)).outcome == got


@pytest.mark.parametrize("k", range(len(LP)))
def test_lp_search_without_propagation_is_still_exact(k):
    tree, cs = LP[k]
    feasible = solve_all(cs)
    got = search_lp(tree, cs, propagator=identity_propagator).outcome
    assert got == lptree.best(tree, feasible)
    for level in ("gac", "forward"):
        assert search_lp(tree, cs, propagator=functools.partial(propagate, level=level)).outcome == got


# -- dominance testing ------------------------------------------------------------

def fmt(witness):
    return ["".join(o.values()) for o in witness]


def test_dominance_no(n2):
    v = n2.vars
    res = acyclic_cp_dt(n2, oc(v, "a2 b2 c2"), oc(v, "a1 b1 c1"))
    assert res.answer is Answer.NO and res.witness is None


def test_dominance_single_flip(n2):
    v = n2.vars
    res = acyclic_cp_dt(n2, oc(v, "a2 b2 c2"), oc(v, "a2 b1 c2"))
    assert res.yes and fmt(res.witness) == ["a2b1c2", "a2b2c2"]


def test_dominance_through_a_midpoint(n2):
    v = n2.vars
    res = acyclic_cp_dt(n2, oc(v, "a1 b1 c2"), oc(v, "a2 b1 c1"))
    assert res.yes
    assert fmt(res.witness) == ["a2b1c1", "a2b2c1", "a1b2c1", "a1b2c2", "a1b1c2"]


def test_dominance_short_witness(n2):
    v = n2.vars
    res = acyclic_cp_dt(n2, oc(v, "a1 b1 c1"), oc(v, "a2 b1 c2"))
    assert fmt(res.witness) == ["a2b1c2", "a1b1c2", "a1b1c1"]
    assert len(res.witness) == len(improving_sequence(n2, oc(v, "a2 b1 c2"), oc(v, "a1 b1 c1")))


def test_dominance_equal_outcomes(n2):
    o = oc(n2.vars, "a1 b1 c1")
    with pytest.raises(EqualOutcomes):
        acyclic_cp_dt(n2, o, o)


def test_partial_row_base_case():
    net = build_net({"X": ["x1", "x2", "x3"], "Y": ["y1", "y2"]}, {"X": ((), {(): "partial x1 > x3"})})
    v = net.vars
    assert acyclic_cp_dt(net, v.outcome(X="x1", Y="y1"), v.outcome(X="x3", Y="y1")).yes
    # x1 and x2 are unordered, so no flip sequence connects them
    assert not acyclic_cp_dt(net, v.outcome(X="x1", Y="y1"), v.outcome(X="x2", Y="y1")).yes


def test_intermediate_value_is_needed():
    """X must pass x2 on the way from x3 to x1 while Y moves under each value."""
    net = build_net(
        {"X": ["x1", "x2", "x3"], "Y": ["y1", "y2", "y3"]},
        {"Y": (["X"], {("x1",): "y3 > y1 > y2", ("x2",): "y1 > y3 > y2", ("x3",): "y2 > y3 > y1"})},
    )
    v = net.vars
    o1, o2 = v.outcome(X="x1", Y="y3"), v.outcome(X="x3", Y="y1")
    assert dominance_oracle(net, o1, o2)
    res = acyclic_cp_dt(net, o1, o2)
    assert res.yes
    assert res.witness[0] == o2 and res.witness[-1] == o1


def test_budget_is_enforced(n2):
    v = n2.vars
    with pytest.raises(BudgetExhausted):
        acyclic_cp_dt(n2, oc(v, "a1 b1 c2"), oc(v, "a2 b1 c1"), budget=2)


@pytest.mark.parametrize("k,net", list(enumerate(dominance_corpus(60, seed=43))))
def test_witnesses_are_improving_sequences(k, net):
    tester = DominanceTester(net)
    for o1, o2 in itertools.permutations(enumerate_outcomes(net.vars), 2):
        res = tester.test(o1, o2)
        assert res.yes == dominance_oracle(net, o1, o2)
        if res.yes:
            w = res.witness
            assert w[0] == o2 and w[-1] == o1
            assert all(b in improving_flips(net, a) for a, b in zip(w, w[1:]))


@pytest.mark.parametrize("k,net", list(enumerate(dominance_corpus(30, seed=44))))
def test_yes_from_sub_problem_means_yes(k, net):
    """Let X be the first variable where the outcomes differ, with x1 better
    than x2. A yes on the net restricted to X's ancestors and either X value
    lifts to a yes on the full net."""
    tester = DominanceTester(net)
    for o1, o2 in itertools.permutations(enumerate_outcomes(net.vars), 2):
        x = next(n for n in net.topological_order if o1[n] != o2[n])
        if not net.row(x, o1).prefers(o1[x], o2[x]):
            continue
        context = {a: o1[a] for a in net.ancestors(x)}
        for val in (o1[x], o2[x]):
            sub = restrict(net, PartialAssignment({**context, x: val}))
            bound = [*context, x]
            a, b = o1.without(bound), o2.without(bound)
            if a != b and acyclic_cp_dt(sub, a, b).yes:
                assert dominance_oracle(net, o1, o2)
                assert tester.test(o1, o2).yes
