import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import oc
from prefcsp.csp import (
    Consistent,
    Constraint,
    ConstraintSet,
    Wipeout,
    check_outcome,
    propagate,
    solve_all,
    strengthen,
)
from prefcsp.errors import ConflictingBinding, ModelError, TooManyOutcomes
from prefcsp.generator import random_constraints, random_variables
from prefcsp.model import PartialAssignment, VariableSet, enumerate_outcomes

ABC = VariableSet({"A": ["a1", "a2"], "B": ["b1", "b2"], "C": ["c1", "c2"]})


def iff_set():
    lit = Constraint.iff
    return ConstraintSet(
        ABC,
        (
            lit(ABC, ("A", "a1"), ("B", "b1")),
            lit(ABC, ("A", "a2"), ("B", "b2")),
            lit(ABC, ("A", "a1"), ("C", "c1")),
            lit(ABC, ("A", "a2"), ("C", "c2")),
        ),
    )


def test_check_outcome():
    cs = iff_set()
    assert check_outcome(cs, oc(ABC, "a1 b1 c1"))
    assert not check_outcome(cs, oc(ABC, "a1 b1 c2"))
    assert check_outcome(ConstraintSet(ABC), oc(ABC, "a2 b1 c2"))


def test_solve_all_matches_brute_force():
    cs = iff_set()
    brute = []
    for a, b, c in itertools.product(*(ABC.domain(v) for v in ABC)):
        if (a == "a1") == (b == "b1") and (a == "a2") == (b == "b2") and (a == "a1") == (c == "c1") and (a == "a2") == (c == "c2"):
            brute.append(oc(ABC, f"{a} {b} {c}"))
    assert brute == [oc(ABC, "a1 b1 c1"), oc(ABC, "a2 b2 c2")]
    assert solve_all(cs) == brute


def test_solve_all_without_constraints():
    vs = VariableSet({"A": ["a1", "a2"], "B": ["b1", "b2"]})
    assert len(solve_all(ConstraintSet(vs))) == 4


def test_solve_all_cap():
    with pytest.raises(TooManyOutcomes):
        solve_all(iff_set(), limit=7)


def test_strengthen_collapses_binary_tables(r1_doc):
    c1 = r1_doc.constraints
    s = strengthen(c1, "A", "a1")
    assert s.fixed == PartialAssignment(A="a1")
    assert Constraint(("B",), [("b2",)]) in s.constraints
    assert Constraint(("D",), [("d2",)]) in s.constraints
    assert len(s.constraints) == 4


def test_strengthen_with_other_value_keeps_feasible_set(r1_doc):
    c1 = r1_doc.constraints
    s = strengthen(c1, "A", "a2")
    assert solve_all(s) == [o for o in solve_all(c1) if o["A"] == "a2"]


def test_strengthen_is_idempotent(r1_doc):
    once = strengthen(r1_doc.constraints, "A", "a1")
    assert strengthen(once, "A", "a1") == once
    with pytest.raises(ConflictingBinding):
        strengthen(once, "A", "a2")


def test_forward_propagation_after_first_literal(r1_doc):
    res = propagate(strengthen(r1_doc.constraints, "A", "a1"), level="forward")
    assert isinstance(res, Consistent)
    assert res.induced == PartialAssignment(A="a1", B="b2", D="d2")


def test_gac_sees_further_than_forward(r1_doc):
    # with B=b2 and D=d2 forced, no value of C is supported
    res = propagate(strengthen(r1_doc.constraints, "A", "a1"))
    assert res == Wipeout("C")
    assert not [o for o in solve_all(r1_doc.constraints) if o["A"] == "a1"]


def test_wipeout_on_second_literal(r1_doc):
    s = strengthen(strengthen(r1_doc.constraints, "A", "a1"), "C", "c1")
    assert propagate(s, level="forward") == Wipeout("D")
    assert propagate(s) == Wipeout("D")


def test_forced_value_in_second_constraint_set(l2_doc):
    s = strengthen(strengthen(strengthen(l2_doc.constraints, "A", "a2"), "B", "b2"), "D", "d1")
    for level in ("gac", "forward"):
        res = propagate(s, level=level)
        assert isinstance(res, Consistent)
        assert res.induced["C"] == "c2"


def test_constraint_validation():
    with pytest.raises(ModelError):
        Constraint(("A",), [])
    with pytest.raises(ModelError):
        Constraint(("A", "B", "C", "D"), [("1", "1", "1", "1")])
    with pytest.raises(ModelError):
        Constraint(("A", "A"), [("a1", "a1")])
    assert Constraint.empty(("A", "B")).is_empty
    with pytest.raises(ModelError):
        ConstraintSet(ABC, (Constraint(("A",), [("a9",)]),))


def test_empty_table_wipes_out():
    cs = ConstraintSet(ABC, (Constraint.empty(("B", "C")),))
    assert propagate(cs) == Wipeout("B")
    assert solve_all(cs) == []


def test_ternary_table():
    t = Constraint(("A", "B", "C"), [("a1", "b1", "c2"), ("a2", "b2", "c2")])
    cs = ConstraintSet(ABC, (t,))
    res = propagate(cs)
    assert res.induced == PartialAssignment(C="c2")
    res = propagate(strengthen(cs, "B", "b2"))
    assert res.induced == PartialAssignment(A="a2", B="b2", C="c2")


def _random_cs(seed):
    import random

    rng = random.Random(seed)
    vs = random_variables(rng, rng.randint(2, 4), 3)
    return vs, random_constraints(rng, vs, rng.randint(1, 5), rng.choice([0.0, 0.3, 0.6, 0.9])), rng


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["gac", "forward"]))
def test_propagation_is_sound(seed, level):
    vs, cs, rng = _random_cs(seed)
    for v in rng.sample(vs.names, rng.randint(0, len(vs) - 1)):
        cs = strengthen(cs, v, rng.choice(vs.domain(v)))
    feasible = solve_all(cs)
    res = propagate(cs, level=level)
    if isinstance(res, Wipeout):
        assert feasible == []
    else:
        assert all(o.extends(res.induced) for o in feasible)
        assert res.induced.extends(cs.fixed)
        assert all(o[v] in res.domains[v] for o in feasible for v in vs)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_strengthen_matches_filtering(seed):
    vs, cs, rng = _random_cs(seed)
    v = rng.choice(vs.names)
    x = rng.choice(vs.domain(v))
    s = strengthen(cs, v, x)
    for o in enumerate_outcomes(vs):
        assert check_outcome(s, o) == (check_outcome(cs, o) and o[v] == x)
    assert solve_all(cs) == [o for o in enumerate_outcomes(vs) if check_outcome(cs, o)]
