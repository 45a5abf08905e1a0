import pytest
from hypothesis import given
from hypothesis import strategies as st

from prefcsp.errors import ConflictingBinding, InvalidValue, ModelError, TooManyOutcomes, UnboundVariable
from prefcsp.model import (
    EMPTY,
    PartialAssignment,
    VariableSet,
    check_outcome_limit,
    enumerate_outcomes,
    merge,
    project,
)

ABC = VariableSet({"A": ["a1", "a2"], "B": ["b1", "b2"], "C": ["c1", "c2"]})


def test_project_keeps_requested_bindings():
    o = ABC.outcome(A="a1", B="b1", C="c1")
    assert project(o, {"A", "B"}) == PartialAssignment(A="a1", B="b1")


def test_project_to_nothing_is_empty():
    assert project(ABC.outcome(A="a1", B="b1", C="c1"), set()) == EMPTY


def test_project_unbound_variable():
    with pytest.raises(UnboundVariable):
        project(PartialAssignment(A="a1", B="b1"), {"A", "B", "C"})


def test_merge_unions_bindings():
    assert merge(PartialAssignment(A="a1"), PartialAssignment(B="b2", D="d2")) == PartialAssignment(
        A="a1", B="b2", D="d2"
    )


def test_merge_with_empty_is_identity():
    assert merge(EMPTY, PartialAssignment(A="a1")) == PartialAssignment(A="a1")


def test_merge_conflict_names_variable():
    with pytest.raises(ConflictingBinding) as exc:
        merge(PartialAssignment(A="a1"), PartialAssignment(A="a2"))
    assert exc.value.variable == "A"


def test_enumerate_order_follows_declarations():
    vs = VariableSet({"A": ["a1", "a2"], "B": ["b1", "b2"]})
    assert [o.format() for o in enumerate_outcomes(vs)] == ["A=a1,B=b1", "A=a1,B=b2", "A=a2,B=b1", "A=a2,B=b2"]


def test_enumerate_counts_product_of_domains():
    vs = VariableSet({"A": ["a1", "a2"], "B": ["b1", "b2", "b3"], "C": ["c1", "c2"], "D": ["d1", "d2"]})
    outs = list(enumerate_outcomes(vs))
    assert len(outs) == 24 == len(set(outs))


def test_enumerate_single_variable():
    vs = VariableSet({"X": ["x1", "x2", "x3"]})
    assert [o["X"] for o in enumerate_outcomes(vs)] == ["x1", "x2", "x3"]


def test_variable_set_validation():
    with pytest.raises(ModelError):
        VariableSet({"A": ["a1"]})
    with pytest.raises(ModelError):
        VariableSet({"A": ["a1", "a1"]})
    with pytest.raises(ModelError):
        VariableSet([("A", ["a1", "a2"]), ("A", ["a1", "a2"])])
    with pytest.raises(InvalidValue):
        ABC.assignment(A="a3")


def test_values_are_scoped_per_variable():
    vs = VariableSet({"X": ["lo", "hi"], "Y": ["lo", "hi"]})
    assert vs.outcome(X="lo", Y="hi")["Y"] == "hi"


def test_parse_bindings_is_order_insensitive():
    assert ABC.parse_bindings("C=c2, A=a1,B=b2") == ABC.outcome(A="a1", B="b2", C="c2")
    with pytest.raises(ConflictingBinding):
        ABC.parse_bindings("A=a1,A=a2")


def test_outcome_cap():
    check_outcome_limit(ABC, 8)
    with pytest.raises(TooManyOutcomes):
        check_outcome_limit(ABC, 7)


assignments = st.dictionaries(st.sampled_from("ABCDE"), st.sampled_from(["0", "1", "2"]), max_size=5)


@given(assignments, st.data())
def test_projection_composes(a, data):
    a = PartialAssignment(a)
    w = data.draw(st.sets(st.sampled_from(sorted(a)))) if a else set()
    u = data.draw(st.sets(st.sampled_from(sorted(w)))) if w else set()
    assert project(project(a, w), u) == project(a, u)


@given(assignments, assignments, assignments)
def test_merge_commutative_and_associative(a, b, c):
    a, b, c = PartialAssignment(a), PartialAssignment(b), PartialAssignment(c)
    try:
        left = merge(merge(a, b), c)
    except ConflictingBinding:
        return
    assert merge(b, a) == merge(a, b)
    assert merge(a, merge(b, c)) == left
    assert merge(a, EMPTY) == a
