import itertools

import pytest

from conftest import build_net, oc
from prefcsp.cpnet import dominance_oracle, forward_sweep
from prefcsp.cprnet import AriStatement, build_cprnet, compare, total_order, unique_topo_order
from prefcsp.errors import AriNotOnNop, CyclicCprNet, EqualOutcomes, NopUncovered, NotTotallyDependent, TooManyOutcomes
from prefcsp.model import Comparison, enumerate_outcomes
from prefcsp.selftest import cpr_corpus, strict_total_order_failures

FIRST = Comparison.FIRST_PREFERRED


def test_build_valid_net(n2, r0):
    net = build_cprnet(n2, [AriStatement("A", "C")])
    assert net == r0


def test_reversed_statement_makes_a_cycle(n2):
    with pytest.raises(CyclicCprNet):
        build_cprnet(n2, [("C", "A")])


def test_missing_statement(n2):
    with pytest.raises(NopUncovered) as exc:
        build_cprnet(n2, [])
    assert exc.value.pairs == [("A", "C")]


def test_statement_on_an_arc_is_rejected(n2):
    with pytest.raises(AriNotOnNop):
        build_cprnet(n2, [("A", "C"), ("A", "B")])


def test_base_must_be_totally_dependent(n1):
    with pytest.raises(NotTotallyDependent):
        build_cprnet(n1, [])


def test_unique_topological_orders(r0, r1_doc):
    # arcs A->B, B->C and the statement A > C admit only one order
    assert unique_topo_order(r0) == ["A", "B", "C"]
    assert unique_topo_order(r1_doc.model) == ["A", "B", "C", "D"]
    two = build_cprnet(build_net({"X": ["x1", "x2"], "Y": ["y1", "y2"]}, {"Y": (["X"], {("x1",): "y1 > y2", ("x2",): "y2 > y1"})}), [])
    assert unique_topo_order(two) == ["X", "Y"]


@pytest.mark.parametrize(
    "o1,o2",
    [("a1 b1 c2", "a2 b1 c1"), ("a1 b2 c1", "a2 b2 c2"), ("a2 b2 c1", "a2 b1 c1")],
)
def test_compare_examples(r0, o1, o2):
    v = r0.vars
    assert compare(r0, oc(v, o1), oc(v, o2)) is FIRST
    assert compare(r0, oc(v, o2), oc(v, o1)) is Comparison.SECOND_PREFERRED


def test_compare_equal_outcomes(r0):
    o = oc(r0.vars, "a1 b1 c1")
    with pytest.raises(EqualOutcomes):
        compare(r0, o, o)


def test_total_order_of_fixture(r0):
    expected = "a1b1c1 a1b1c2 a1b2c2 a1b2c1 a2b2c2 a2b2c1 a2b1c1 a2b1c2".split()
    assert ["".join(o.values()) for o in total_order(r0)] == expected


def test_total_order_single_variable():
    net = build_cprnet(build_net({"X": ["x1", "x2"]}, {}), [])
    assert [o["X"] for o in total_order(net)] == ["x1", "x2"]


def test_total_order_cap(r0):
    with pytest.raises(TooManyOutcomes):
        total_order(r0, limit=7)


CORPUS = list(cpr_corpus(60, seed=21))


@pytest.mark.parametrize("k", range(len(CORPUS)))
def test_order_properties(k):
    net, _ = CORPUS[k]
    outs = list(enumerate_outcomes(net.vars))
    assert strict_total_order_failures(outs, lambda a, b: compare(net, a, b)) == []
    assert total_order(net)[0] == forward_sweep(net.base)
    # every flipping-sequence preference survives in the total order
    for a, b in itertools.permutations(outs, 2):
        if dominance_oracle(net.base, a, b):
            assert compare(net, a, b) is FIRST


@pytest.mark.parametrize("k", range(len(CORPUS)))
def test_statements_are_respected(k):
    net, _ = CORPUS[k]
    vars = net.vars
    for a in net.aris:
        x, y = a.more_important, a.less_important
        rest = [v for v in vars if v not in (x, y)]
        for w in itertools.product(*(vars.domain(v) for v in rest)):
            ctx = dict(zip(rest, w))
            row = net.base.row(x, ctx)
            for xi, xj in itertools.permutations(vars.domain(x), 2):
                if not row.prefers(xi, xj):
                    continue
                for ya, yb in itertools.product(vars.domain(y), repeat=2):
                    o1 = vars.outcome({**ctx, x: xi, y: ya})
                    o2 = vars.outcome({**ctx, x: xj, y: yb})
                    assert compare(net, o1, o2) is FIRST
