"""Seeded oracle-equivalence suites.

Each suite draws a corpus of small random instances and compares a fast
algorithm against an exhaustive oracle on every instance.
"""

from __future__ import annotations

import functools
import itertools
import random
import time
from dataclasses import dataclass, field

from . import cprnet, lptree
from .cpnet import CpNet, better_outcomes
from .csp import solve_all
from .generator import random_constraints, random_cpnet, random_cprnet, random_lptree, random_variables
from .model import Comparison, enumerate_outcomes
from .solvers import DominanceTester, search_cpr, search_lp

TIGHTNESS = (0.0, 0.3, 0.6, 0.9)


@dataclass
class SuiteResult:
    name: str
    instances: int = 0
    checks: int = 0
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, message: str) -> None:
        if len(self.failures) < 20:
            self.failures.append(message)
        else:
            self.failures.append("...")
            self.failures = self.failures[:21]

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return (
            f"{status} {self.name}: {self.instances} instances, {self.checks} checks, "
            f"{len(self.failures)} failures, {self.seconds:.1f}s"
        )


def _timed(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        result = fn(*args, **kwargs)
        result.seconds = time.perf_counter() - start
        return result

    return wrapper


# -- corpora ----------------------------------------------------------------------

def dominance_corpus(count: int, seed: int = 0):
    """Acyclic CP-nets, n in {2,3,4}, domains of 2 or 3, partial rows for n <= 3."""
    rng = random.Random(seed)
    for i in range(count):
        n = (2, 3, 4)[i % 3]
        vars = random_variables(rng, n, rng.choice((2, 3)))
        yield random_cpnet(rng, vars, max_parents=3, partial=0.4 if n <= 3 else 0.0)


def cpr_corpus(count: int, seed: int = 0):
    rng = random.Random(seed)
    for i in range(count):
        vars = random_variables(rng, rng.randint(2, 4), rng.choice((2, 3)))
        net = random_cprnet(rng, vars, max_parents=2, density=rng.choice((0.3, 0.6, 1.0)))
        yield net, random_constraints(rng, vars, rng.randint(1, 4), TIGHTNESS[i % 4])


def lp_corpus(count: int, seed: int = 0):
    rng = random.Random(seed)
    for i in range(count):
        vars = random_variables(rng, rng.randint(2, 4), rng.choice((2, 3)))
        tree = random_lptree(rng, vars, max_parents=2)
        yield tree, random_constraints(rng, vars, rng.randint(1, 4), TIGHTNESS[i % 4])


def td_corpus(count: int, seed: int = 0):
    """Totally dependent nets with n <= 3, from sparse to complete."""
    rng = random.Random(seed)
    for i in range(count):
        vars = random_variables(rng, rng.randint(2, 3), rng.choice((2, 3)))
        yield random_cpnet(rng, vars, 2, totally_dependent=True, density=(0.3, 0.7, 1.0)[i % 3])


def random_partial_assignment(rng: random.Random, vars) -> dict[str, str]:
    k = rng.randint(1, len(vars))
    return {v: rng.choice(vars.domain(v)) for v in rng.sample(vars.names, k)}


# -- checks -----------------------------------------------------------------------

def strict_total_order_failures(outcomes, compare) -> list[str]:
    """Sort by ``compare`` and check every ordered pair against the sorted list.

    If ``compare(l[i], l[j])`` is FIRST and ``compare(l[j], l[i])`` is SECOND
    for all i < j, the relation is asymmetric, total and transitive.
    """

    def cmp(a, b):
        return 0 if a == b else (-1 if compare(a, b) is Comparison.FIRST_PREFERRED else 1)

    ranked = sorted(outcomes, key=functools.cmp_to_key(cmp))
    bad = []
    for i, a in enumerate(ranked):
        for b in ranked[i + 1:]:
            if compare(a, b) is not Comparison.FIRST_PREFERRED or compare(b, a) is not Comparison.SECOND_PREFERRED:
                bad.append(f"{a.format()} vs {b.format()}")
                if len(bad) > 5:
                    return bad
    return bad


def oracle_relation(net: CpNet) -> dict:
    return {o: better_outcomes(net, o) for o in enumerate_outcomes(net.vars)}


@_timed
def dominance_suite(count: int = 200, seed: int = 0) -> SuiteResult:
    res = SuiteResult("dominance: recursive test vs flip-graph reachability")
    for k, net in enumerate(dominance_corpus(count, seed)):
        res.instances += 1
        better = oracle_relation(net)
        tester = DominanceTester(net)
        for o2, o1 in itertools.permutations(better, 2):
            res.checks += 1
            verdict = tester.test(o1, o2)
            if verdict.yes != (o1 in better[o2]):
                res.fail(f"net #{k}: {o1.format()} over {o2.format()}: got {verdict.answer.value}")
            elif verdict.yes:
                w = verdict.witness
                ok = w[0] == o2 and w[-1] == o1 and all(b in better[a] and sum(a[v] != b[v] for v in a) == 1 for a, b in zip(w, w[1:]))
                if not ok:
                    res.fail(f"net #{k}: bad witness for {o1.format()} over {o2.format()}")
    return res


def _check_search(res: SuiteResult, k: int, found, feasible, top) -> None:
    res.checks += 1
    if not feasible:
        if found is not None:
            res.fail(f"instance #{k}: infeasible but search returned {found.format()}")
    elif found != top:
        got = "nothing" if found is None else found.format()
        res.fail(f"instance #{k}: expected {top.format()}, got {got}")


@_timed
def cpr_search_suite(count: int = 200, seed: int = 0, propagator=None) -> SuiteResult:
    res = SuiteResult("search over CPR-nets vs best feasible outcome")
    kw = {} if propagator is None else {"propagator": propagator}
    for k, (net, cs) in enumerate(cpr_corpus(count, seed)):
        res.instances += 1
        feasible = solve_all(cs)
        _check_search(res, k, search_cpr(net, cs, **kw).outcome, feasible, cprnet.best(net, feasible))
    return res


@_timed
def lp_search_suite(count: int = 200, seed: int = 0, propagator=None) -> SuiteResult:
    res = SuiteResult("search over LP-trees vs best feasible outcome")
    kw = {} if propagator is None else {"propagator": propagator}
    for k, (tree, cs) in enumerate(lp_corpus(count, seed)):
        res.instances += 1
        feasible = solve_all(cs)
        _check_search(res, k, search_lp(tree, cs, **kw).outcome, feasible, lptree.best(tree, feasible))
    return res


@_timed
def completeness_suite(count: int = 100, seed: int = 0) -> SuiteResult:
    res = SuiteResult("totally dependent nets: complete adjacency iff all outcomes comparable")
    for k, net in enumerate(td_corpus(count, seed)):
        res.instances += 1
        res.checks += 1
        adjacent = {frozenset(e) for e in net.edges}
        complete = all(frozenset(p) in adjacent for p in itertools.combinations(net.vars.names, 2))
        better = oracle_relation(net)
        comparable = all(b in better[a] or a in better[b] for a, b in itertools.combinations(better, 2))
        if complete != comparable:
            res.fail(f"net #{k}: complete={complete} but comparable={comparable}")
    return res


@_timed
def reduction_suite(count: int = 100, seed: int = 0) -> SuiteResult:
    res = SuiteResult("LP-tree reduction: compatible and order-preserving")
    rng = random.Random(seed + 1)
    for k, (tree, _) in enumerate(lp_corpus(count, seed)):
        res.instances += 1
        w = random_partial_assignment(rng, tree.vars)
        reduced = lptree.reduce(tree, w)
        res.checks += 2
        if not lptree.is_compatible(reduced, tree, w):
            res.fail(f"tree #{k}: reduction by {w} is not compatible")
        expected = [o.without(w) for o in lptree.total_order(tree) if all(o[v] == x for v, x in w.items())]
        if lptree.total_order(reduced) != expected:
            res.fail(f"tree #{k}: reduced order differs from the filtered original order")
    return res


@_timed
def order_suite(count: int = 200, seed: int = 0) -> SuiteResult:
    res = SuiteResult("compare is a strict total order (CPR-nets and LP-trees)")
    for k, (net, _) in enumerate(cpr_corpus(count, seed)):
        res.instances += 1
        res.checks += 1
        for msg in strict_total_order_failures(enumerate_outcomes(net.vars), functools.partial(cprnet.compare, net)):
            res.fail(f"cpr #{k}: {msg}")
    for k, (tree, _) in enumerate(lp_corpus(count, seed)):
        res.instances += 1
        res.checks += 1
        for msg in strict_total_order_failures(enumerate_outcomes(tree.vars), functools.partial(lptree.compare, tree)):
            res.fail(f"lp #{k}: {msg}")
    return res


def run_all(scale: float = 1.0, seed: int = 0) -> list[SuiteResult]:
    def n(base: int) -> int:
        return max(1, round(base * scale))

    return [
        dominance_suite(n(200), seed),
        cpr_search_suite(n(200), seed),
        lp_search_suite(n(200), seed),
        completeness_suite(n(100), seed),
        reduction_suite(n(100), seed),
        order_suite(n(200), seed),
    ]
