"""Constrained optimisation over CPR-nets and LP-trees, and CP-net dominance testing."""

from __future__ import annotations

import enum
import itertools
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

from . import lptree as lp
from .cpnet import CpNet
from .cprnet import CprNet
from .csp import ConstraintSet, Wipeout, check_outcome, propagate, strengthen
from .errors import BudgetExhausted, ConflictingBinding, EqualOutcomes, ModelError, ModelMismatch
from .model import Outcome, PartialAssignment, merge

DEFAULT_BUDGET = 10**7

Propagator = Callable[[ConstraintSet], object]


@dataclass(frozen=True)
class TraceEvent:
    kind: str  # branch, try, wipeout, conflict, induced, found, rejected, exhausted
    variable: str | None = None
    value: str | None = None
    assignment: PartialAssignment | None = None
    depth: int = 0

    def format(self, order: Sequence[str] | None = None) -> str:
        parts = ["  " * self.depth + self.kind]
        if self.variable is not None:
            parts.append(self.variable if self.value is None else f"{self.variable}={self.value}")
        if self.assignment is not None:
            parts.append("{" + self.assignment.format(order) + "}")
        return " ".join(parts)


@dataclass
class SolveResult:
    outcome: Outcome | None
    trace: list[TraceEvent] = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return self.outcome is not None


def _check_vars(model_vars, cs: ConstraintSet) -> None:
    if model_vars != cs.vars:
        raise ModelMismatch("model and constraints are declared over different variables")


def _try_value(cs_i, propagator, K, trace, depth):
    """Propagate one branch; returns ``(K u K')`` or None when the branch dies."""
    res = propagator(cs_i)
    if isinstance(res, Wipeout):
        trace.append(TraceEvent("wipeout", res.variable, depth=depth))
        return None
    try:
        kk = merge(K, res.induced)
    except ConflictingBinding as exc:
        trace.append(TraceEvent("conflict", exc.variable, depth=depth))
        return None
    trace.append(TraceEvent("induced", assignment=res.induced, depth=depth))
    return kk


def search_cpr(net: CprNet, cs: ConstraintSet, *, propagator: Propagator = propagate) -> SolveResult:
    """Best feasible outcome of a CPR-net, or an empty result when there is none.

    Variables are instantiated in the net's importance order, each over its
    values best first. Every branch strengthens the constraints with the new
    literal, propagates, and reduces the net by whatever propagation forced.
    """
    _check_vars(net.vars, cs)
    trace: list[TraceEvent] = []

    def rec(sub: CprNet, K: PartialAssignment, C: ConstraintSet, depth: int) -> Outcome | None:
        roots = [v for v in sub.vars if not any(b == v for _, b in sub.arcs())]
        if len(roots) != 1:
            raise ModelError(f"sub-net has {len(roots)} variables without parents")
        x = roots[0]
        row = sub.base.cpts[x].rows[()]
        trace.append(TraceEvent("branch", x, depth=depth))
        for xi in row.order:
            trace.append(TraceEvent("try", x, xi, depth=depth))
            c_i = strengthen(C, x, xi)
            kk = _try_value(c_i, propagator, K.with_binding(x, xi), trace, depth)
            if kk is None:
                continue
            rest = sub.reduce({v: kk[v] for v in sub.vars if v in kk})
            if not len(rest.vars):
                if check_outcome(cs, kk):
                    trace.append(TraceEvent("found", assignment=kk, depth=depth))
                    return net.vars.outcome(kk)
                trace.append(TraceEvent("rejected", assignment=kk, depth=depth))
                continue
            found = rec(rest, kk, c_i, depth + 1)
            if found is not None:
                return found
        trace.append(TraceEvent("exhausted", x, depth=depth))
        return None

    if not len(net.vars):
        return SolveResult(net.vars.outcome({}) if check_outcome(cs, {}) else None, trace)
    return SolveResult(rec(net, PartialAssignment(), cs, 0), trace)


def search_lp(tree: lp.LpTree, cs: ConstraintSet, *, propagator: Propagator = propagate) -> SolveResult:
    """Lexicographically best feasible outcome of an LP-tree."""
    _check_vars(tree.vars, cs)
    trace: list[TraceEvent] = []

    def rec(sub: lp.LpTree, K: PartialAssignment, C: ConstraintSet, depth: int) -> Outcome | None:
        root = sub.root
        x = root.variable
        row = root.cpt.rows[()]
        trace.append(TraceEvent("branch", x, depth=depth))
        for xi in row.order:
            trace.append(TraceEvent("try", x, xi, depth=depth))
            c_i = strengthen(C, x, xi)
            kk = _try_value(c_i, propagator, K.with_binding(x, xi), trace, depth)
            if kk is None:
                continue
            rest = lp.reduce(sub, {v: kk[v] for v in sub.vars if v in kk})
            if rest.is_empty:
                if check_outcome(cs, kk):
                    trace.append(TraceEvent("found", assignment=kk, depth=depth))
                    return tree.vars.outcome(kk)
                trace.append(TraceEvent("rejected", assignment=kk, depth=depth))
                continue
            found = rec(rest, kk, c_i, depth + 1)
            if found is not None:
                return found
        trace.append(TraceEvent("exhausted", x, depth=depth))
        return None

    if tree.is_empty:
        return SolveResult(tree.vars.outcome({}) if check_outcome(cs, {}) else None, trace)
    return SolveResult(rec(tree, PartialAssignment(), cs, 0), trace)


# -- dominance testing ----------------------------------------------------------

class Answer(enum.Enum):
    YES = "yes"
    NO = "no"


@dataclass(frozen=True)
class DominanceVerdict:
    answer: Answer
    witness: tuple[Outcome, ...] | None = None

    @property
    def yes(self) -> bool:
        return self.answer is Answer.YES


Values = tuple[str, ...]
Path = list[Values]


class DominanceTester:
    """Recursive dominance test over one acyclic CP-net.

    A sub-problem is the original net with some variables held at a
    context assignment; it is never materialised. Results are memoised per
    tester, keyed by the context and the two (context-applied) outcomes.
    """

    def __init__(self, net: CpNet, budget: int | None = DEFAULT_BUDGET):
        self.net = net
        self.budget = budget
        self.calls = 0
        self._memo: dict[tuple, Path | None] = {}
        names = net.vars.names
        self._idx = {n: i for i, n in enumerate(names)}
        self._topo = [self._idx[n] for n in net.topological_order]
        self._doms = [net.vars.domain(n) for n in names]
        self._anc = [frozenset(self._idx[a] for a in net.ancestors(n)) for n in names]

    def test(self, o1: Outcome, o2: Outcome) -> DominanceVerdict:
        t1, t2 = self.net._tuple(o1), self.net._tuple(o2)
        if t1 == t2:
            raise EqualOutcomes()
        path = self._dt({}, t1, t2)
        if path is None:
            return DominanceVerdict(Answer.NO)
        out = self.net.vars.outcome_from_values
        return DominanceVerdict(Answer.YES, tuple(out(t) for t in path))

    # internals ------------------------------------------------------------

    def _dt(self, fixed: dict[int, str], o1: Values, o2: Values) -> Path | None:
        """An improving path from o2 to o1 with ``fixed`` held, or None."""
        key = (tuple(sorted(fixed)), o1, o2)
        if key in self._memo:
            return self._memo[key]
        self.calls += 1
        if self.budget is not None and self.calls > self.budget:
            raise BudgetExhausted(self.budget)
        result = self._solve(fixed, o1, o2)
        self._memo[key] = result
        return result

    def _solve(self, fixed: dict[int, str], o1: Values, o2: Values) -> Path | None:
        net = self.net
        x = next(i for i in self._topo if i not in fixed and o1[i] != o2[i])
        ctx = dict(fixed)
        for a in self._anc[x]:
            ctx.setdefault(a, o1[a])
        x1, x2 = o1[x], o2[x]
        row = net._row_t(x, o1)

        def bt(a: str, b: str) -> bool:
            return row.prefers(a, b)

        if not bt(x1, x2):
            return None
        rest = [i for i in range(len(o1)) if i not in ctx and i != x]
        if all(o1[i] == o2[i] for i in rest):
            return [o2, o1]

        def put(o: Values, v: str) -> Values:
            return o[:x] + (v,) + o[x + 1:]

        def sub(v: str, a: Values, b: Values) -> Path | None:
            if all(a[i] == b[i] for i in rest):
                return None
            f = dict(ctx)
            f[x] = v
            return self._dt(f, put(a, v), put(b, v))

        w = sub(x1, o1, o2)
        if w is not None:
            return [o2] + w
        w = sub(x2, o1, o2)
        if w is not None:
            return w + [o1]
        dom = self._doms[x]
        mids = [v for v in dom if v not in (x1, x2) and bt(x1, v) and bt(v, x2)]
        for v in mids:
            w = sub(v, o1, o2)
            if w is not None:
                return [o2] + w + [o1]

        def mk(vals: Sequence[str]) -> Values:
            o = list(o1)
            for i, val in zip(rest, vals):
                o[i] = val
            return tuple(o)

        def proj(o: Values) -> Values:
            return tuple(o[i] for i in rest)

        p1, p2 = proj(o1), proj(o2)
        others = [mk(vals) for vals in itertools.product(*(self._doms[i] for i in rest))]
        for o3 in others:
            if proj(o3) in (p1, p2):
                continue
            wa = sub(x2, o3, o2)
            if wa is None:
                continue
            wb = sub(x1, o1, o3)
            if wb is not None:
                return wa + wb
        if not mids:
            return None
        return self._chain(x, x1, x2, mids, bt, others, o2, proj, put, sub, p1)

    def _chain(self, x, x1, x2, mids, bt, others, o2, proj, put, sub, p1) -> Path | None:
        """Reachability when X has to pass through values strictly between x2 and x1.

        ``reach[v]`` maps each suffix reachable with X=v to a back-pointer
        ``(previous state, steps)``, processed from the worst chain value up.
        """
        chain = [x2] + mids + [x1]
        order = sorted(chain, key=lambda v: sum(bt(v, u) for u in chain))
        by_proj = {proj(o): o for o in others}
        by_proj.setdefault(proj(o2), o2)
        reach: dict[str, dict[Values, tuple]] = {}
        for v in order:
            r: dict[Values, tuple] = {}
            if v == x2:
                r[proj(o2)] = (None, [put(o2, x2)])
            for u in chain:
                if u in reach and bt(v, u):
                    for p in reach[u]:
                        if p not in r:
                            r[p] = ((u, p), [put(by_proj[p], v)])
            seeds = list(r)
            for o3 in others:
                p = proj(o3)
                if p in r:
                    continue
                for s in seeds:
                    w = sub(v, o3, by_proj[s])
                    if w is not None:
                        r[p] = ((v, s), w[1:])
                        break
            reach[v] = r
        if p1 not in reach[x1]:
            return None
        path: Path = []
        state = (x1, p1)
        while state is not None:
            prev, steps = reach[state[0]][state[1]]
            path[:0] = steps
            state = prev
        return path


def acyclic_cp_dt(net: CpNet, o1: Outcome, o2: Outcome, *, budget: int | None = DEFAULT_BUDGET) -> DominanceVerdict:
    """Does ``net`` entail ``o1`` preferred to ``o2``? Yes answers carry a flipping sequence."""
    return DominanceTester(net, budget).test(o1, o2)
