"""Acyclic CP-nets: conditional preference tables, flips, sweeps and queries.

Outcomes are :class:`~prefcsp.model.PartialAssignment` objects binding every
variable of the net. Internally, search routines work on value tuples in
declaration order, which is much cheaper to hash.
"""

from __future__ import annotations

import enum
import itertools
from collections import deque
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field

from . import _graph
from .errors import (
    BadCptScope,
    CyclicGraph,
    EqualOutcomes,
    IncompleteCpt,
    ModelError,
    NotAncestorClosed,
    NotTotallyDependent,
    PartialRowUnsupported,
    UnboundVariable,
    UnknownArc,
    UnknownVariable,
)
from .model import Outcome, VariableSet


@dataclass(frozen=True)
class PreferenceRow:
    """Strict order over one variable's domain.

    ``pairs`` holds ``(better, worse)`` and is transitively closed. A total
    row also keeps its ranking in ``order``, best first.
    """

    pairs: frozenset[tuple[str, str]]
    total: bool = True
    order: tuple[str, ...] = field(default=(), compare=False)

    @classmethod
    def ranking(cls, values: Sequence[str]) -> PreferenceRow:
        values = tuple(values)
        if len(set(values)) != len(values):
            raise ModelError(f"preference row repeats a value: {' > '.join(values)}")
        pairs = frozenset((values[i], values[j]) for i in range(len(values)) for j in range(i + 1, len(values)))
        return cls(pairs, True, values)

    @classmethod
    def partial(cls, pairs: Iterable[tuple[str, str]]) -> PreferenceRow:
        closed = set(pairs)
        while True:
            extra = {(a, d) for a, b in closed for c, d in closed if b == c} - closed
            if not extra:
                break
            closed |= extra
        for a, b in closed:
            if a == b:
                raise ModelError(f"partial preference row is cyclic through '{a}'")
        return cls(frozenset(closed), False, ())

    def prefers(self, a: str, b: str) -> bool:
        return (a, b) in self.pairs

    def values(self) -> set[str]:
        return {v for p in self.pairs for v in p} | set(self.order)

    def best(self, domain: Sequence[str]) -> str | None:
        """The value preferred to every other domain value, if there is one."""
        if self.total:
            return self.order[0]
        for v in domain:
            if all(self.prefers(v, u) for u in domain if u != v):
                return v
        return None

    def ranked(self, domain: Sequence[str]) -> list[str]:
        """Domain values best first; ties in a partial row fall back to domain order."""
        if self.total:
            return list(self.order)
        return sorted(domain, key=lambda v: (-sum(self.prefers(v, u) for u in domain), domain.index(v)))

    def covering_pairs(self) -> list[tuple[str, str]]:
        """Transitive reduction of ``pairs``."""
        return sorted(
            (a, b)
            for a, b in self.pairs
            if not any((a, c) in self.pairs and (c, b) in self.pairs for c in self.values())
        )

    def format(self) -> str:
        if self.total:
            return " > ".join(self.order)
        return "partial " + ", ".join(f"{a} > {b}" for a, b in self.covering_pairs())

    def check(self, var: str, domain: Sequence[str]) -> None:
        dom = set(domain)
        if self.total:
            if sorted(self.order) != sorted(domain):
                raise IncompleteCpt(f"row for '{var}' must rank every value of {list(domain)} exactly once")
        elif not self.values() <= dom:
            bad = sorted(self.values() - dom)
            raise IncompleteCpt(f"row for '{var}' mentions values outside its domain: {bad}")


@dataclass(frozen=True)
class Cpt:
    """Conditional preference table: one row per assignment to ``parents``."""

    variable: str
    parents: tuple[str, ...]
    rows: Mapping[tuple[str, ...], PreferenceRow]

    def row(self, context: Mapping[str, str]) -> PreferenceRow:
        try:
            key = tuple(context[p] for p in self.parents)
        except KeyError as exc:
            raise UnboundVariable(exc.args[0]) from None
        return self.rows[key]

    def validate(self, vars: VariableSet) -> None:
        domain = vars.domain(self.variable)
        for p in self.parents:
            if p not in vars:
                raise UnknownVariable(p)
        if self.variable in self.parents or len(set(self.parents)) != len(self.parents):
            raise BadCptScope(f"CPT({self.variable}) has a malformed parent list {list(self.parents)}")
        expected = set(itertools.product(*(vars.domain(p) for p in self.parents)))
        if set(self.rows) != expected:
            missing = expected - set(self.rows)
            if missing:
                ctx = ", ".join(f"{p}={x}" for p, x in zip(self.parents, sorted(missing)[0]))
                raise IncompleteCpt(f"CPT({self.variable}) has no row for {ctx or 'the empty context'}")
            raise IncompleteCpt(f"CPT({self.variable}) has rows for contexts outside the parent domains")
        for row in self.rows.values():
            row.check(self.variable, domain)

    def restrict(self, assignment: Mapping[str, str]) -> Cpt:
        """Keep rows consistent with ``assignment`` and drop bound parents."""
        keep = [i for i, p in enumerate(self.parents) if p not in assignment]
        rows = {}
        for ctx, row in self.rows.items():
            if all(assignment[p] == ctx[i] for i, p in enumerate(self.parents) if p in assignment):
                rows[tuple(ctx[i] for i in keep)] = row
        return Cpt(self.variable, tuple(self.parents[i] for i in keep), rows)

    def __hash__(self) -> int:
        return hash((self.variable, self.parents, frozenset(self.rows.items())))


class ArcClass(enum.Enum):
    PARTIAL_DEPENDENCY = "partial"
    TOTAL_DEPENDENCY = "total"


class OrderingAnswer(enum.Enum):
    NOT_PREFERRED = "not-preferred"
    UNKNOWN = "unknown"


class CpNet:
    """An acyclic CP-net. The arc set is exactly the CPT parent sets."""

    def __init__(self, vars: VariableSet, cpts: Mapping[str, Cpt]):
        for name in cpts:
            if name not in vars:
                raise UnknownVariable(name)
        for name in vars:
            if name not in cpts:
                raise IncompleteCpt(f"variable '{name}' has no CPT")
            if cpts[name].variable != name:
                raise ModelError(f"CPT registered under '{name}' is for '{cpts[name].variable}'")
            cpts[name].validate(vars)
        self.vars = vars
        self.cpts = {name: cpts[name] for name in vars}
        self.edges = frozenset((p, y) for y, cpt in self.cpts.items() for p in cpt.parents)
        order = _graph.toposort(vars.names, self.edges)
        if order is None:
            cycle = _graph.find_cycle(vars.names, self.edges)
            raise CyclicGraph("CP-net is cyclic: " + " -> ".join(cycle))
        self.topological_order: tuple[str, ...] = tuple(order)
        self._parent_idx = {
            y: tuple(vars.index(p) for p in cpt.parents) for y, cpt in self.cpts.items()
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CpNet):
            return NotImplemented
        return self.vars == other.vars and self.cpts == other.cpts

    def __repr__(self) -> str:
        arcs = ", ".join(f"{a}->{b}" for a, b in sorted(self.edges))
        return f"CpNet(vars={list(self.vars.names)}, edges=[{arcs}])"

    def parents(self, var: str) -> tuple[str, ...]:
        return self.cpts[var].parents

    def children(self, var: str) -> list[str]:
        return [y for y in self.vars if var in self.cpts[y].parents]

    def ancestors(self, var: str) -> set[str]:
        seen: set[str] = set()
        stack = list(self.parents(var))
        while stack:
            p = stack.pop()
            if p not in seen:
                seen.add(p)
                stack.extend(self.parents(p))
        return seen

    def row(self, var: str, context: Mapping[str, str]) -> PreferenceRow:
        return self.cpts[var].row(context)

    # value tuples -------------------------------------------------------

    def _row_t(self, i: int, values: Sequence[str]) -> PreferenceRow:
        name = self.vars.names[i]
        return self.cpts[name].rows[tuple(values[j] for j in self._parent_idx[name])]

    def _tuple(self, o: Mapping[str, str]) -> tuple[str, ...]:
        try:
            return tuple(o[n] for n in self.vars.names)
        except KeyError as exc:
            raise UnboundVariable(exc.args[0]) from None

    def _flips_t(self, values: tuple[str, ...]) -> Iterator[tuple[str, ...]]:
        for i, name in enumerate(self.vars.names):
            row = self._row_t(i, values)
            cur = values[i]
            for v in self.vars.domain(name):
                if v != cur and row.prefers(v, cur):
                    yield values[:i] + (v,) + values[i + 1:]


# -- arc classification and importance ------------------------------------------

def classify_arc(net: CpNet, arc: tuple[str, str]) -> ArcClass:
    """Classify ``arc`` as a partial or a total dependency.

    The arc ``(X, Y)`` is totally dependent when, for every assignment to
    Y's other parents, any two distinct values of X give rows that order
    every pair of Y-values in opposite directions. Otherwise some pair of
    Y-values keeps the same relation for two values of X and the arc is a
    partial dependency.
    """
    x, y = arc
    if arc not in net.edges:
        raise UnknownArc(f"{x} -> {y} is not an arc of the net")
    cpt = net.cpts[y]
    if not all(r.total for r in cpt.rows.values()):
        raise PartialRowUnsupported(f"CPT({y}) has partial rows; arc classification needs total rows")
    k = cpt.parents.index(x)
    others: dict[tuple[str, ...], list[PreferenceRow]] = {}
    for ctx, row in cpt.rows.items():
        others.setdefault(ctx[:k] + ctx[k + 1:], []).append(row)
    for rows in others.values():
        for r1, r2 in itertools.combinations(rows, 2):
            if r1.pairs & r2.pairs:
                return ArcClass.PARTIAL_DEPENDENCY
    return ArcClass.TOTAL_DEPENDENCY


def is_totally_dependent(net: CpNet) -> bool:
    for x, y in net.edges:
        if not all(r.total for r in net.cpts[y].rows.values()):
            return False
        if classify_arc(net, (x, y)) is not ArcClass.TOTAL_DEPENDENCY:
            return False
    return True


def _require_totally_dependent(net: CpNet) -> None:
    if not is_totally_dependent(net):
        raise NotTotallyDependent("the CP-net is not totally dependent")


def induced_importance(net: CpNet) -> set[tuple[str, str]]:
    """Pairs ``(X, Y)`` with X more important than Y; exactly the arcs."""
    _require_totally_dependent(net)
    return set(net.edges)


def nop_pairs(net: CpNet) -> set[frozenset[str]]:
    """Variable pairs left unordered by the arcs (non-ordered pairs)."""
    _require_totally_dependent(net)
    linked = {frozenset(e) for e in net.edges}
    return {
        frozenset(p) for p in itertools.combinations(net.vars.names, 2) if frozenset(p) not in linked
    }


# -- flips and dominance --------------------------------------------------------

def improving_flips(net: CpNet, o: Outcome) -> set[Outcome]:
    t = net._tuple(o)
    return {net.vars.outcome_from_values(u) for u in net._flips_t(t)}


def _bfs(net: CpNet, start: tuple[str, ...], goal: tuple[str, ...] | None):
    parent: dict[tuple[str, ...], tuple[str, ...] | None] = {start: None}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for nxt in net._flips_t(cur):
            if nxt not in parent:
                parent[nxt] = cur
                if nxt == goal:
                    return parent
                queue.append(nxt)
    return parent


def improving_sequence(net: CpNet, worse: Outcome, better: Outcome) -> list[Outcome] | None:
    """A shortest improving flipping sequence from ``worse`` to ``better``."""
    start, goal = net._tuple(worse), net._tuple(better)
    if start == goal:
        return None
    parent = _bfs(net, start, goal)
    if goal not in parent:
        return None
    path = [goal]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return [net.vars.outcome_from_values(t) for t in reversed(path)]


def dominance_oracle(net: CpNet, o1: Outcome, o2: Outcome) -> bool:
    """Exhaustive test of ``N |= o1 > o2``: is o1 reachable from o2 by improving flips?"""
    start, goal = net._tuple(o2), net._tuple(o1)
    if start == goal:
        return False
    return goal in _bfs(net, start, goal)


def better_outcomes(net: CpNet, o: Outcome) -> set[Outcome]:
    """Every outcome reachable from ``o`` by one or more improving flips."""
    start = net._tuple(o)
    reached = _bfs(net, start, None)
    del reached[start]
    return {net.vars.outcome_from_values(t) for t in reached}


def first_difference(net: CpNet, o1: Mapping[str, str], o2: Mapping[str, str]) -> str:
    for name in net.topological_order:
        if o1[name] != o2[name]:
            return name
    raise EqualOutcomes()


def ordering_query(net: CpNet, o1: Outcome, o2: Outcome) -> OrderingAnswer:
    """Certify ``N does not entail o1 > o2`` in linear time when possible."""
    x = first_difference(net, o1, o2)
    if not net.row(x, o1).prefers(o1[x], o2[x]):
        return OrderingAnswer.NOT_PREFERRED
    return OrderingAnswer.UNKNOWN


def forward_sweep(net: CpNet) -> Outcome:
    """Unique optimum: give each variable, in topological order, its best value."""
    for name, cpt in net.cpts.items():
        if any(not row.total for row in cpt.rows.values()):
            raise PartialRowUnsupported(f"CPT({name}) has partial rows; the forward sweep needs total rows")
    chosen: dict[str, str] = {}
    for name in net.topological_order:
        chosen[name] = net.row(name, chosen).order[0]
    return net.vars.outcome(chosen)


def restrict(net: CpNet, assignment: Mapping[str, str], *, ancestor_closed: bool = True) -> CpNet:
    """Remove the bound variables and restrict the remaining CPTs to ``assignment``.

    With ``ancestor_closed=False`` a bound variable may keep unbound
    ancestors; it is simply dropped along with its CPT.
    """
    for var, value in assignment.items():
        net.vars.check_value(var, value)
    bound = set(assignment)
    for var in bound if ancestor_closed else ():
        for anc in net.ancestors(var):
            if anc not in bound:
                raise NotAncestorClosed(f"'{anc}' is an unbound ancestor of bound variable '{var}'")
    if not bound:
        return net
    rest = [n for n in net.vars if n not in bound]
    cpts = {n: net.cpts[n].restrict(assignment) for n in rest}
    return CpNet(net.vars.subset(rest), cpts)


def outcome_pairs(vars: VariableSet) -> Iterator[tuple[Outcome, Outcome]]:
    from .model import enumerate_outcomes

    outs = list(enumerate_outcomes(vars))
    for a in outs:
        for b in outs:
            if a != b:
                yield a, b
