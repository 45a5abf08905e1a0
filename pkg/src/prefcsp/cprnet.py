"""CPR-nets: totally dependent CP-nets completed by relative-importance statements."""

from __future__ import annotations

import functools
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from . import _graph
from .cpnet import CpNet, is_totally_dependent, restrict
from .errors import AriNotOnNop, CyclicCprNet, EqualOutcomes, ModelError, NopUncovered, NotTotallyDependent, UnknownVariable
from .model import DEFAULT_OUTCOME_LIMIT, Comparison, Outcome, check_outcome_limit, enumerate_outcomes


@dataclass(frozen=True, order=True)
class AriStatement:
    """``more_important`` is more important than ``less_important``."""

    more_important: str
    less_important: str

    def __post_init__(self):
        if self.more_important == self.less_important:
            raise ModelError(f"ARI statement relates '{self.more_important}' to itself")

    @property
    def arc(self) -> tuple[str, str]:
        return (self.more_important, self.less_important)


class CprNet:
    """Validated CPR-net; build with :func:`build_cprnet`."""

    def __init__(self, base: CpNet, aris: frozenset[AriStatement], order: tuple[str, ...]):
        self.base = base
        self.aris = aris
        self.order = order

    @property
    def vars(self):
        return self.base.vars

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CprNet):
            return NotImplemented
        return self.base == other.base and self.aris == other.aris

    def __repr__(self) -> str:
        return f"CprNet(order={list(self.order)}, aris={sorted(a.arc for a in self.aris)})"

    def arcs(self) -> set[tuple[str, str]]:
        return set(self.base.edges) | {a.arc for a in self.aris}

    def reduce(self, assignment: Mapping[str, str]) -> CprNet:
        """Drop bound variables and restrict the remaining CPTs.

        Arcs and ARIs between remaining variables survive unchanged, and
        restricting rows keeps every arc totally dependent, so the result
        is again a valid CPR-net.
        """
        base = restrict(self.base, assignment, ancestor_closed=False)
        aris = frozenset(a for a in self.aris if a.more_important in base.vars and a.less_important in base.vars)
        return CprNet(base, aris, tuple(v for v in self.order if v in base.vars))


def build_cprnet(base: CpNet, aris: Iterable[AriStatement | tuple[str, str]]) -> CprNet:
    stmts = frozenset(a if isinstance(a, AriStatement) else AriStatement(*a) for a in aris)
    if not is_totally_dependent(base):
        raise NotTotallyDependent("a CPR-net needs a totally dependent CP-net")
    linked = {frozenset(e) for e in base.edges}
    covered: dict[frozenset[str], AriStatement] = {}
    for a in sorted(stmts):
        for v in a.arc:
            if v not in base.vars:
                raise UnknownVariable(v)
        pair = frozenset(a.arc)
        if pair in linked:
            raise AriNotOnNop(f"{a.more_important} > {a.less_important} relates variables already joined by an arc")
        if pair in covered:
            raise AriNotOnNop(f"pair {{{','.join(sorted(pair))}}} has more than one ARI statement")
        covered[pair] = a
    names = base.vars.names
    missing = [
        frozenset((x, y))
        for i, x in enumerate(names)
        for y in names[i + 1:]
        if frozenset((x, y)) not in linked and frozenset((x, y)) not in covered
    ]
    if missing:
        raise NopUncovered(missing)
    arcs = set(base.edges) | {a.arc for a in stmts}
    order = _graph.toposort(names, arcs)
    if order is None:
        cycle = _graph.find_cycle(names, arcs)
        raise CyclicCprNet("CPR-net is cyclic: " + " -> ".join(cycle))
    return CprNet(base, stmts, tuple(order))


def unique_topo_order(net: CprNet) -> list[str]:
    return list(net.order)


def compare(net: CprNet, o1: Outcome, o2: Outcome) -> Comparison:
    """Decide at the most important variable on which the outcomes differ."""
    for v in net.order:
        if o1[v] != o2[v]:
            row = net.base.row(v, o1)
            return Comparison.FIRST_PREFERRED if row.prefers(o1[v], o2[v]) else Comparison.SECOND_PREFERRED
    raise EqualOutcomes()


def _cmp(net: CprNet, a: Outcome, b: Outcome) -> int:
    if a == b:
        return 0
    return -1 if compare(net, a, b) is Comparison.FIRST_PREFERRED else 1


def total_order(net: CprNet, limit: int | None = DEFAULT_OUTCOME_LIMIT) -> list[Outcome]:
    """Every outcome, best first."""
    check_outcome_limit(net.vars, limit)
    return sorted(enumerate_outcomes(net.vars), key=functools.cmp_to_key(functools.partial(_cmp, net)))


def best(net: CprNet, outcomes: Iterable[Outcome]) -> Outcome | None:
    """The compare-maximum of ``outcomes``."""
    top = None
    for o in outcomes:
        if top is None or compare(net, o, top) is Comparison.FIRST_PREFERRED:
            top = o
    return top
