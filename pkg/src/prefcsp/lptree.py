"""Lexicographic preference trees."""

from __future__ import annotations

import functools
import itertools
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from .cpnet import Cpt
from .errors import (
    BadCptScope,
    EqualOutcomes,
    IncompleteCpt,
    LabelNotPartition,
    PathIncomplete,
    UnknownVariable,
    VariableMismatch,
    VariableRepeated,
)
from .model import (
    DEFAULT_OUTCOME_LIMIT,
    Comparison,
    Outcome,
    PartialAssignment,
    VariableSet,
    check_outcome_limit,
    enumerate_outcomes,
)


@dataclass(frozen=True)
class LpNode:
    """One tree node. ``cpt.parents`` is the node's conditioning scope."""

    variable: str
    cpt: Cpt
    children: tuple[tuple[frozenset[str], LpNode], ...] = ()

    def child_for(self, value: str) -> LpNode | None:
        for label, child in self.children:
            if value in label:
                return child
        return None

    def walk(self, path: tuple[str, ...] = ()):
        """Yield ``(node, ancestors)`` for every node below and including this one."""
        yield self, path
        for _, child in self.children:
            yield from child.walk(path + (self.variable,))


class LpTree:
    def __init__(self, vars: VariableSet, root: LpNode | None, *, check: bool = True):
        self.vars = vars
        self.root = None if root is None else _canonical(vars, root)
        if check:
            validate(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LpTree):
            return NotImplemented
        return self.vars == other.vars and self.root == other.root

    def __repr__(self) -> str:
        return f"LpTree(vars={list(self.vars.names)}, root={self.root.variable if self.root else None})"

    @property
    def is_empty(self) -> bool:
        return self.root is None

    def node_count(self) -> int:
        return 0 if self.root is None else sum(1 for _ in self.root.walk())


def _canonical(vars: VariableSet, node: LpNode) -> LpNode:
    """Order children by their smallest label value in domain order."""
    if not node.children or node.variable not in vars:
        return node
    dom = vars.domain(node.variable)
    pos = {v: i for i, v in enumerate(dom)}
    kids = tuple(
        sorted(
            ((frozenset(label), _canonical(vars, child)) for label, child in node.children),
            key=lambda lc: min(pos.get(v, len(pos)) for v in lc[0]) if lc[0] else len(pos),
        )
    )
    return LpNode(node.variable, node.cpt, kids)


def validate(tree: LpTree) -> None:
    """Raise on the first violated structural rule."""
    vars = tree.vars
    if tree.root is None:
        if len(vars):
            raise PathIncomplete("empty tree over a non-empty variable set")
        return
    for node, path in tree.root.walk():
        x = node.variable
        if x not in vars:
            raise UnknownVariable(x)
        if x in path:
            raise VariableRepeated(f"'{x}' appears twice on the path {' -> '.join(path + (x,))}")
        if node.cpt.variable != x:
            raise BadCptScope(f"node '{x}' carries a CPT for '{node.cpt.variable}'")
        scope = node.cpt.parents
        for v in scope:
            if v not in path:
                raise BadCptScope(f"CPT({x}) conditions on '{v}', which is not above it in the tree")
        node.cpt.validate(vars)
        for row in node.cpt.rows.values():
            if not row.total:
                raise IncompleteCpt(f"LP-tree rows must be total orders (node '{x}')")
        if node.children:
            labels = [label for label, _ in node.children]
            seen: set[str] = set()
            for label in labels:
                if not label:
                    raise LabelNotPartition(f"node '{x}' has an arc with an empty label")
                if label & seen:
                    raise LabelNotPartition(f"node '{x}' uses {sorted(label & seen)} on two arcs")
                seen |= label
            if seen != set(vars.domain(x)):
                raise LabelNotPartition(f"arc labels under '{x}' do not cover its domain exactly")
        elif len(path) + 1 != len(vars):
            missing = [v for v in vars if v not in path and v != x]
            raise PathIncomplete(f"path {' -> '.join(path + (x,))} misses {missing}")


def compare(tree: LpTree, o1: Outcome, o2: Outcome) -> Comparison:
    node = tree.root
    while node is not None:
        x = node.variable
        if o1[x] != o2[x]:
            row = node.cpt.row(o1)
            return Comparison.FIRST_PREFERRED if row.prefers(o1[x], o2[x]) else Comparison.SECOND_PREFERRED
        node = node.child_for(o1[x])
    raise EqualOutcomes()


def _cmp(tree: LpTree, a: Outcome, b: Outcome) -> int:
    if a == b:
        return 0
    return -1 if compare(tree, a, b) is Comparison.FIRST_PREFERRED else 1


def total_order(tree: LpTree, limit: int | None = DEFAULT_OUTCOME_LIMIT) -> list[Outcome]:
    check_outcome_limit(tree.vars, limit)
    return sorted(enumerate_outcomes(tree.vars), key=functools.cmp_to_key(functools.partial(_cmp, tree)))


def best(tree: LpTree, outcomes) -> Outcome | None:
    top = None
    for o in outcomes:
        if top is None or compare(tree, o, top) is Comparison.FIRST_PREFERRED:
            top = o
    return top


def optimum(tree: LpTree) -> Outcome:
    """Follow the best value at each node from the root."""
    chosen: dict[str, str] = {}
    node = tree.root
    while node is not None:
        v = node.cpt.row(chosen).order[0]
        chosen[node.variable] = v
        node = node.child_for(v)
    return tree.vars.outcome(chosen)


def reduce(tree: LpTree, assignment: Mapping[str, str], *, merge_branches: bool = True) -> LpTree:
    """Splice every bound variable out of the tree.

    At a bound node only the subtree under the assigned value survives and
    takes the node's place. Remaining CPTs lose rows for other values of
    bound variables. Afterwards sibling subtrees that became identical are
    merged into one arc whose label is the union of theirs.
    """
    for var, value in assignment.items():
        tree.vars.check_value(var, value)
    rest = tree.vars.subset(v for v in tree.vars if v not in assignment)
    if not assignment:
        return tree

    def red(node: LpNode) -> LpNode | None:
        x = node.variable
        if x in assignment:
            child = node.child_for(assignment[x])
            return None if child is None else red(child)
        cpt = node.cpt.restrict(assignment)
        kids = [(label, red(child)) for label, child in node.children]
        if any(child is None for _, child in kids):
            return LpNode(x, cpt, ())
        merged: list[tuple[frozenset[str], LpNode]] = []
        for label, child in kids:
            for i, (other_label, other) in enumerate(merged):
                if merge_branches and other == child:
                    merged[i] = (other_label | label, other)
                    break
            else:
                merged.append((label, child))
        return LpNode(x, cpt, tuple(merged))

    root = None if tree.root is None else red(tree.root)
    return LpTree(rest, root)


def is_compatible(
    candidate: LpTree,
    original: LpTree,
    w: Mapping[str, str],
    limit: int | None = DEFAULT_OUTCOME_LIMIT,
) -> bool:
    """Does every strict preference of ``candidate`` hold in ``original`` once ``w`` is added?"""
    expected = {v for v in original.vars if v not in w}
    if set(candidate.vars.names) != expected:
        raise VariableMismatch(
            f"candidate variables {sorted(candidate.vars.names)} != original minus bound {sorted(expected)}"
        )
    check_outcome_limit(candidate.vars, limit)
    outs = list(enumerate_outcomes(candidate.vars))
    for a, b in itertools.permutations(outs, 2):
        if compare(candidate, a, b) is Comparison.FIRST_PREFERRED:
            wa, wb = PartialAssignment({**w, **a}), PartialAssignment({**w, **b})
            if compare(original, wa, wb) is not Comparison.FIRST_PREFERRED:
                return False
    return True


def node(vars: VariableSet, variable: str, rows, children: Sequence = (), scope: Sequence[str] = ()) -> LpNode:
    """Convenience builder: ``rows`` maps scope-value tuples to rankings (or is one ranking)."""
    from .cpnet import PreferenceRow

    if isinstance(rows, (list, tuple)) and rows and isinstance(rows[0], str):
        rows = {(): rows}
    cpt = Cpt(variable, tuple(scope), {tuple(k): PreferenceRow.ranking(r) for k, r in rows.items()})
    return LpNode(variable, cpt, tuple((frozenset(label), child) for label, child in children))
