"""Extensional hard constraints, strengthening and propagation."""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

from .errors import ConflictingBinding, ModelError, UnknownVariable
from .model import (
    DEFAULT_OUTCOME_LIMIT,
    EMPTY,
    Outcome,
    PartialAssignment,
    VariableSet,
    check_outcome_limit,
    enumerate_outcomes,
)

MAX_ARITY = 3


@dataclass(frozen=True, init=False)
class Constraint:
    """Allowed value tuples over an ordered scope of 1 to 3 variables."""

    scope: tuple[str, ...]
    allowed: frozenset[tuple[str, ...]]

    def __init__(self, scope: Sequence[str], allowed: Iterable[Sequence[str]], *, _allow_empty: bool = False):
        scope = tuple(scope)
        allowed = frozenset(tuple(t) for t in allowed)
        if not 1 <= len(scope) <= MAX_ARITY:
            raise ModelError(f"constraint scope must have 1 to {MAX_ARITY} variables, got {len(scope)}")
        if len(set(scope)) != len(scope):
            raise ModelError(f"constraint scope repeats a variable: {list(scope)}")
        if not allowed and not _allow_empty:
            raise ModelError(f"constraint over {list(scope)} allows no tuples")
        for t in allowed:
            if len(t) != len(scope):
                raise ModelError(f"tuple {t} does not match scope {list(scope)}")
        object.__setattr__(self, "scope", scope)
        object.__setattr__(self, "allowed", allowed)

    @classmethod
    def empty(cls, scope: Sequence[str]) -> Constraint:
        """A constraint nothing satisfies; marks an infeasible problem."""
        return cls(scope, (), _allow_empty=True)

    @classmethod
    def unary(cls, var: str, value: str) -> Constraint:
        return cls((var,), [(value,)])

    @classmethod
    def implies(cls, vars: VariableSet, lhs: tuple[str, str], rhs: tuple[str, str]) -> Constraint:
        """``X=x -> Y=y`` as a table over X and Y."""
        (x, xv), (y, yv) = lhs, rhs
        return cls(
            (x, y),
            [(a, b) for a in vars.domain(x) for b in vars.domain(y) if a != xv or b == yv],
        )

    @classmethod
    def iff(cls, vars: VariableSet, lhs: tuple[str, str], rhs: tuple[str, str]) -> Constraint:
        """``X=x <-> Y=y`` as a table over X and Y."""
        (x, xv), (y, yv) = lhs, rhs
        return cls(
            (x, y),
            [(a, b) for a in vars.domain(x) for b in vars.domain(y) if (a == xv) == (b == yv)],
        )

    @property
    def is_empty(self) -> bool:
        return not self.allowed

    def satisfied_by(self, a: Mapping[str, str]) -> bool:
        return tuple(a[v] for v in self.scope) in self.allowed

    def check(self, vars: VariableSet) -> None:
        for v in self.scope:
            if v not in vars:
                raise UnknownVariable(v)
        for t in self.allowed:
            for v, x in zip(self.scope, t):
                vars.check_value(v, x)

    def sorted_tuples(self, vars: VariableSet) -> list[tuple[str, ...]]:
        keys = [{x: i for i, x in enumerate(vars.domain(v))} for v in self.scope]
        return sorted(self.allowed, key=lambda t: [k[x] for k, x in zip(keys, t)])

    def bind(self, var: str, value: str) -> Constraint | None:
        """Filter to ``var=value`` and project ``var`` out of the scope.

        Returns None when the constraint becomes trivially satisfied.
        """
        if var not in self.scope:
            return self
        i = self.scope.index(var)
        kept = {t[:i] + t[i + 1:] for t in self.allowed if t[i] == value}
        rest = self.scope[:i] + self.scope[i + 1:]
        if not kept:
            return Constraint.empty(rest or self.scope)
        if not rest:
            return None
        return Constraint(rest, kept)


@dataclass(frozen=True)
class ConstraintSet:
    vars: VariableSet
    constraints: tuple[Constraint, ...] = ()
    fixed: PartialAssignment = field(default=EMPTY)

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "fixed", PartialAssignment(self.fixed))
        for c in self.constraints:
            c.check(self.vars)
        for v, x in self.fixed.items():
            self.vars.check_value(v, x)

    def __len__(self) -> int:
        return len(self.constraints)


@dataclass(frozen=True)
class Consistent:
    induced: PartialAssignment
    domains: Mapping[str, frozenset[str]]


@dataclass(frozen=True)
class Wipeout:
    variable: str


PropagationResult = Consistent | Wipeout

LEVELS = ("gac", "forward")


def check_outcome(cs: ConstraintSet, o: Mapping[str, str]) -> bool:
    if not all(o.get(v) == x for v, x in cs.fixed.items()):
        return False
    return all(c.satisfied_by(o) for c in cs.constraints)


def strengthen(cs: ConstraintSet, var: str, value: str) -> ConstraintSet:
    """Commit ``var=value``: record it in ``fixed`` and specialise every table."""
    cs.vars.check_value(var, value)
    if var in cs.fixed:
        if cs.fixed[var] != value:
            raise ConflictingBinding(var, cs.fixed[var], value)
        return cs
    out = []
    for c in cs.constraints:
        b = c.bind(var, value)
        if b is not None:
            out.append(b)
    return ConstraintSet(cs.vars, tuple(out), cs.fixed.with_binding(var, value))


def propagate(cs: ConstraintSet, level: str = "gac") -> PropagationResult:
    """Prune unsupported values to a fixpoint.

    ``gac`` enforces generalized arc consistency on every table. ``forward``
    only applies unary tables, which is what is left of a binary table once
    one side has been committed; it never chains through other tables.
    """
    if level not in LEVELS:
        raise ValueError(f"unknown propagation level '{level}'")
    doms = {v: set(cs.vars.domain(v)) for v in cs.vars}
    for v, x in cs.fixed.items():
        doms[v] = {x}
    for c in cs.constraints:
        if c.is_empty:
            return Wipeout(c.scope[0])
    active = cs.constraints if level == "gac" else [c for c in cs.constraints if len(c.scope) == 1]
    changed = True
    while changed:
        changed = False
        for c in active:
            live = [t for t in c.allowed if all(x in doms[v] for v, x in zip(c.scope, t))]
            for i, v in enumerate(c.scope):
                supported = {t[i] for t in live}
                if supported != doms[v]:
                    doms[v] &= supported
                    changed = True
                    if not doms[v]:
                        return Wipeout(v)
    induced = {v: next(iter(d)) for v, d in doms.items() if len(d) == 1}
    return Consistent(
        PartialAssignment((v, induced[v]) for v in cs.vars if v in induced),
        {v: frozenset(d) for v, d in doms.items()},
    )


def solve_all(cs: ConstraintSet, limit: int | None = DEFAULT_OUTCOME_LIMIT) -> list[Outcome]:
    check_outcome_limit(cs.vars, limit)
    return [o for o in enumerate_outcomes(cs.vars) if check_outcome(cs, o)]


def identity_propagator(cs: ConstraintSet) -> PropagationResult:
    """No pruning at all; induced is just ``fixed``. Useful for testing solvers."""
    return Consistent(cs.fixed, {v: frozenset(cs.vars.domain(v)) for v in cs.vars})


def table(vars: VariableSet, scope: Sequence[str], predicate) -> Constraint:
    """Build a table from a predicate over value tuples."""
    allowed = [t for t in itertools.product(*(vars.domain(v) for v in scope)) if predicate(*t)]
    return Constraint(scope, allowed, _allow_empty=True)
