"""Variables, finite domains, outcomes and partial assignments."""

from __future__ import annotations

import enum
import itertools
import math
from collections.abc import Iterable, Iterator, Mapping, Sequence

from .errors import (
    ConflictingBinding,
    InvalidValue,
    ModelError,
    TooManyOutcomes,
    UnboundVariable,
    UnknownVariable,
)

DEFAULT_OUTCOME_LIMIT = 2**20


class Comparison(enum.Enum):
    FIRST_PREFERRED = "first"
    SECOND_PREFERRED = "second"


class VariableSet:
    """Ordered variables with ordered finite domains.

    Declaration order of variables and of domain values is the canonical
    iteration and tie-break order for the whole library.
    """

    __slots__ = ("_names", "_domains", "_index")

    def __init__(self, domains: Mapping[str, Sequence[str]] | Iterable[tuple[str, Sequence[str]]]):
        items = list(domains.items()) if isinstance(domains, Mapping) else list(domains)
        names: list[str] = []
        doms: dict[str, tuple[str, ...]] = {}
        for name, values in items:
            if not name:
                raise ModelError("variable names must be non-empty")
            if name in doms:
                raise ModelError(f"duplicate variable '{name}'")
            values = tuple(values)
            if len(values) < 2:
                raise ModelError(f"domain of '{name}' needs at least 2 values")
            if len(set(values)) != len(values):
                raise ModelError(f"domain of '{name}' repeats a value")
            names.append(name)
            doms[name] = values
        self._names = tuple(names)
        self._domains = doms
        self._index = {n: i for i, n in enumerate(names)}

    @property
    def names(self) -> tuple[str, ...]:
        return self._names

    def domain(self, var: str) -> tuple[str, ...]:
        try:
            return self._domains[var]
        except KeyError:
            raise UnknownVariable(var) from None

    def index(self, var: str) -> int:
        try:
            return self._index[var]
        except KeyError:
            raise UnknownVariable(var) from None

    def __contains__(self, var: object) -> bool:
        return var in self._domains

    def __iter__(self) -> Iterator[str]:
        return iter(self._names)

    def __len__(self) -> int:
        return len(self._names)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VariableSet):
            return NotImplemented
        return self._names == other._names and self._domains == other._domains

    def __hash__(self) -> int:
        return hash(tuple((n, self._domains[n]) for n in self._names))

    def __repr__(self) -> str:
        inner = ", ".join(f"{n}: {list(self._domains[n])}" for n in self._names)
        return f"VariableSet({{{inner}}})"

    def subset(self, names: Iterable[str]) -> VariableSet:
        """Restriction to ``names``, keeping declaration order."""
        keep = set(names)
        for n in keep:
            self.index(n)
        return VariableSet([(n, self._domains[n]) for n in self._names if n in keep])

    def sort(self, names: Iterable[str]) -> list[str]:
        return sorted(names, key=self.index)

    def outcome_count(self) -> int:
        return math.prod(len(d) for d in self._domains.values())

    def check_value(self, var: str, value: str) -> None:
        if value not in self.domain(var):
            raise InvalidValue(var, value)

    def assignment(self, bindings: Mapping[str, str] | Iterable[tuple[str, str]] = (), **kw: str) -> PartialAssignment:
        """Validated partial assignment over this set."""
        a = PartialAssignment(bindings, **kw)
        for var, value in a.items():
            self.check_value(var, value)
        return a

    def outcome(self, bindings: Mapping[str, str] | Iterable[tuple[str, str]] = (), **kw: str) -> Outcome:
        """Validated complete assignment over this set."""
        a = self.assignment(bindings, **kw)
        for var in self._names:
            if var not in a:
                raise UnboundVariable(var)
        if len(a) != len(self._names):
            extra = next(v for v in a if v not in self._domains)
            raise UnknownVariable(extra)
        return PartialAssignment((n, a[n]) for n in self._names)

    def is_outcome(self, a: Mapping[str, str]) -> bool:
        return len(a) == len(self._names) and all(v in a for v in self._names)

    def outcome_from_values(self, values: Sequence[str]) -> Outcome:
        return PartialAssignment(zip(self._names, values))

    def parse_bindings(self, text: str) -> PartialAssignment:
        """Parse ``"A=a1,B=b2"`` (order-insensitive) against this set."""
        pairs = []
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            var, sep, value = part.partition("=")
            if not sep:
                raise ModelError(f"expected Var=value, got '{part}'")
            pairs.append((var.strip(), value.strip()))
        seen: dict[str, str] = {}
        for var, value in pairs:
            if var in seen and seen[var] != value:
                raise ConflictingBinding(var, seen[var], value)
            seen[var] = value
        return self.assignment(seen)


class PartialAssignment(Mapping[str, str]):
    """Immutable, hashable map from variable names to values."""

    __slots__ = ("_b", "_hash")

    def __init__(self, bindings: Mapping[str, str] | Iterable[tuple[str, str]] = (), **kw: str):
        self._b = dict(bindings, **kw)
        self._hash = None

    def __getitem__(self, var: str) -> str:
        return self._b[var]

    def __iter__(self) -> Iterator[str]:
        return iter(self._b)

    def __len__(self) -> int:
        return len(self._b)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._b.items()))
        return self._hash

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PartialAssignment):
            return self._b == other._b
        if isinstance(other, Mapping):
            return self._b == dict(other.items())
        return NotImplemented

    def __repr__(self) -> str:
        return f"PartialAssignment({self.format()})"

    def format(self, order: Iterable[str] | None = None) -> str:
        names = list(self._b) if order is None else [v for v in order if v in self._b]
        return ",".join(f"{v}={self._b[v]}" for v in names)

    def project(self, vars: Iterable[str]) -> PartialAssignment:
        return project(self, vars)

    def merge(self, other: Mapping[str, str]) -> PartialAssignment:
        return merge(self, other)

    def extends(self, other: Mapping[str, str]) -> bool:
        """True if every binding of ``other`` is also a binding here."""
        return all(self._b.get(v) == x for v, x in other.items())

    def agrees(self, other: Mapping[str, str]) -> bool:
        return all(other[v] == x for v, x in self._b.items() if v in other)

    def without(self, vars: Iterable[str]) -> PartialAssignment:
        drop = set(vars)
        return PartialAssignment((v, x) for v, x in self._b.items() if v not in drop)

    def with_binding(self, var: str, value: str) -> PartialAssignment:
        b = dict(self._b)
        b[var] = value
        return PartialAssignment(b)


Outcome = PartialAssignment

EMPTY = PartialAssignment()


def project(assignment: Mapping[str, str], vars: Iterable[str]) -> PartialAssignment:
    out = {}
    for v in vars:
        if v not in assignment:
            raise UnboundVariable(v)
        out[v] = assignment[v]
    return PartialAssignment(out)


def merge(a: Mapping[str, str], b: Mapping[str, str]) -> PartialAssignment:
    out = dict(a.items())
    for v, x in b.items():
        if v in out and out[v] != x:
            raise ConflictingBinding(v, out[v], x)
        out[v] = x
    return PartialAssignment(out)


def enumerate_outcomes(vars: VariableSet) -> Iterator[Outcome]:
    names = vars.names
    for values in itertools.product(*(vars.domain(n) for n in names)):
        yield PartialAssignment(zip(names, values))


def check_outcome_limit(vars: VariableSet, limit: int | None) -> None:
    if limit is not None:
        count = vars.outcome_count()
        if count > limit:
            raise TooManyOutcomes(count, limit)
