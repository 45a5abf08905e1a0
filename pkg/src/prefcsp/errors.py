"""Exception hierarchy.

The CLI maps :class:`ModelError` to exit code 3, :class:`LimitExceeded` to
exit code 4 and :class:`QueryError` to exit code 2.
"""

from __future__ import annotations


class PrefError(Exception):
    pass


# -- invalid models ---------------------------------------------------------

class ModelError(PrefError):
    """A model, constraint set or document failed validation."""


class UnknownVariable(ModelError):
    def __init__(self, variable: str):
        super().__init__(f"unknown variable '{variable}'")
        self.variable = variable


class InvalidValue(ModelError):
    def __init__(self, variable: str, value: str):
        super().__init__(f"value '{value}' is not in the domain of '{variable}'")
        self.variable = variable
        self.value = value


class CyclicGraph(ModelError):
    pass


class IncompleteCpt(ModelError):
    pass


class NotTotallyDependent(ModelError):
    pass


class AriNotOnNop(ModelError):
    pass


class NopUncovered(ModelError):
    def __init__(self, pairs):
        self.pairs = sorted(tuple(sorted(p)) for p in pairs)
        shown = ", ".join("{" + ",".join(p) + "}" for p in self.pairs)
        super().__init__(f"non-ordered pairs without an ARI statement: {shown}")


class CyclicCprNet(ModelError):
    pass


class LabelNotPartition(ModelError):
    pass


class VariableRepeated(ModelError):
    pass


class PathIncomplete(ModelError):
    pass


class BadCptScope(ModelError):
    pass


class ParseError(ModelError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class InvalidConfig(ModelError):
    pass


# -- bad queries ------------------------------------------------------------

class QueryError(PrefError):
    """A query was malformed with respect to an otherwise valid model."""


class UnboundVariable(QueryError):
    def __init__(self, variable: str):
        super().__init__(f"variable '{variable}' is not bound")
        self.variable = variable


class ConflictingBinding(QueryError):
    def __init__(self, variable: str, first: str, second: str):
        super().__init__(f"conflicting bindings for '{variable}': '{first}' vs '{second}'")
        self.variable = variable


class EqualOutcomes(QueryError):
    def __init__(self):
        super().__init__("the two outcomes are equal")


class UnknownArc(QueryError):
    pass


class PartialRowUnsupported(QueryError):
    pass


class NotAncestorClosed(QueryError):
    pass


class VariableMismatch(QueryError):
    pass


class ModelMismatch(QueryError):
    pass


# -- size and budget caps ---------------------------------------------------

class LimitExceeded(PrefError):
    pass


class TooManyOutcomes(LimitExceeded):
    def __init__(self, count: int, limit: int):
        super().__init__(f"{count} outcomes exceed the limit of {limit}")
        self.count = count
        self.limit = limit


class BudgetExhausted(LimitExceeded):
    def __init__(self, budget: int):
        super().__init__(f"dominance search exceeded its budget of {budget} sub-calls")
        self.budget = budget
