"""Seeded random instances: CP-nets, CPR-nets, LP-trees and constraint tables."""

from __future__ import annotations

import itertools
import math
import random
import string
from dataclasses import dataclass

from .cpnet import Cpt, CpNet, PreferenceRow
from .cprnet import AriStatement, CprNet, build_cprnet
from .csp import Constraint, ConstraintSet
from .errors import InvalidConfig
from .lptree import LpNode, LpTree
from .model import VariableSet
from .modelfile import KINDS, ModelDocument


@dataclass(frozen=True)
class GeneratorConfig:
    kind: str = "cprnet"
    var_count: int = 4
    domain_size: int = 2  # each domain gets between 2 and this many values
    max_parents: int = 2
    constraint_count: int = 3
    tightness: float = 0.3  # fraction of each table's tuples that are forbidden
    seed: int = 0
    partial: float = 0.0  # chance of a partial row (cpnet only)

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise InvalidConfig(f"kind must be one of {', '.join(KINDS)}")
        if self.var_count < 1:
            raise InvalidConfig("var_count must be at least 1")
        if self.domain_size < 2:
            raise InvalidConfig("domain_size must be at least 2")
        if self.max_parents < 0:
            raise InvalidConfig("max_parents must be non-negative")
        if self.constraint_count < 0:
            raise InvalidConfig("constraint_count must be non-negative")
        if not 0.0 <= self.tightness <= 1.0:
            raise InvalidConfig("tightness must lie in [0, 1]")
        if not 0.0 <= self.partial <= 1.0:
            raise InvalidConfig("partial must lie in [0, 1]")
        if self.partial and self.kind != "cpnet":
            raise InvalidConfig("partial rows are only generated for cpnet documents")


def random_variables(rng: random.Random, n: int, domain_size: int) -> VariableSet:
    if n <= 26:
        names = list(string.ascii_uppercase[:n])
    else:
        names = [f"X{i}" for i in range(1, n + 1)]
    return VariableSet(
        (name, [f"{name.lower()}{j}" for j in range(1, rng.randint(2, domain_size) + 1)]) for name in names
    )


def random_ranking(rng: random.Random, values) -> list[str]:
    order = list(values)
    rng.shuffle(order)
    return order


def _partial_row(rng: random.Random, values) -> PreferenceRow:
    order = random_ranking(rng, values)
    pairs = [(a, b) for i, a in enumerate(order) for b in order[i + 1:] if rng.random() < 0.6]
    return PreferenceRow.partial(pairs)


def random_cpnet(
    rng: random.Random,
    vars: VariableSet,
    max_parents: int,
    *,
    partial: float = 0.0,
    totally_dependent: bool = False,
    density: float = 0.5,
) -> CpNet:
    """Random acyclic net whose arcs point forward in declaration order.

    With ``totally_dependent`` only binary variables become parents, and each
    row is a base ranking reversed once per parent sitting at its second value,
    so changing any single parent reverses the row.
    """
    names = vars.names
    cpts = {}
    for i, name in enumerate(names):
        pool = [p for p in names[:i] if not totally_dependent or len(vars.domain(p)) == 2]
        parents = tuple(p for p in pool if rng.random() < density)
        if len(parents) > max_parents:
            parents = tuple(sorted(rng.sample(parents, max_parents), key=vars.index))
        dom = vars.domain(name)
        rows = {}
        if totally_dependent:
            base = random_ranking(rng, dom)
            for ctx in itertools.product(*(vars.domain(p) for p in parents)):
                flips = sum(vars.domain(p).index(v) for p, v in zip(parents, ctx))
                rows[ctx] = PreferenceRow.ranking(base if flips % 2 == 0 else base[::-1])
        else:
            for ctx in itertools.product(*(vars.domain(p) for p in parents)):
                if partial and rng.random() < partial:
                    rows[ctx] = _partial_row(rng, dom)
                else:
                    rows[ctx] = PreferenceRow.ranking(random_ranking(rng, dom))
        cpts[name] = Cpt(name, parents, rows)
    return CpNet(vars, cpts)


def random_cprnet(rng: random.Random, vars: VariableSet, max_parents: int, density: float = 0.5) -> CprNet:
    net = random_cpnet(rng, vars, max_parents, totally_dependent=True, density=density)
    # random linear extension of the arcs orients every non-adjacent pair
    preds = {v: set(net.parents(v)) for v in vars}
    order: list[str] = []
    while len(order) < len(vars):
        ready = [v for v in vars if v not in order and preds[v] <= set(order)]
        order.append(rng.choice(ready))
    rank = {v: i for i, v in enumerate(order)}
    linked = {frozenset(e) for e in net.edges}
    aris = []
    for x, y in itertools.combinations(vars.names, 2):
        if frozenset((x, y)) not in linked:
            aris.append(AriStatement(x, y) if rank[x] < rank[y] else AriStatement(y, x))
    return build_cprnet(net, aris)


def random_lptree(rng: random.Random, vars: VariableSet, max_parents: int) -> LpTree:
    def build(remaining: list[str], path: tuple[str, ...]) -> LpNode:
        x = rng.choice(remaining)
        scope = [p for p in path if rng.random() < 0.5][:max_parents]
        scope = tuple(sorted(scope, key=vars.index))
        dom = vars.domain(x)
        rows = {
            ctx: PreferenceRow.ranking(random_ranking(rng, dom))
            for ctx in itertools.product(*(vars.domain(p) for p in scope))
        }
        rest = [v for v in remaining if v != x]
        children = []
        if rest:
            values = random_ranking(rng, dom)
            cuts = sorted(rng.sample(range(1, len(values)), rng.randint(0, len(values) - 1)))
            for lo, hi in zip([0] + cuts, cuts + [len(values)]):
                children.append((frozenset(values[lo:hi]), build(rest, path + (x,))))
        return LpNode(x, Cpt(x, scope, rows), tuple(children))

    return LpTree(vars, build(list(vars.names), ()))


def random_constraints(rng: random.Random, vars: VariableSet, count: int, tightness: float) -> ConstraintSet:
    out = []
    names = vars.names
    for _ in range(count):
        scope = tuple(sorted(rng.sample(names, min(2, len(names))), key=vars.index))
        tuples = list(itertools.product(*(vars.domain(v) for v in scope)))
        forbid = set(rng.sample(range(len(tuples)), math.floor(tightness * len(tuples))))
        kept = [t for i, t in enumerate(tuples) if i not in forbid]
        out.append(Constraint(scope, kept) if kept else Constraint.empty(scope))
    return ConstraintSet(vars, tuple(out))


def generate_instance(cfg: GeneratorConfig) -> ModelDocument:
    cfg.validate()
    rng = random.Random(cfg.seed)
    vars = random_variables(rng, cfg.var_count, cfg.domain_size)
    if cfg.kind == "cpnet":
        model: CpNet | CprNet | LpTree = random_cpnet(rng, vars, cfg.max_parents, partial=cfg.partial)
    elif cfg.kind == "cprnet":
        model = random_cprnet(rng, vars, cfg.max_parents)
    else:
        model = random_lptree(rng, vars, cfg.max_parents)
    constraints = random_constraints(rng, vars, cfg.constraint_count, cfg.tightness)
    return ModelDocument(cfg.kind, vars, model, constraints)
