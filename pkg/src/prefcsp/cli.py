"""Command-line interface.

Exit codes: 0 the query ran, 1 a selftest suite failed, 2 usage error or bad
query, 3 invalid model file, 4 size cap or search budget exceeded.
"""

from __future__ import annotations

import argparse
import functools
import sys
from collections.abc import Sequence

from . import cpnet, cprnet, lptree
from .csp import propagate
from .errors import LimitExceeded, ModelError, PrefError, QueryError
from .generator import GeneratorConfig, generate_instance
from .model import DEFAULT_OUTCOME_LIMIT, Comparison, Outcome
from .modelfile import ModelDocument, format_model, load_model
from .solvers import DEFAULT_BUDGET, acyclic_cp_dt, search_cpr, search_lp


class UsageError(Exception):
    pass


def _fmt(doc: ModelDocument, o: Outcome) -> str:
    return o.format(doc.vars.names)


def _load(path: str) -> ModelDocument:
    try:
        return load_model(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


def _outcome(doc: ModelDocument, text: str, flag: str) -> Outcome:
    try:
        return doc.vars.outcome(doc.vars.parse_bindings(text))
    except (ModelError, QueryError) as exc:
        raise UsageError(f"{flag}: {exc}") from None


def _net(doc: ModelDocument, command: str) -> cpnet.CpNet:
    if doc.kind == "cpnet":
        return doc.model
    if doc.kind == "cprnet":
        return doc.model.base
    raise UsageError(f"{command} needs a cpnet or cprnet document, not {doc.kind}")


def cmd_check(args) -> int:
    doc = _load(args.file)
    extra = "" if doc.constraints is None else f", {len(doc.constraints)} constraints"
    print(f"ok: {doc.kind} over {len(doc.vars)} variables{extra}")
    return 0


def cmd_optimal(args) -> int:
    doc = _load(args.file)
    if doc.kind == "lptree":
        best = lptree.optimum(doc.model)
    else:
        best = cpnet.forward_sweep(_net(doc, "optimal"))
    print(_fmt(doc, best))
    return 0


def cmd_dominance(args) -> int:
    doc = _load(args.file)
    net = _net(doc, "dominance")
    o1, o2 = _outcome(doc, args.o1, "--o1"), _outcome(doc, args.o2, "--o2")
    if o1 == o2:
        raise UsageError("--o1 and --o2 are the same outcome")
    if args.oracle:
        witness = cpnet.improving_sequence(net, o2, o1)
        yes = witness is not None
    else:
        verdict = acyclic_cp_dt(net, o1, o2, budget=args.budget)
        yes, witness = verdict.yes, verdict.witness
    print("yes" if yes else "no")
    if yes and args.witness:
        for o in witness:
            print(_fmt(doc, o))
    return 0


def cmd_order(args) -> int:
    doc = _load(args.file)
    o1, o2 = _outcome(doc, args.o1, "--o1"), _outcome(doc, args.o2, "--o2")
    if o1 == o2:
        raise UsageError("--o1 and --o2 are the same outcome")
    if doc.kind == "cpnet":
        ans = cpnet.ordering_query(doc.model, o1, o2)
        print("no" if ans is cpnet.OrderingAnswer.NOT_PREFERRED else "unknown")
        return 0
    compare = cprnet.compare if doc.kind == "cprnet" else lptree.compare
    print("yes" if compare(doc.model, o1, o2) is Comparison.FIRST_PREFERRED else "no")
    return 0


def cmd_solve(args) -> int:
    doc = _load(args.file)
    if doc.constraints is None:
        raise UsageError("solve needs a [constraints] section")
    prop = functools.partial(propagate, level=args.propagation)
    if doc.kind == "cprnet":
        result = search_cpr(doc.model, doc.constraints, propagator=prop)
    elif doc.kind == "lptree":
        result = search_lp(doc.model, doc.constraints, propagator=prop)
    else:
        raise UsageError("solve needs a cprnet or lptree document")
    if args.trace:
        for event in result.trace:
            print(event.format(doc.vars.names), file=sys.stderr)
    print("infeasible" if result.outcome is None else _fmt(doc, result.outcome))
    return 0


def cmd_enumerate(args) -> int:
    doc = _load(args.file)
    if doc.kind == "cprnet":
        order = cprnet.total_order(doc.model, args.limit)
    elif doc.kind == "lptree":
        order = lptree.total_order(doc.model, args.limit)
    else:
        raise UsageError("a CP-net does not define a total order; enumerate needs a cprnet or lptree document")
    for o in order:
        print(_fmt(doc, o))
    return 0


def cmd_gen(args) -> int:
    cfg = GeneratorConfig(
        kind=args.kind,
        var_count=args.vars,
        domain_size=args.domain,
        max_parents=args.max_parents,
        constraint_count=args.constraints,
        tightness=args.tightness,
        seed=args.seed,
        partial=args.partial,
    )
    text = format_model(generate_instance(cfg))
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0


def cmd_selftest(args) -> int:
    from . import selftest

    ok = True
    for result in selftest.run_all(args.scale, args.seed):
        print(result.summary())
        for msg in result.failures:
            print(f"  {msg}")
        ok &= result.ok
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="prefcsp", description="Preference reasoning under hard constraints.")
    sub = p.add_subparsers(dest="command", required=True)

    def with_file(name: str, help: str):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("file")
        return sp

    with_file("check", "validate a model file").set_defaults(fn=cmd_check)
    with_file("optimal", "print the unconstrained optimum").set_defaults(fn=cmd_optimal)

    sp = with_file("dominance", "is --o1 preferred to --o2 (CP-net semantics)?")
    sp.add_argument("--o1", required=True, help="outcome as Var=value,Var=value,...")
    sp.add_argument("--o2", required=True)
    sp.add_argument("--oracle", action="store_true", help="use exhaustive flip-graph search instead")
    sp.add_argument("--witness", action="store_true", help="print an improving flipping sequence")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="maximum recursive sub-calls")
    sp.set_defaults(fn=cmd_dominance)

    sp = with_file("order", "ordering query (cpnet) or strict comparison (cprnet, lptree)")
    sp.add_argument("--o1", required=True)
    sp.add_argument("--o2", required=True)
    sp.set_defaults(fn=cmd_order)

    sp = with_file("solve", "best outcome satisfying the constraints")
    sp.add_argument("--propagation", choices=("gac", "forward"), default="gac")
    sp.add_argument("--trace", action="store_true", help="print the search trace to stderr")
    sp.set_defaults(fn=cmd_solve)

    sp = with_file("enumerate", "list every outcome, best first")
    sp.add_argument("--limit", type=int, default=DEFAULT_OUTCOME_LIMIT, help="refuse more outcomes than this")
    sp.set_defaults(fn=cmd_enumerate)

    d = GeneratorConfig()
    sp = sub.add_parser("gen", help="write a random instance")
    sp.add_argument("--kind", choices=("cpnet", "cprnet", "lptree"), default=d.kind)
    sp.add_argument("--vars", type=int, default=d.var_count)
    sp.add_argument("--domain", type=int, default=d.domain_size, help="largest domain size")
    sp.add_argument("--max-parents", type=int, default=d.max_parents)
    sp.add_argument("--constraints", type=int, default=d.constraint_count)
    sp.add_argument("--tightness", type=float, default=d.tightness)
    sp.add_argument("--seed", type=int, default=d.seed)
    sp.add_argument("--partial", type=float, default=d.partial, help="chance of a partial CPT row (cpnet)")
    sp.add_argument("-o", "--output")
    sp.set_defaults(fn=cmd_gen)

    sp = sub.add_parser("selftest", help="run the oracle-equivalence suites")
    sp.add_argument("--scale", type=float, default=1.0, help="multiply corpus sizes")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(fn=cmd_selftest)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LimitExceeded as exc:
        print(f"limit exceeded: {exc}", file=sys.stderr)
        return 4
    except ModelError as exc:
        print(f"invalid model: {exc}", file=sys.stderr)
        return 3
    except QueryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PrefError as exc:  # pragma: no cover - every subclass is handled above
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
