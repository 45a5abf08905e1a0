"""Reading and writing model documents (see docs/format.md)."""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .cpnet import Cpt, CpNet, PreferenceRow
from .cprnet import AriStatement, CprNet, build_cprnet
from .csp import Constraint, ConstraintSet
from .errors import ModelError, ParseError
from .lptree import LpNode, LpTree
from .model import VariableSet

KINDS = ("cpnet", "cprnet", "lptree")
SECTIONS = ("variables", "edges", "cpts", "ari", "tree", "constraints")
ALLOWED = {
    "cpnet": {"variables", "edges", "cpts", "constraints"},
    "cprnet": {"variables", "edges", "cpts", "ari", "constraints"},
    "lptree": {"variables", "tree", "constraints"},
}

NAME = r"[A-Za-z0-9_][A-Za-z0-9_.']*"
_name = re.compile(rf"^{NAME}$")
_header = re.compile(r"^\[(\w+)\]$")
_literal = re.compile(rf"^\{{\s*({NAME})\s*=\s*({NAME})\s*\}}$")


@dataclass
class ModelDocument:
    kind: str
    vars: VariableSet
    model: CpNet | CprNet | LpTree
    constraints: ConstraintSet | None = None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModelDocument):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.vars == other.vars
            and self.model == other.model
            and self.constraints == other.constraints
        )


@dataclass
class _Line:
    no: int
    indent: int
    text: str
    raw: str

    def col(self, token: str | None = None) -> int:
        if token:
            i = self.raw.find(token)
            if i >= 0:
                return i + 1
        return self.indent + 1

    def error(self, message: str, token: str | None = None) -> ParseError:
        return ParseError(message, self.no, self.col(token))


def _check_name(line: _Line, token: str, what: str) -> str:
    if not _name.match(token):
        raise line.error(f"invalid {what} '{token}'", token)
    return token


# -- parsing ----------------------------------------------------------------------

def parse_model(text: str) -> ModelDocument:
    kind: str | None = None
    sections: dict[str, list[_Line]] = {}
    current: list[_Line] | None = None
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        if "\t" in body[: len(body) - len(body.lstrip())]:
            raise ParseError("tabs are not allowed in indentation", no, 1)
        line = _Line(no, len(body) - len(body.lstrip()), body.strip(), raw)
        m = _header.match(line.text)
        if m:
            name = m.group(1)
            if name not in SECTIONS:
                raise line.error(f"unknown section [{name}]", name)
            if name in sections:
                raise line.error(f"section [{name}] appears twice", name)
            current = sections[name] = []
            continue
        if current is None:
            key, sep, value = line.text.partition(":")
            if key.strip() != "kind" or not sep:
                raise line.error("expected 'kind: <cpnet|cprnet|lptree>' before any section")
            if kind is not None:
                raise line.error("kind declared twice")
            kind = value.strip()
            if kind not in KINDS:
                raise line.error(f"unknown kind '{kind}'", kind)
            continue
        current.append(line)
    if kind is None:
        raise ParseError("missing 'kind:' declaration", 1, 1)
    for name in sections:
        if name not in ALLOWED[kind]:
            first = sections[name][0].no if sections[name] else 1
            raise ParseError(f"section [{name}] is not allowed for kind {kind}", first, 1)
    if "variables" not in sections:
        raise ParseError("missing [variables] section", 1, 1)
    vars = _parse_variables(sections["variables"])
    if kind == "lptree":
        if "tree" not in sections:
            raise ParseError("missing [tree] section", 1, 1)
        model: CpNet | CprNet | LpTree = _parse_tree(vars, sections["tree"])
    else:
        if "cpts" not in sections:
            raise ParseError("missing [cpts] section", 1, 1)
        net = _parse_cpts(vars, sections["cpts"], sections.get("edges"))
        if kind == "cprnet":
            model = build_cprnet(net, _parse_aris(vars, sections.get("ari", [])))
        else:
            model = net
    constraints = None
    if "constraints" in sections:
        constraints = ConstraintSet(vars, tuple(_parse_constraint(vars, ln) for ln in sections["constraints"]))
    return ModelDocument(kind, vars, model, constraints)


def load_model(path: str | Path) -> ModelDocument:
    return parse_model(Path(path).read_text(encoding="utf-8"))


def _parse_variables(lines: list[_Line]) -> VariableSet:
    items: list[tuple[str, list[str]]] = []
    seen: set[str] = set()
    for ln in lines:
        name, sep, rest = ln.text.partition(":")
        name = name.strip()
        if not sep:
            raise ln.error("expected 'Name: value value ...'")
        _check_name(ln, name, "variable name")
        if name in seen:
            raise ln.error(f"duplicate variable '{name}'", name)
        seen.add(name)
        values = rest.split()
        for v in values:
            _check_name(ln, v, "value")
        if len(values) < 2:
            raise ln.error(f"domain of '{name}' needs at least 2 values", name)
        if len(set(values)) != len(values):
            raise ln.error(f"domain of '{name}' repeats a value", name)
        items.append((name, values))
    return VariableSet(items)


def _known(vars: VariableSet, ln: _Line, name: str) -> str:
    if name not in vars:
        raise ln.error(f"unknown variable '{name}'", name)
    return name


def _parse_row(vars: VariableSet, ln: _Line, var: str, text: str) -> PreferenceRow:
    text = text.strip()
    dom = vars.domain(var)
    partial = False
    if text == "partial" or text.startswith("partial "):
        partial = True
        text = text[len("partial"):].strip()
    chains = [c.strip() for c in text.split(",")] if text else []
    pairs: list[tuple[str, str]] = []
    ranking: list[str] = []
    for chain in chains:
        vals = [v.strip() for v in chain.split(">")]
        for v in vals:
            if v not in dom:
                raise ln.error(f"value '{v}' is not in the domain of '{var}'", v or None)
        pairs.extend(zip(vals, vals[1:]))
        ranking = vals
    try:
        if partial:
            return PreferenceRow.partial(pairs)
        if len(chains) != 1:
            raise ln.error("a total row is a single chain 'v1 > v2 > ...'; use 'partial' for partial orders")
        return PreferenceRow.ranking(ranking)
    except ParseError:
        raise
    except ModelError as exc:
        raise ln.error(str(exc)) from None


def _parse_cpt_line(vars: VariableSet, ln: _Line):
    """``X | A=a1, B=b1: row`` -> (X, {A: a1, B: b1}, row)."""
    head, sep, row_text = ln.text.partition(":")
    if not sep:
        raise ln.error("expected 'Var: row' or 'Var | Parent=value, ...: row'")
    var, bar, ctx_text = head.partition("|")
    var = _known(vars, ln, var.strip())
    ctx: dict[str, str] = {}
    if bar:
        for part in ctx_text.split(","):
            p, eq, v = part.partition("=")
            p, v = p.strip(), v.strip()
            if not eq:
                raise ln.error(f"expected Parent=value, got '{part.strip()}'", part.strip() or None)
            _known(vars, ln, p)
            if v not in vars.domain(p):
                raise ln.error(f"value '{v}' is not in the domain of '{p}'", v or None)
            if p in ctx:
                raise ln.error(f"'{p}' bound twice in one context", p)
            ctx[p] = v
    return var, ctx, _parse_row(vars, ln, var, row_text)


def _collect_cpts(vars: VariableSet, lines: list[_Line]) -> dict[str, Cpt]:
    rows: dict[str, dict[tuple[str, ...], PreferenceRow]] = {}
    parents: dict[str, tuple[str, ...]] = {}
    for ln in lines:
        var, ctx, row = _parse_cpt_line(vars, ln)
        scope = tuple(vars.sort(ctx))
        if var in parents and parents[var] != scope:
            raise ln.error(f"rows of CPT({var}) condition on different variables", var)
        parents[var] = scope
        key = tuple(ctx[p] for p in scope)
        if key in rows.setdefault(var, {}):
            raise ln.error(f"duplicate row for CPT({var})", var)
        rows[var][key] = row
    return {v: Cpt(v, parents[v], rows[v]) for v in rows}


def _parse_cpts(vars: VariableSet, lines: list[_Line], edge_lines: list[_Line] | None) -> CpNet:
    cpts = _collect_cpts(vars, lines)
    if edge_lines is not None:
        declared = set()
        for ln in edge_lines:
            a, arrow, b = ln.text.partition("->")
            if not arrow:
                raise ln.error("expected 'Parent -> Child'")
            declared.add((_known(vars, ln, a.strip()), _known(vars, ln, b.strip())))
        actual = {(p, v) for v, c in cpts.items() for p in c.parents}
        if declared != actual:
            diff = sorted(declared ^ actual)
            raise ModelError(
                "[edges] does not match the CPT parent sets: " + ", ".join(f"{a} -> {b}" for a, b in diff)
            )
    return CpNet(vars, cpts)


def _parse_aris(vars: VariableSet, lines: list[_Line]) -> list[AriStatement]:
    out = []
    for ln in lines:
        a, gt, b = ln.text.partition(">")
        if not gt:
            raise ln.error("expected 'More > Less'")
        out.append(AriStatement(_known(vars, ln, a.strip()), _known(vars, ln, b.strip())))
    return out


def _parse_tree(vars: VariableSet, lines: list[_Line]) -> LpTree:
    pos = 0

    def parse_node(indent: int) -> LpNode:
        nonlocal pos
        ln = lines[pos]
        words = ln.text.split()
        if ln.indent != indent or len(words) != 2 or words[0] != "node":
            raise ln.error("expected 'node <Var>'")
        var = _known(vars, ln, words[1])
        pos += 1
        row_lines: list[_Line] = []
        children: list[tuple[frozenset[str], LpNode]] = []
        body = None
        while pos < len(lines) and lines[pos].indent > indent:
            cur = lines[pos]
            if body is None:
                body = cur.indent
            if cur.indent != body:
                raise cur.error("inconsistent indentation")
            if cur.text.startswith("branch ") or cur.text == "branch":
                labels = cur.text.split()[1:]
                if not labels:
                    raise cur.error("a branch needs at least one value")
                for v in labels:
                    if v not in vars.domain(var):
                        raise cur.error(f"value '{v}' is not in the domain of '{var}'", v)
                pos += 1
                if pos >= len(lines) or lines[pos].indent <= body:
                    raise cur.error("branch without a node below it")
                child = parse_node(lines[pos].indent)
                children.append((frozenset(labels), child))
            elif cur.text.startswith("node "):
                raise cur.error("a child node must sit under a 'branch' line")
            else:
                if children:
                    raise cur.error("CPT rows must come before the node's branches")
                row_lines.append(cur)
                pos += 1
        for rl in row_lines:
            head = rl.text.partition(":")[0].partition("|")[0].strip()
            if head != var:
                raise rl.error(f"row for '{head}' under node '{var}'", head)
        if not row_lines:
            raise ln.error(f"node '{var}' has no CPT rows", var)
        cpt = _collect_cpts(vars, row_lines)[var]
        return LpNode(var, cpt, tuple(children))

    if not lines:
        return LpTree(vars, None)
    root = parse_node(lines[0].indent)
    if pos != len(lines):
        raise lines[pos].error("unexpected content after the root node")
    return LpTree(vars, root)


def _parse_literal(vars: VariableSet, ln: _Line, text: str) -> tuple[str, str]:
    m = _literal.match(text.strip())
    if not m:
        raise ln.error(f"expected '{{Var=value}}', got '{text.strip()}'", text.strip() or None)
    var, value = m.groups()
    _known(vars, ln, var)
    if value not in vars.domain(var):
        raise ln.error(f"value '{value}' is not in the domain of '{var}'", value)
    return var, value


def _parse_constraint(vars: VariableSet, ln: _Line) -> Constraint:
    text = ln.text
    try:
        if text.startswith("table ") or text == "table":
            head, sep, body = text[len("table"):].partition(":")
            if not sep:
                raise ln.error("expected 'table X Y: x y; x y'")
            scope = head.split()
            for v in scope:
                _known(vars, ln, v)
            tuples = []
            for part in body.split(";"):
                vals = part.split()
                if not vals:
                    continue
                if len(vals) != len(scope):
                    raise ln.error(f"tuple '{part.strip()}' does not match scope {scope}", part.strip())
                for v, x in zip(scope, vals):
                    if x not in vars.domain(v):
                        raise ln.error(f"value '{x}' is not in the domain of '{v}'", x)
                tuples.append(tuple(vals))
            return Constraint(scope, tuples) if tuples else Constraint.empty(scope)
        if "<->" in text:
            lhs, _, rhs = text.partition("<->")
            a, b = _parse_literal(vars, ln, lhs), _parse_literal(vars, ln, rhs)
            return Constraint.iff(vars, a, b)
        if "->" in text:
            lhs, _, rhs = text.partition("->")
            a, b = _parse_literal(vars, ln, lhs), _parse_literal(vars, ln, rhs)
            return Constraint.implies(vars, a, b)
        var, value = _parse_literal(vars, ln, text)
        return Constraint.unary(var, value)
    except ParseError:
        raise
    except ModelError as exc:
        raise ln.error(str(exc)) from None


# -- printing ---------------------------------------------------------------------

def _row_line(var: str, parents, ctx, row: PreferenceRow) -> str:
    if parents:
        return f"{var} | " + ", ".join(f"{p}={v}" for p, v in zip(parents, ctx)) + f": {row.format()}"
    return f"{var}: {row.format()}"


def _sorted_rows(vars: VariableSet, cpt: Cpt):
    keys = [{x: i for i, x in enumerate(vars.domain(p))} for p in cpt.parents]
    return sorted(cpt.rows.items(), key=lambda kv: [k[x] for k, x in zip(keys, kv[0])])


def format_model(doc: ModelDocument) -> str:
    vars = doc.vars
    out = [f"kind: {doc.kind}", "", "[variables]"]
    out += [f"{n}: {' '.join(vars.domain(n))}" for n in vars]
    if isinstance(doc.model, (CpNet, CprNet)):
        net = doc.model.base if isinstance(doc.model, CprNet) else doc.model
        if net.edges:
            out += ["", "[edges]"]
            out += [f"{p} -> {c}" for c in vars for p in net.cpts[c].parents]
        out += ["", "[cpts]"]
        for v in vars:
            cpt = net.cpts[v]
            out += [_row_line(v, cpt.parents, ctx, row) for ctx, row in _sorted_rows(vars, cpt)]
        if isinstance(doc.model, CprNet):
            out += ["", "[ari]"]
            rank = {v: i for i, v in enumerate(vars)}
            for a in sorted(doc.model.aris, key=lambda a: (rank[a.more_important], rank[a.less_important])):
                out.append(f"{a.more_important} > {a.less_important}")
    else:
        out += ["", "[tree]"]
        if doc.model.root is not None:
            _format_node(vars, doc.model.root, 0, out)
    if doc.constraints is not None:
        out += ["", "[constraints]"]
        for c in doc.constraints.constraints:
            body = "; ".join(" ".join(t) for t in c.sorted_tuples(vars))
            out.append(f"table {' '.join(c.scope)}:" + (f" {body}" if body else ""))
    return "\n".join(out) + "\n"


def _format_node(vars: VariableSet, node: LpNode, indent: int, out: list[str]) -> None:
    pad = " " * indent
    out.append(f"{pad}node {node.variable}")
    for ctx, row in _sorted_rows(vars, node.cpt):
        out.append(pad + "  " + _row_line(node.variable, node.cpt.parents, ctx, row))
    dom = vars.domain(node.variable)
    for label, child in node.children:
        out.append(f"{pad}  branch {' '.join(v for v in dom if v in label)}")
        _format_node(vars, child, indent + 4, out)
