from pathlib import Path

import pytest

from prefcsp.modelfile import load_model

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_path(name: str) -> Path:
    return FIXTURES / name


def load(name: str):
    return load_model(fixture_path(name))


@pytest.fixture
def n1():
    return load("fig1-cpnet").model


@pytest.fixture
def n2():
    return load("fig3-cpnet").model


@pytest.fixture
def r0():
    return load("fig4-cprnet").model


@pytest.fixture
def r1_doc():
    return load("fig5-cprnet")


@pytest.fixture
def l1():
    return load("fig2-lptree").model


@pytest.fixture
def l2_doc():
    return load("fig7-lptree")


def oc(vars, text: str):
    """Outcome from compact text: 'a1 b2 c1' matched to variables in order."""
    return vars.outcome(zip(vars.names, text.split()))


def build_net(domains: dict, tables: dict):
    """CpNet from ``{var: (parents, {context tuple: "x1 > x2"})}``.

    A row string starting with ``partial`` lists covering pairs, e.g.
    ``"partial x1 > x2, x3 > x2"``.
    """
    from prefcsp.cpnet import Cpt, CpNet, PreferenceRow
    from prefcsp.model import VariableSet

    vs = VariableSet(domains)

    def row(text):
        if text.startswith("partial"):
            chains = [c for c in text[len("partial"):].split(",") if c.strip()]
            pairs = []
            for c in chains:
                vals = [v.strip() for v in c.split(">")]
                pairs += list(zip(vals, vals[1:]))
            return PreferenceRow.partial(pairs)
        return PreferenceRow.ranking([v.strip() for v in text.split(">")])

    cpts = {}
    for var in vs:
        parents, rows = tables.get(var, ((), {(): " > ".join(vs.domain(var))}))
        cpts[var] = Cpt(var, tuple(parents), {tuple(k): row(r) for k, r in rows.items()})
    return CpNet(vs, cpts)


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[number])
