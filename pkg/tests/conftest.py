import pytest

from lowcon.bitgraph import BipartiteGraph, GraphParams


def make_cyc(eps="1/4", k=2):
    params = GraphParams(3, 2, 1, k, eps)
    return BipartiteGraph.from_rule(params, lambda x, j: (x + j) % 4)


def make_const(eps="1/4", k=2, n=3, m=2, d=1):
    return BipartiteGraph.from_rule(GraphParams(n, m, d, k, eps), lambda x, j: 0)


@pytest.fixture
def g_cyc():
    return make_cyc()


@pytest.fixture
def g_const():
    return make_const()


# acceptance lines are collected here and echoed in the terminal summary so
# they show up without -s
_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_line():
    def emit(number, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        print(line)
        _ACCEPTANCE_LINES.append(line)
        return ok
    return emit


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
