import pytest
from _report import ACCEPTANCE_LINES

from rooted_containers import build_union_hypergraph


@pytest.fixture(scope="session")
def union_hg():
    cache = {}

    def get(n):
        if n not in cache:
            cache[n] = build_union_hypergraph(n)
        return cache[n]

    return get


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
