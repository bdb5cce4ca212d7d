import random

import networkx as nx
import pytest

from polykit.constructions import make_named
from polykit.core import SimplePolytope3


@pytest.fixture(scope="session")
def named():
    cache = {}

    def get(name, k=None):
        key = (name, k)
        if key not in cache:
            cache[key] = make_named(name, k)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def small_corpus():
    from polykit.corpus import exhaustive_corpus

    return exhaustive_corpus(9)


def face_graph(p: SimplePolytope3) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(p.m))
    g.add_edges_from(p.edges)
    return g


def random_relabel(p, seed):
    q, perm = p.random_relabel(random.Random(seed))
    return q, perm


# one PASS/FAIL line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE: list[str] = []


def record(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2} [{title}] tolerance=0: {detail}"
    ACCEPTANCE.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
