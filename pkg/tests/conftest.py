import random
from functools import lru_cache
from itertools import combinations

import pytest

from dyncol.construction import build, construction_params, with_explicit_m
from dyncol.graph import Graph

ACCEPTANCE_RESULTS = {}


@lru_cache(maxsize=None)
def built(r, n, m=None, delta=2):
    params = construction_params(r, n, delta) if m is None else with_explicit_m(r, n, m)
    return build(params)


@pytest.fixture(scope="session")
def g222():
    return built(2, 2)


@pytest.fixture(scope="session")
def g237():
    return built(2, 3, 7)


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n):
    return Graph.from_edges(n, combinations(range(n), 2))


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def random_graph(rng, max_vertices=10, min_vertices=1):
    n = rng.randint(min_vertices, max_vertices)
    p = rng.choice([0.2, 0.35, 0.5, 0.7])
    return Graph.from_edges(n, [e for e in combinations(range(n), 2) if rng.random() < p])


def random_corpus(count=25, seed=2024, max_vertices=10):
    rng = random.Random(seed)
    return [random_graph(rng, max_vertices) for _ in range(count)]


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        name, ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {name}  {detail}")
