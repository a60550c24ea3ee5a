import random
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dyncol.construction import Part
from dyncol.errors import FormatError
from dyncol.graph import (
    Graph,
    degree,
    dumps_dimacs,
    find_clique,
    induced_subgraph,
    is_clique,
    loads_dimacs,
    regular_degree,
)

from conftest import built, complete, cycle, path


@st.composite
def small_graphs(draw, max_vertices=12):
    n = draw(st.integers(0, max_vertices))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return Graph.from_edges(n, chosen)


def test_degree_examples():
    assert degree(built(2, 2).graph, 0) == 22
    assert degree(built(2, 2).graph, 395) == 22
    assert degree(Graph.empty(3), 1) == 0
    g6 = built(2, 2, 2).graph
    assert [degree(g6, v) for v in range(6)] == [2] * 6
    with pytest.raises(IndexError):
        degree(g6, 6)


def test_regular_degree_examples():
    assert regular_degree(built(2, 2).graph) == 22
    assert regular_degree(path(3)) is None
    assert regular_degree(Graph.empty(0)) is None
    assert regular_degree(built(3, 2).graph) == 78


def test_induced_on_part_vertices_gives_disjoint_bicliques():
    lg = built(2, 2)
    parts = range(lg.params.part_vertex_count)
    sub, remap = induced_subgraph(lg.graph, parts)
    assert sub.vertex_count == 264
    assert regular_degree(sub) == 11
    assert remap == {v: v for v in parts}


def test_induced_on_empty_and_one_block():
    sub, remap = induced_subgraph(cycle(5), [])
    assert sub.vertex_count == 0 and remap == {}
    lg = built(2, 2, 3)
    block = [lg.index_of(Part(i, j, 1)) for i in (1, 2) for j in (1, 2)]
    sub, _ = induced_subgraph(lg.graph, block)
    # K_{2,2}: vertices 0,1 form one side, 2,3 the other
    assert sorted(sub.edges()) == [(0, 2), (0, 3), (1, 2), (1, 3)]


def test_induced_rejects_bad_member():
    with pytest.raises(IndexError):
        induced_subgraph(cycle(4), [0, 7])


@settings(max_examples=60, deadline=None)
@given(small_graphs(), st.data())
def test_induced_subgraph_matches_pairwise_check(g, data):
    subset = data.draw(st.sets(st.integers(0, max(g.vertex_count - 1, 0))) if g.vertex_count else st.just(set()))
    sub, remap = induced_subgraph(g, subset)
    assert sub.vertex_count == len(subset)
    for a, b in combinations(sorted(subset), 2):
        assert sub.has_edge(remap[a], remap[b]) == g.has_edge(a, b)


@settings(max_examples=60, deadline=None)
@given(small_graphs())
def test_canonical_form_and_handshake(g):
    g.audit()
    assert int(g.degrees().sum()) == 2 * g.edge_count
    for v in range(g.vertex_count):
        row = g.neighbour_list(v)
        assert row == sorted(set(row)) and v not in row
        for u in row:
            assert v in g.neighbour_list(u)


def test_audit_rejects_asymmetric_and_loops():
    with pytest.raises(ValueError):
        Graph(np.array([0, 1, 1]), np.array([1]))
    with pytest.raises(ValueError):
        Graph(np.array([0, 1, 2]), np.array([0, 1]))
    with pytest.raises(ValueError):
        Graph.from_edges(2, [(1, 1)])


def test_find_clique_examples():
    lg = built(2, 2)
    pair = [lg.index_of(Part(i, 1, 1)) for i in (1, 2)]
    assert find_clique(lg.graph, pair, 2) == frozenset(pair)
    assert find_clique(cycle(6), range(6), 3) is None
    lg7 = built(2, 3, 7)
    block = lg7.block(1)
    clique = find_clique(lg7.graph, block, 3)
    assert clique is not None and is_clique(lg7.graph, clique)
    assert sorted(lg7.label_of(v).i for v in clique) == [1, 2, 3]
    assert all(lg7.label_of(v).k == 1 for v in clique)


def test_find_clique_greedy_above_limit_still_returns_a_clique():
    lg7 = built(2, 3, 7)
    clique = find_clique(lg7.graph, lg7.block(2), 3, exhaustive_limit=10)
    assert clique is not None and is_clique(lg7.graph, clique)


def test_find_clique_exhaustive_on_random_graphs():
    rng = random.Random(5)
    for _ in range(30):
        n = rng.randint(3, 9)
        g = Graph.from_edges(n, [e for e in combinations(range(n), 2) if rng.random() < 0.5])
        for size in (2, 3, 4):
            brute = any(is_clique(g, c) for c in combinations(range(n), size))
            found = find_clique(g, range(n), size)
            assert (found is not None) == brute
            if found is not None:
                assert is_clique(g, found) and len(found) == size


def test_dimacs_round_trip_and_comments():
    g = complete(4)
    text = dumps_dimacs(g, ["hello"])
    assert text.splitlines()[:2] == ["c hello", "p edge 4 6"]
    assert loads_dimacs(text) == g
    assert loads_dimacs("c x\np edge 3 0\n") == Graph.empty(3)


@pytest.mark.parametrize(
    "text",
    [
        "e 1 2\n",
        "p edge 2 1\ne 1 3\n",
        "p edge 2 2\ne 1 2\n",
        "p edge 2 1\ne 1 1\n",
        "p edge 2 1\nx 1 2\n",
        "p edge two 1\n",
        "",
    ],
)
def test_dimacs_rejects_malformed(text):
    with pytest.raises(FormatError):
        loads_dimacs(text)
