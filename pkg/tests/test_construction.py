from itertools import combinations
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dyncol.construction import (
    Budget,
    Part,
    Selector,
    build,
    canonical_index,
    colex_rank,
    colex_subsets,
    colex_unrank,
    construction_params,
    export,
    label_at,
    load_labeled,
    read_labels,
    with_explicit_m,
)
from dyncol.errors import CapacityError, FormatError, LabelError, ParameterError
from dyncol.graph import regular_degree

from conftest import built
from oracles import adjacent_by_definition, labels_by_definition

GRID = [(r, n, m) for r in (2, 3) for n in (2, 3) for m in range(n, n + 5)]


def as_oracle_label(label):
    if isinstance(label, Part):
        return ("part", label.i, label.j, label.k)
    return ("selector", label.i, tuple(label.X))


@pytest.mark.parametrize(
    "args, m, N, V, d",
    [
        ((2, 2, 2), 12, 11, 396, 22),
        ((2, 2, 30), 30, 29, 2 * 29 * 30 + 2 * comb(30, 2), 58),
        ((3, 2, 2), 40, 39, 4680, 78),
    ],
)
def test_construction_params(args, m, N, V, d):
    p = construction_params(*args)
    assert (p.m, p.N, p.vertex_count, p.degree) == (m, N, V, d)
    assert p.degree > p.delta
    assert p.pigeonhole_ok and p.domination_ok


def test_construction_params_rejects_small_and_huge():
    for bad in [(1, 2, 2), (2, 1, 2), (2, 2, 1)]:
        with pytest.raises(ParameterError):
            construction_params(*bad)
    with pytest.raises(CapacityError) as info:
        construction_params(3, 3, 2)
    assert info.value.quantity == "vertices"
    with pytest.raises(CapacityError) as info:
        construction_params(2, 3, 2, budget=Budget(vertices=10**7, edges=10**6))
    assert info.value.quantity == "edges"
    # the default budget admits G(2,3,2): legal, if large
    p = construction_params(2, 3, 2)
    assert p.vertex_count == 3 * p.N * p.m + 3 * comb(p.m, 3)


def test_with_explicit_m():
    p = with_explicit_m(2, 2, 2)
    assert (p.N, p.vertex_count, p.pigeonhole_ok, p.delta) == (1, 6, False, 2)
    p = with_explicit_m(2, 3, 7)
    assert (p.N, p.vertex_count, p.domination_ok, p.pigeonhole_ok) == (15, 420, True, False)
    p12 = with_explicit_m(2, 2, 12)
    p222 = construction_params(2, 2, 2)
    assert (p12.m, p12.N, p12.vertex_count) == (p222.m, p222.N, p222.vertex_count)
    assert build(p12).graph == build(p222).graph
    with pytest.raises(ParameterError):
        with_explicit_m(2, 3, 2)


def test_six_vertex_instance_is_a_hexagon():
    g = built(2, 2, 2).graph
    assert g.vertex_count == 6 and regular_degree(g) == 2
    seen, stack = {0}, [0]
    while stack:
        for u in g.neighbour_list(stack.pop()):
            if u not in seen:
                seen.add(u)
                stack.append(u)
    assert len(seen) == 6  # connected 2-regular on 6 vertices = C6


def test_g222_counts():
    g = built(2, 2).graph
    assert (g.vertex_count, g.edge_count, regular_degree(g)) == (396, 4356, 22)


def test_adjacency_spot_checks():
    lg = built(2, 2)
    g = lg.graph
    assert g.has_edge(lg.index_of(Part(1, 1, 1)), lg.index_of(Part(2, 1, 1)))
    assert not g.has_edge(lg.index_of(Part(1, 1, 1)), lg.index_of(Part(1, 1, 2)))
    s = lg.index_of(Selector(1, (1, 2)))
    assert all(g.has_edge(s, lg.index_of(Part(1, j, 1))) for j in range(1, 12))


def test_canonical_index_examples():
    p = with_explicit_m(2, 2, 2)
    assert canonical_index(Part(1, 1, 1), p) == 0
    assert canonical_index(Part(2, 1, 1), p) == 1
    assert canonical_index(Selector(1, (1, 2)), p) == 4
    assert [label_at(x, p) for x in range(6)] == [
        Part(1, 1, 1), Part(2, 1, 1), Part(1, 1, 2), Part(2, 1, 2),
        Selector(1, (1, 2)), Selector(2, (1, 2)),
    ]


@pytest.mark.parametrize(
    "label",
    [Part(0, 1, 1), Part(1, 12, 1), Part(1, 1, 13), Selector(1, (2, 1)), Selector(3, (1, 2)),
     Selector(1, (1, 2, 3)), Selector(1, (1, 13)), ("part", 1, 1, 1)],
)
def test_canonical_index_rejects_invalid(label):
    with pytest.raises(LabelError):
        canonical_index(label, construction_params(2, 2, 2))


@pytest.mark.parametrize("r, n, m", GRID)
def test_grid_matches_definition(r, n, m):
    """Every build equals the graph written down pairwise from the definition."""
    lg = built(r, n, m)
    p = lg.params
    N = comb(m - 1, n - 1)
    assert p.N == N
    assert lg.graph.vertex_count == n * N * m + n * comb(m, n)
    assert regular_degree(lg.graph) == n * N
    assert lg.graph.edge_count == lg.graph.vertex_count * n * N // 2
    labels = [as_oracle_label(lg.label_of(x)) for x in range(p.vertex_count)]
    assert sorted(labels, key=repr) == sorted(labels_by_definition(n, m), key=repr)
    if p.vertex_count <= 200:
        for a, b in combinations(range(p.vertex_count), 2):
            assert lg.graph.has_edge(a, b) == adjacent_by_definition(labels[a], labels[b])
    else:
        for a in range(0, p.vertex_count, 7):
            nbrs = set(lg.graph.neighbour_list(a))
            expected = {b for b in range(p.vertex_count) if adjacent_by_definition(labels[a], labels[b])}
            assert nbrs == expected


@pytest.mark.parametrize("r, n, m", GRID)
def test_label_round_trip(r, n, m):
    lg = built(r, n, m)
    for x in range(lg.params.vertex_count):
        assert lg.index_of(lg.label_of(x)) == x


@given(st.integers(1, 14).flatmap(lambda m: st.tuples(st.just(m), st.integers(1, m))))
def test_colex_rank_unrank(mn):
    m, n = mn
    subsets = colex_subsets(m, n)
    assert len(subsets) == comb(m, n)
    for rank, X in enumerate(subsets):
        assert colex_rank(X) == rank
        assert colex_unrank(rank, n) == X


def test_determinism_and_export(tmp_path):
    a = build(construction_params(2, 2, 2))
    b = build(construction_params(2, 2, 2))
    pa = export(a, tmp_path / "a")
    pb = export(b, tmp_path / "b")
    assert pa[0].read_bytes() == pb[0].read_bytes()
    assert pa[1].read_bytes() == pb[1].read_bytes()
    header, labels = read_labels(pa[1])
    assert header == {"r": 2, "n": 2, "delta": 2, "m": 12}
    assert labels[0] == Part(1, 1, 1) and labels[-1] == Selector(2, (11, 12))
    assert pa[1].read_text().splitlines()[265] == "265 selector 1 1,2"
    loaded = load_labeled(*pa)
    assert loaded.graph == a.graph and loaded.params == a.params


def test_load_labeled_rejects_mismatch(tmp_path):
    gpath, lpath = export(built(2, 2, 3), tmp_path / "g")
    other, _ = export(built(2, 2, 4), tmp_path / "h")
    with pytest.raises(FormatError):
        load_labeled(other, lpath)
    lines = lpath.read_text().splitlines()
    lines[1] = "1 part 2 1 1"
    lpath.write_text("\n".join(lines) + "\n")
    with pytest.raises(FormatError):
        load_labeled(gpath, lpath)
