"""Parameters, vertex labels and the labelled counterexample graph G(r, n; m).

The graph is ``m`` disjoint complete ``n``-partite blocks with parts of size
``N = binom(m-1, n-1)``, plus one selector vertex ``s_{i,X}`` for every part
index ``i`` and every ``n``-subset ``X`` of the blocks; ``s_{i,X}`` sees all
of part ``i`` in every block of ``X``.

Canonical vertex order: part vertices first, sorted by ``(k, i, j)``, then
selectors sorted by ``(i, colex rank of X)``.  Labels are 1-based like the
construction; indices are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Iterator, NamedTuple, Union

import numpy as np

from .errors import CapacityError, FormatError, LabelError, ParameterError
from .graph import Graph, read_dimacs, write_dimacs

INDEX_LIMIT = 2**31 - 1  # neighbour indices are stored as int32


@dataclass(frozen=True)
class Budget:
    vertices: int = 5_000_000
    edges: int = 500_000_000


DEFAULT_BUDGET = Budget()


class Part(NamedTuple):
    i: int
    j: int
    k: int

    def __str__(self) -> str:
        return f"part {self.i} {self.j} {self.k}"


class Selector(NamedTuple):
    i: int
    X: tuple[int, ...]

    def __str__(self) -> str:
        return f"selector {self.i} {','.join(map(str, self.X))}"


VertexLabel = Union[Part, Selector]


@dataclass(frozen=True)
class ConstructionParams:
    r: int
    n: int
    delta: int
    m: int
    N: int
    pigeonhole_ok: bool
    domination_ok: bool

    @property
    def selectors_per_part(self) -> int:
        return comb(self.m, self.n)

    @property
    def part_vertex_count(self) -> int:
        return self.n * self.N * self.m

    @property
    def vertex_count(self) -> int:
        return self.part_vertex_count + self.n * self.selectors_per_part

    @property
    def degree(self) -> int:
        return self.n * self.N

    @property
    def edge_count(self) -> int:
        return self.vertex_count * self.degree // 2

    @property
    def pigeonhole_threshold(self) -> int:
        """Blocks must exceed this for the dynamic refutation to be guaranteed."""
        return (self.n - 1) * self.n * comb(self.r * self.n - 1, self.r - 1)

    @property
    def domination_threshold(self) -> int:
        return (self.n - 1) * self.n

    def with_r(self, r: int) -> "ConstructionParams":
        """Same graph, different dynamism level (the graph does not depend on r)."""
        return _derive(r, self.n, self.delta, self.m)


def _derive(r: int, n: int, delta: int, m: int) -> ConstructionParams:
    if m < n:
        raise ParameterError(f"need m >= n, got m={m}, n={n}")
    N = comb(m - 1, n - 1)
    params = ConstructionParams(
        r=r,
        n=n,
        delta=delta,
        m=m,
        N=N,
        pigeonhole_ok=m > (n - 1) * n * comb(r * n - 1, r - 1),
        domination_ok=m > (n - 1) * n,
    )
    assert params.N == comb(params.m - 1, params.n - 1)
    return params


def check_budget(params: ConstructionParams, budget: Budget | None = DEFAULT_BUDGET) -> None:
    counts = {
        "vertices": params.vertex_count,
        "edges": params.edge_count,
    }
    if counts["vertices"] > INDEX_LIMIT:
        raise CapacityError("vertices", counts["vertices"], INDEX_LIMIT)
    if budget is None:
        return
    if counts["vertices"] > budget.vertices:
        raise CapacityError("vertices", counts["vertices"], budget.vertices)
    if counts["edges"] > budget.edges:
        raise CapacityError("edges", counts["edges"], budget.edges)


def _require_at_least_two(**values: int) -> None:
    for name, value in values.items():
        if not isinstance(value, int) or value < 2:
            raise ParameterError(f"{name} must be an integer >= 2, got {value!r}")


def construction_params(
    r: int, n: int, delta: int, *, budget: Budget | None = DEFAULT_BUDGET
) -> ConstructionParams:
    """Parameters with the default block count ``max(binom(rn-1, r-1) n^2, delta)``."""
    _require_at_least_two(r=r, n=n, delta=delta)
    m = max(comb(r * n - 1, r - 1) * n * n, delta)
    params = _derive(r, n, delta, m)
    if not params.pigeonhole_ok:
        raise AssertionError("default block count must clear the pigeonhole threshold")
    # degree nN exceeds delta: N = binom(m-1, n-1) >= m-1 >= delta-1 and n >= 2
    if params.degree <= delta:
        raise AssertionError(f"degree {params.degree} does not exceed delta {delta}")
    check_budget(params, budget)
    return params


def with_explicit_m(
    r: int, n: int, m: int, *, budget: Budget | None = DEFAULT_BUDGET
) -> ConstructionParams:
    """Parameters for an explicit block count; the threshold flags may be false."""
    _require_at_least_two(r=r, n=n)
    if not isinstance(m, int) or m < n:
        raise ParameterError(f"need m >= n, got m={m!r}, n={n}")
    params = _derive(r, n, 2, m)
    check_budget(params, budget)
    return params


# --- colexicographic subset ranking ---------------------------------------


def colex_rank(X) -> int:
    """Rank of a strictly increasing 1-based subset in colex order."""
    return sum(comb(x - 1, t) for t, x in enumerate(X, 1))


def colex_unrank(rank: int, size: int) -> tuple[int, ...]:
    out = []
    for t in range(size, 0, -1):
        c = t - 1
        while comb(c + 1, t) <= rank:
            c += 1
        rank -= comb(c, t)
        out.append(c + 1)
    return tuple(reversed(out))


def colex_subsets(m: int, size: int) -> list[tuple[int, ...]]:
    return sorted(combinations(range(1, m + 1), size), key=lambda X: X[::-1])


# --- labelled graph ---------------------------------------------------------


def canonical_index(label: VertexLabel, params: ConstructionParams) -> int:
    n, N, m = params.n, params.N, params.m
    if isinstance(label, Part):
        i, j, k = label
        if not (1 <= i <= n and 1 <= j <= N and 1 <= k <= m):
            raise LabelError(f"{label!r} out of range for n={n}, N={N}, m={m}")
        return ((k - 1) * n + (i - 1)) * N + (j - 1)
    if isinstance(label, Selector):
        i, X = label
        X = tuple(X)
        if not 1 <= i <= n:
            raise LabelError(f"{label!r}: part index out of range")
        if len(X) != n or any(a >= b for a, b in zip(X, X[1:])) or not X or X[0] < 1 or X[-1] > m:
            raise LabelError(f"{label!r}: X must be a strictly increasing {n}-subset of [1, {m}]")
        return params.part_vertex_count + (i - 1) * params.selectors_per_part + colex_rank(X)
    raise LabelError(f"not a vertex label: {label!r}")


def label_at(index: int, params: ConstructionParams) -> VertexLabel:
    n, N = params.n, params.N
    if not 0 <= index < params.vertex_count:
        raise IndexError(f"vertex {index} out of range")
    if index < params.part_vertex_count:
        block_part, j = divmod(index, N)
        k, i = divmod(block_part, n)
        return Part(i + 1, j + 1, k + 1)
    i, rank = divmod(index - params.part_vertex_count, params.selectors_per_part)
    return Selector(i + 1, colex_unrank(rank, n))


class LabeledGraph:
    """A built construction: the graph, its parameters, and the label bijection."""

    def __init__(self, graph: Graph, params: ConstructionParams):
        if graph.vertex_count != params.vertex_count:
            raise ValueError("graph size does not match parameters")
        self.graph = graph
        self.params = params

    def __repr__(self) -> str:
        p = self.params
        return f"LabeledGraph(r={p.r}, n={p.n}, m={p.m}, N={p.N}, |V|={self.graph.vertex_count})"

    def label_of(self, index: int) -> VertexLabel:
        return label_at(index, self.params)

    def index_of(self, label: VertexLabel) -> int:
        return canonical_index(label, self.params)

    def labels(self) -> Iterator[VertexLabel]:
        for x in range(self.params.vertex_count):
            yield self.label_of(x)

    def part_row(self, i: int, k: int) -> range:
        """Indices of ``Part(i, 1..N, k)``."""
        start = canonical_index(Part(i, 1, k), self.params)
        return range(start, start + self.params.N)

    def block(self, k: int) -> range:
        start = canonical_index(Part(1, 1, k), self.params)
        return range(start, start + self.params.n * self.params.N)

    @cached_property
    def selector_range(self) -> range:
        return range(self.params.part_vertex_count, self.params.vertex_count)

    def is_selector(self, index: int) -> bool:
        return index >= self.params.part_vertex_count


def build(params: ConstructionParams, *, budget: Budget | None = DEFAULT_BUDGET) -> LabeledGraph:
    check_budget(params, budget)
    n, N, m = params.n, params.N, params.m
    P = params.part_vertex_count
    C = params.selectors_per_part

    containing: list[list[int]] = [[] for _ in range(m + 1)]
    subsets = colex_subsets(m, n)
    for rank, X in enumerate(subsets):
        for k in X:
            containing[k].append(rank)
    containing_arr = [np.asarray(c, dtype=np.int64) for c in containing]

    rows: list[np.ndarray] = []
    for k in range(1, m + 1):
        base = (k - 1) * n * N
        block = np.arange(base, base + n * N, dtype=np.int64)
        for i in range(1, n + 1):
            own = slice((i - 1) * N, i * N)
            row = np.concatenate(
                [block[: own.start], block[own.stop :], P + (i - 1) * C + containing_arr[k]]
            )
            rows.append(np.tile(row, N))
    offsets_in_block = np.arange(N, dtype=np.int64)
    for i in range(1, n + 1):
        for X in subsets:
            rows.append(
                np.concatenate([((k - 1) * n + (i - 1)) * N + offsets_in_block for k in X])
            )

    indices = np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64)
    degree = params.degree
    indptr = np.arange(params.vertex_count + 1, dtype=np.int64) * degree
    if len(indices) != indptr[-1]:
        raise AssertionError("construction is not regular")
    graph = Graph(indptr, indices.astype(np.int32), check=False)
    return LabeledGraph(graph, params)


# --- sidecar files ---------------------------------------------------------


def write_labels(lg: LabeledGraph, path) -> None:
    p = lg.params
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(f"c params r={p.r} n={p.n} delta={p.delta} m={p.m}\n")
        for x, label in enumerate(lg.labels(), 1):
            fh.write(f"{x} {label}\n")


def read_labels(path) -> tuple[dict[str, int], list[VertexLabel]]:
    """Parse a label sidecar; returns the header parameters (may be empty) and labels."""
    header: dict[str, int] = {}
    labels: dict[int, VertexLabel] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="ascii").splitlines(), 1):
        parts = raw.split()
        if not parts:
            continue
        try:
            if parts[0] == "c":
                if len(parts) > 1 and parts[1] == "params":
                    header = {key: int(val) for key, val in (p.split("=") for p in parts[2:])}
                continue
            idx = int(parts[0])
            if parts[1] == "part" and len(parts) == 5:
                label: VertexLabel = Part(int(parts[2]), int(parts[3]), int(parts[4]))
            elif parts[1] == "selector" and len(parts) == 4:
                label = Selector(int(parts[2]), tuple(int(x) for x in parts[3].split(",")))
            else:
                raise ValueError
        except (ValueError, IndexError):
            raise FormatError(f"line {lineno}: bad label line {raw!r}") from None
        if idx in labels:
            raise FormatError(f"line {lineno}: vertex {idx} labelled twice")
        labels[idx] = label
    if sorted(labels) != list(range(1, len(labels) + 1)):
        raise FormatError("label indices must be exactly 1..|V|")
    return header, [labels[x] for x in range(1, len(labels) + 1)]


def export(lg: LabeledGraph, stem) -> tuple[Path, Path]:
    stem = Path(stem)
    graph_path = stem.with_name(stem.name + ".col")
    labels_path = stem.with_name(stem.name + ".labels")
    p = lg.params
    write_dimacs(lg.graph, graph_path, comments=[f"G(r={p.r}, n={p.n}; m={p.m}) N={p.N}"])
    write_labels(lg, labels_path)
    return graph_path, labels_path


def load_labeled(graph_path, labels_path, *, budget: Budget | None = DEFAULT_BUDGET) -> LabeledGraph:
    """Read a graph and its sidecar, and confirm they are exactly the construction."""
    header, labels = read_labels(labels_path)
    selectors = [lab for lab in labels if isinstance(lab, Selector)]
    parts = [lab for lab in labels if isinstance(lab, Part)]
    if not parts or not selectors:
        raise FormatError("labels describe no construction")
    n = len(selectors[0].X)
    m = max(lab.k for lab in parts)
    if "n" in header and header["n"] != n or "m" in header and header["m"] != m:
        raise FormatError("label header disagrees with label contents")
    r = header.get("r", 2)
    delta = header.get("delta", 2)
    try:
        params = _derive(r, n, delta, m)
        check_budget(params, budget)
    except ParameterError as exc:
        raise FormatError(str(exc)) from None
    lg = build(params, budget=budget)
    if len(labels) != params.vertex_count or any(
        lab != lg.label_of(x) for x, lab in enumerate(labels)
    ):
        raise FormatError("labels are not in canonical construction order")
    graph = read_dimacs(graph_path)
    if graph != lg.graph:
        raise FormatError("graph file does not match the construction its labels describe")
    return lg
