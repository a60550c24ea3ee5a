"""Immutable undirected simple graphs over dense vertex indices.

Adjacency is stored in compressed sparse row form: ``indptr`` (length
``vertex_count + 1``) and ``indices`` (sorted, duplicate-free neighbour
lists laid end to end).  All file formats are 1-based; everything in memory
is 0-based.
"""

from __future__ import annotations

import io
from bisect import bisect_left
from itertools import combinations
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .errors import FormatError

VertexSet = frozenset


class Graph:
    __slots__ = ("_indptr", "_indices", "_edge_count", "_masks")

    def __init__(self, indptr, indices, *, check=True):
        indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        indices = np.ascontiguousarray(indices, dtype=np.int32)
        indptr.setflags(write=False)
        indices.setflags(write=False)
        self._indptr = indptr
        self._indices = indices
        self._edge_count = len(indices) // 2
        self._masks = None
        if check:
            self.audit()

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = [set() for _ in range(vertex_count)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise IndexError(f"edge ({u}, {v}) out of range for {vertex_count} vertices")
            adj[u].add(v)
            adj[v].add(u)
        return cls.from_adjacency([sorted(a) for a in adj])

    @classmethod
    def from_adjacency(cls, adjacency) -> "Graph":
        lengths = [len(a) for a in adjacency]
        indptr = np.zeros(len(adjacency) + 1, dtype=np.int64)
        np.cumsum(lengths, out=indptr[1:])
        indices = np.fromiter(
            (u for a in adjacency for u in a), dtype=np.int32, count=int(indptr[-1])
        )
        return cls(indptr, indices)

    @classmethod
    def empty(cls, vertex_count: int = 0) -> "Graph":
        return cls(np.zeros(vertex_count + 1, dtype=np.int64), np.zeros(0, dtype=np.int32))

    def audit(self) -> None:
        """Raise ``ValueError`` unless the adjacency is canonical and symmetric."""
        n = self.vertex_count
        indptr, indices = self._indptr, self._indices
        if indptr[0] != 0 or np.any(np.diff(indptr) < 0) or indptr[-1] != len(indices):
            raise ValueError("malformed indptr")
        if len(indices) % 2:
            raise ValueError("odd adjacency length: asymmetric graph")
        if len(indices) == 0:
            return
        if indices.min() < 0 or indices.max() >= n:
            raise ValueError("neighbour index out of range")
        rows = np.repeat(np.arange(n, dtype=np.int32), np.diff(indptr))
        if np.any(rows == indices):
            raise ValueError("self-loop")
        step = np.diff(indices.astype(np.int64))
        same_row = rows[1:] == rows[:-1]
        if np.any(step[same_row] <= 0):
            raise ValueError("neighbour lists must be strictly increasing")
        fwd = rows.astype(np.int64) * n + indices
        bwd = indices.astype(np.int64) * n + rows
        if not np.array_equal(np.sort(fwd), np.sort(bwd)):
            raise ValueError("adjacency is not symmetric")

    @property
    def vertex_count(self) -> int:
        return len(self._indptr) - 1

    @property
    def edge_count(self) -> int:
        return self._edge_count

    @property
    def indptr(self) -> np.ndarray:
        return self._indptr

    @property
    def indices(self) -> np.ndarray:
        return self._indices

    def __len__(self) -> int:
        return self.vertex_count

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return np.array_equal(self._indptr, other._indptr) and np.array_equal(
            self._indices, other._indices
        )

    def __hash__(self):
        return hash((self._indptr.tobytes(), self._indices.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(vertex_count={self.vertex_count}, edge_count={self.edge_count})"

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.vertex_count:
            raise IndexError(f"vertex {v} out of range [0, {self.vertex_count})")

    def neighbours(self, v: int) -> np.ndarray:
        self._check_vertex(v)
        return self._indices[self._indptr[v] : self._indptr[v + 1]]

    def neighbour_list(self, v: int) -> list[int]:
        return self.neighbours(v).tolist()

    def degrees(self) -> np.ndarray:
        return np.diff(self._indptr)

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbours(u)
        self._check_vertex(v)
        pos = int(np.searchsorted(row, v))
        return pos < len(row) and row[pos] == v

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        indptr, indices = self._indptr, self._indices
        for u in range(self.vertex_count):
            row = indices[indptr[u] : indptr[u + 1]].tolist()
            for v in row[bisect_left(row, u + 1) :]:
                yield u, v

    def edge_array(self) -> np.ndarray:
        """``(edge_count, 2)`` array of edges ``u < v`` in lexicographic order."""
        rows = np.repeat(np.arange(self.vertex_count, dtype=np.int32), self.degrees())
        keep = rows < self._indices
        return np.column_stack([rows[keep], self._indices[keep]])

    def adjacency_masks(self) -> list[int]:
        """Neighbourhood bitmasks, for the small-graph brute-force kernels."""
        if self._masks is None:
            self._masks = [
                sum(1 << u for u in self.neighbour_list(v)) for v in range(self.vertex_count)
            ]
        return self._masks


def degree(g: Graph, v: int) -> int:
    g._check_vertex(v)
    return int(g.indptr[v + 1] - g.indptr[v])


def regular_degree(g: Graph) -> int | None:
    if g.vertex_count == 0:
        return None
    degs = g.degrees()
    d = int(degs[0])
    return d if bool(np.all(degs == d)) else None


def min_degree(g: Graph) -> int:
    return int(g.degrees().min()) if g.vertex_count else 0


def validate_vertex_set(g: Graph, s: Iterable[int]) -> frozenset[int]:
    members = frozenset(int(v) for v in s)
    for v in members:
        g._check_vertex(v)
    return members


def induced_subgraph(g: Graph, s: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """Subgraph induced by ``s`` plus the old-to-new index map (order preserving)."""
    members = sorted(validate_vertex_set(g, s))
    remap = {old: new for new, old in enumerate(members)}
    adjacency = [[remap[u] for u in g.neighbour_list(v) if u in remap] for v in members]
    return Graph.from_adjacency(adjacency), remap


def is_clique(g: Graph, vertices: Iterable[int]) -> bool:
    vs = list(vertices)
    return len(set(vs)) == len(vs) and all(g.has_edge(u, v) for u, v in combinations(vs, 2))


def find_clique(
    g: Graph, candidates: Iterable[int], size: int, *, exhaustive_limit: int = 64
) -> frozenset[int] | None:
    """Return ``size`` pairwise adjacent vertices from ``candidates``, or None.

    Search is exhaustive when there are at most ``exhaustive_limit``
    candidates.  Above that only a greedy pass runs, so ``None`` is
    authoritative only for small candidate sets (e.g. one construction block,
    where taking one vertex per part always succeeds).
    """
    if size < 1:
        raise ValueError("clique size must be positive")
    cand = sorted(validate_vertex_set(g, candidates))
    if len(cand) < size:
        return None

    if len(cand) > exhaustive_limit:
        chosen: list[int] = []
        pool = cand
        while pool and len(chosen) < size:
            v = pool[0]
            chosen.append(v)
            nbrs = set(g.neighbour_list(v))
            pool = [u for u in pool[1:] if u in nbrs]
        return frozenset(chosen) if len(chosen) == size else None

    nbrs = {v: set(g.neighbour_list(v)) for v in cand}

    def extend(chosen: list[int], pool: list[int]) -> list[int] | None:
        if len(chosen) == size:
            return chosen
        for pos, v in enumerate(pool):
            if len(chosen) + len(pool) - pos < size:
                return None
            found = extend(chosen + [v], [u for u in pool[pos + 1 :] if u in nbrs[v]])
            if found is not None:
                return found
        return None

    found = extend([], cand)
    return frozenset(found) if found is not None else None


def greedy_clique(g: Graph) -> list[int]:
    """A maximal clique grown from each vertex in turn; the largest is returned."""
    best: list[int] = []
    degs = g.degrees()
    for start in np.argsort(-degs, kind="stable")[: min(g.vertex_count, 64)].tolist():
        clique = [start]
        pool = set(g.neighbour_list(start))
        while pool:
            v = max(pool, key=lambda u: (len(pool.intersection(g.neighbour_list(u))), -u))
            clique.append(v)
            pool.intersection_update(g.neighbour_list(v))
        if len(clique) > len(best):
            best = sorted(clique)
    return best


# --- DIMACS graph format -------------------------------------------------


def write_dimacs(g: Graph, path, comments: Iterable[str] = ()) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(dumps_dimacs(g, comments))


def dumps_dimacs(g: Graph, comments: Iterable[str] = ()) -> str:
    buf = io.StringIO()
    for line in comments:
        buf.write(f"c {line}\n")
    buf.write(f"p edge {g.vertex_count} {g.edge_count}\n")
    edges = g.edge_array() + 1
    if len(edges):
        buf.write("\n".join(f"e {u} {v}" for u, v in edges.tolist()))
        buf.write("\n")
    return buf.getvalue()


def read_dimacs(path) -> Graph:
    return loads_dimacs(Path(path).read_text(encoding="ascii"))


def loads_dimacs(text: str) -> Graph:
    header = None
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if header is not None or len(parts) != 4 or parts[1] != "edge":
                raise FormatError(f"line {lineno}: bad problem line {raw!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise FormatError(f"line {lineno}: bad problem line {raw!r}") from None
        elif parts[0] == "e":
            if header is None:
                raise FormatError(f"line {lineno}: edge before problem line")
            if len(parts) != 3:
                raise FormatError(f"line {lineno}: bad edge line {raw!r}")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise FormatError(f"line {lineno}: bad edge line {raw!r}") from None
            if not (1 <= u <= header[0] and 1 <= v <= header[0]) or u == v:
                raise FormatError(f"line {lineno}: invalid edge {u} {v}")
            edges.append((u - 1, v - 1))
        else:
            raise FormatError(f"line {lineno}: unexpected line {raw!r}")
    if header is None:
        raise FormatError("missing 'p edge' line")
    g = Graph.from_edges(header[0], edges)
    if g.edge_count != header[1] or len(edges) != header[1]:
        raise FormatError(f"header declares {header[1]} edges, found {len(edges)} distinct {g.edge_count}")
    return g
