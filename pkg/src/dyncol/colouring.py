"""Colourings, the proper / r-dynamic validators, and the explicit witnesses."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Union

import numpy as np

from . import kernels
from .construction import LabeledGraph, Part, Selector
from .errors import ColouringError, FormatError, WitnessUnavailable
from .graph import Graph, find_clique


class Colouring:
    """Total assignment of colours ``1..palette_size`` to vertices ``0..len-1``."""

    __slots__ = ("_colours", "palette_size")

    def __init__(self, colours: Iterable[int], palette_size: int | None = None):
        arr = np.array(list(colours) if not isinstance(colours, np.ndarray) else colours, dtype=np.int64)
        if arr.ndim != 1:
            raise ColouringError("colours must be a flat sequence")
        if palette_size is None:
            palette_size = int(arr.max()) if len(arr) else 0
        if len(arr) and (arr.min() < 1 or arr.max() > palette_size):
            raise ColouringError(f"colours must lie in [1, {palette_size}]")
        arr = arr.astype(np.int32)
        arr.setflags(write=False)
        self._colours = arr
        self.palette_size = int(palette_size)

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, int], vertex_count: int, palette_size=None):
        missing = [v for v in range(vertex_count) if v not in mapping]
        if missing or len(mapping) != vertex_count:
            raise ColouringError(f"partial colouring: vertex {missing[0] if missing else '?'} uncoloured")
        return cls([mapping[v] for v in range(vertex_count)], palette_size)

    @property
    def array(self) -> np.ndarray:
        return self._colours

    def __len__(self) -> int:
        return len(self._colours)

    def __getitem__(self, v: int) -> int:
        return int(self._colours[v])

    def __iter__(self):
        return iter(self._colours.tolist())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Colouring):
            return NotImplemented
        return self.palette_size == other.palette_size and np.array_equal(
            self._colours, other._colours
        )

    def __hash__(self):
        return hash((self.palette_size, self._colours.tobytes()))

    def __repr__(self) -> str:
        return f"Colouring(|V|={len(self)}, palette={self.palette_size}, used={colours_used(self)})"


@dataclass(frozen=True)
class ImproperEdge:
    u: int
    v: int

    def __str__(self) -> str:
        return f"ImproperEdge({self.u + 1}, {self.v + 1})"


@dataclass(frozen=True)
class StarvedVertex:
    v: int
    colours_seen: frozenset
    required: int

    def __str__(self) -> str:
        seen = ",".join(map(str, sorted(self.colours_seen)))
        return f"StarvedVertex({self.v + 1}, colours_seen={{{seen}}}, required={self.required})"


Violation = Union[ImproperEdge, StarvedVertex]


def _require_total(g: Graph, c: Colouring) -> None:
    if len(c) != g.vertex_count:
        raise ColouringError(f"colouring covers {len(c)} vertices, graph has {g.vertex_count}")


def is_proper(g: Graph, c: Colouring) -> ImproperEdge | None:
    """None iff proper, else the lexicographically first monochromatic edge."""
    _require_total(g, c)
    hit = kernels.first_improper_edge(g.indptr, g.indices, c.array)
    return None if hit is None else ImproperEdge(*hit)


def _starved(g: Graph, c: Colouring, v: int, r: int) -> StarvedVertex:
    nbrs = g.neighbours(v)
    return StarvedVertex(
        v, frozenset(c.array[nbrs].tolist()), min(r, len(nbrs))
    )


def is_r_dynamic(g: Graph, c: Colouring, r: int) -> StarvedVertex | None:
    """Dynamism only: None iff every v sees at least ``min(r, d(v))`` colours."""
    _require_total(g, c)
    v = kernels.first_starved_vertex(g.indptr, g.indices, c.array, int(r))
    return None if v < 0 else _starved(g, c, v, r)


def proper_violations(g: Graph, c: Colouring) -> list[ImproperEdge]:
    """Every monochromatic edge, for diagnostics."""
    _require_total(g, c)
    edges = g.edge_array()
    col = c.array
    bad = edges[col[edges[:, 0]] == col[edges[:, 1]]]
    return [ImproperEdge(int(u), int(v)) for u, v in bad.tolist()]


def dynamic_violations(g: Graph, c: Colouring, r: int) -> list[StarvedVertex]:
    _require_total(g, c)
    out = []
    for v in range(g.vertex_count):
        nbrs = g.neighbours(v)
        if len(set(c.array[nbrs].tolist())) < min(r, len(nbrs)):
            out.append(_starved(g, c, v, r))
    return out


def colours_used(c: Colouring) -> int:
    return len(np.unique(c.array))


# --- witnesses -----------------------------------------------------------


def witness_proper(lg: LabeledGraph) -> Colouring:
    """Part vertices take their part index; selectors the smallest other colour."""
    n = lg.params.n
    if n < 2:
        raise WitnessUnavailable("needs n >= 2")
    p = lg.params
    colours = np.empty(p.vertex_count, dtype=np.int64)
    part_i = np.arange(p.part_vertex_count) // p.N % n + 1
    colours[: p.part_vertex_count] = part_i
    sel_i = np.arange(p.n * p.selectors_per_part) // p.selectors_per_part + 1
    colours[p.part_vertex_count :] = np.where(sel_i == 1, 2, 1)
    return Colouring(colours, n)


def witness_r_dynamic(lg: LabeledGraph, r: int | None = None) -> Colouring:
    """``rn``-colouring: rows ``j < r`` of part ``i`` take ``nj + i``, later rows
    take ``i``, and a selector of part ``i`` takes the smallest colour in
    ``[rn]`` not congruent to ``i`` mod ``n``."""
    p = lg.params
    r = p.r if r is None else r
    n, N = p.n, p.N
    if N < r:
        raise WitnessUnavailable(f"rows per part N={N} < r={r}: selectors cannot see r colours")
    colours = np.empty(p.vertex_count, dtype=np.int64)
    idx = np.arange(p.part_vertex_count)
    j = idx % N + 1
    i = idx // N % n + 1
    colours[: p.part_vertex_count] = np.where(j < r, n * j + i, i)
    sel_i = np.arange(n * p.selectors_per_part) // p.selectors_per_part + 1
    # colours 1..n represent the residues; residue of i is i itself
    colours[p.part_vertex_count :] = np.where(sel_i == 1, 2, 1)
    return Colouring(colours, r * n)


def witness_total_dominating(lg: LabeledGraph):
    """All part vertices: returns ``(D, colouring of G[D] by part index, K_n in block 1)``.

    The colouring is indexed by the induced subgraph's vertex order, which for
    ``D`` = the part vertices coincides with the original indices.
    """
    p = lg.params
    members = frozenset(range(p.part_vertex_count))
    colouring = Colouring(np.arange(p.part_vertex_count) // p.N % p.n + 1, p.n)
    clique = find_clique(lg.graph, [lg.index_of(Part(i, 1, 1)) for i in range(1, p.n + 1)], p.n)
    assert clique is not None
    return members, colouring, clique


def selector_colour_pool(lg: LabeledGraph, c: Colouring, selector: Selector) -> frozenset:
    x = lg.index_of(selector)
    return frozenset(c.array[lg.graph.neighbours(x)].tolist())


# --- colouring file format --------------------------------------------------


def write_colouring(c: Colouring, path) -> None:
    Path(path).write_text(dumps_colouring(c), encoding="ascii")


def dumps_colouring(c: Colouring) -> str:
    lines = [f"c palette {c.palette_size}"]
    lines.extend(f"{v} {col}" for v, col in enumerate(c, 1))
    return "\n".join(lines) + "\n"


def read_colouring(path, vertex_count: int | None = None) -> Colouring:
    return loads_colouring(Path(path).read_text(encoding="ascii"), vertex_count)


def loads_colouring(text: str, vertex_count: int | None = None) -> Colouring:
    palette = None
    mapping: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts:
            continue
        if parts[0] == "c":
            if len(parts) >= 3 and parts[1] == "palette":
                try:
                    palette = int(parts[2])
                except ValueError:
                    raise FormatError(f"line {lineno}: bad palette line") from None
            continue
        if len(parts) != 2:
            raise FormatError(f"line {lineno}: expected '<vertex> <colour>', got {raw!r}")
        try:
            v, col = int(parts[0]), int(parts[1])
        except ValueError:
            raise FormatError(f"line {lineno}: expected integers, got {raw!r}") from None
        if v < 1 or (vertex_count is not None and v > vertex_count):
            raise FormatError(f"line {lineno}: vertex {v} out of range")
        if v - 1 in mapping:
            raise FormatError(f"line {lineno}: vertex {v} coloured twice")
        mapping[v - 1] = col
    if palette is None:
        raise FormatError("missing 'c palette <k>' header")
    count = vertex_count if vertex_count is not None else len(mapping)
    try:
        return Colouring.from_mapping(mapping, count, palette)
    except ColouringError as exc:
        raise FormatError(str(exc)) from None
