"""Pigeonhole refuters over the labelled construction.

``refute_dynamic`` takes a proper colouring with at most ``rn - 1`` colours
and returns a selector vertex whose whole neighbourhood lies in a pool of at
most ``r - 1`` colours.  ``refute_domination`` takes a vertex set and
returns either a selector with no neighbour in the set or an ``n``-clique
inside the set.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from math import comb, ceil
from pathlib import Path
from typing import Iterable, Union

from .colouring import Colouring, colours_used, is_proper
from .construction import LabeledGraph, Selector
from .errors import NoWitnessFound, PreconditionError, TooManyColours
from .graph import is_clique, validate_vertex_set


@dataclass(frozen=True)
class BlockChoice:
    k: int
    i: int
    colours: tuple[int, ...]  # colour set of part i in block k, before padding
    pool: tuple[int, ...]  # padded to exactly r - 1 colours


@dataclass(frozen=True)
class DynamicRefutation:
    selector: Selector
    colour_pool: frozenset
    block_table: tuple[BlockChoice, ...]
    histogram: dict

    def chosen_blocks(self) -> tuple[BlockChoice, ...]:
        X = set(self.selector.X)
        return tuple(b for b in self.block_table if b.k in X)


@dataclass(frozen=True)
class Undominated:
    selector: Selector
    block_table: tuple[int, ...]  # i_k for k = 1..m


@dataclass(frozen=True)
class CliqueWitness:
    block: int
    members: tuple[int, ...]


DominationOutcome = Union[Undominated, CliqueWitness]


def _colour_universe(c: Colouring, size: int) -> list[int]:
    """The colours in use, topped up with the smallest unused colours to ``size``."""
    used = sorted(set(c))
    extra = []
    candidate = 1
    present = set(used)
    while len(used) + len(extra) < size:
        if candidate not in present:
            extra.append(candidate)
        candidate += 1
    return sorted(used + extra)


def _pad(colours: set[int], universe: list[int], width: int) -> tuple[int, ...]:
    pool = sorted(colours)
    for col in universe:
        if len(pool) >= width:
            break
        if col not in colours:
            pool.append(col)
    return tuple(sorted(pool))


def block_table(lg: LabeledGraph, c: Colouring, r: int) -> list[BlockChoice]:
    """Step one of the refutation: for each block the sparsest part and its pool."""
    p = lg.params
    n = p.n
    universe = _colour_universe(c, r * n - 1)
    arr = c.array
    table = []
    for k in range(1, p.m + 1):
        sets = [set(arr[lg.part_row(i, k).start : lg.part_row(i, k).stop].tolist()) for i in range(1, n + 1)]
        for a in range(n):
            for b in range(a + 1, n):
                if sets[a] & sets[b]:
                    raise PreconditionError(f"block {k}: parts {a + 1} and {b + 1} share a colour")
        i_k = next((i for i in range(n) if len(sets[i]) <= r - 1), None)
        if i_k is None:
            raise PreconditionError(f"block {k}: every part uses at least r colours")
        table.append(BlockChoice(k, i_k + 1, tuple(sorted(sets[i_k])), _pad(sets[i_k], universe, r - 1)))
    return table


def _full_buckets(buckets: dict, n: int) -> list:
    """Buckets holding at least n blocks as ``(first n blocks, key)``, smallest first."""
    return sorted((tuple(blocks[:n]), key) for key, blocks in buckets.items() if len(blocks) >= n)


def refute_dynamic(lg: LabeledGraph, c: Colouring, r: int | None = None) -> DynamicRefutation:
    p = lg.params if r is None else lg.params.with_r(r)
    r, n = p.r, p.n
    if r < 2:
        raise PreconditionError("dynamism level r must be at least 2")
    violation = is_proper(lg.graph, c)
    if violation is not None:
        raise PreconditionError(f"colouring is not proper: {violation}")
    used = colours_used(c)
    if used > r * n - 1:
        raise TooManyColours(used, r * n - 1)

    table = block_table(lg, c, r)
    buckets: dict[tuple, list[int]] = defaultdict(list)
    for choice in table:
        buckets[(choice.i, choice.pool)].append(choice.k)
    histogram = {key: len(blocks) for key, blocks in sorted(buckets.items())}

    bucket_bound = n * comb(r * n - 1, r - 1)
    assert len(buckets) <= bucket_bound, "more buckets than (part, pool) pairs"
    assert max(histogram.values()) >= ceil(p.m / bucket_bound)

    for X, (i, pool) in _full_buckets(buckets, n):
        ref = DynamicRefutation(Selector(i, X), frozenset(pool), tuple(table), histogram)
        # only fails when the selector degree nN is below r
        if check_dynamic_refutation(lg, c, ref, r):
            return ref
    raise NoWitnessFound(
        f"no (part, pool) bucket reaches {n} blocks (m={p.m}, pigeonhole_ok={p.pigeonhole_ok})",
        histogram,
    )


def refute_domination(lg: LabeledGraph, s: Iterable[int]) -> DominationOutcome:
    p = lg.params
    members = validate_vertex_set(lg.graph, s)
    row_of: list[int] = []
    for k in range(1, p.m + 1):
        missing = None
        hits = []
        for i in range(1, p.n + 1):
            row = lg.part_row(i, k)
            hit = next((x for x in row if x in members), None)
            if hit is None:
                missing = i
                break
            hits.append(hit)
        if missing is None:
            return CliqueWitness(k, tuple(hits))
        row_of.append(missing)

    buckets: dict[int, list[int]] = defaultdict(list)
    for k, i in enumerate(row_of, 1):
        buckets[i].append(k)
    full = _full_buckets(buckets, p.n)
    if not full:
        raise NoWitnessFound(
            f"no part index repeats in {p.n} blocks (m={p.m}, domination_ok={p.domination_ok})",
            {i: len(b) for i, b in sorted(buckets.items())},
        )
    X, i = full[0]
    return Undominated(Selector(i, X), tuple(row_of))


# --- independent certificate checks -------------------------------------


def check_dynamic_refutation(lg: LabeledGraph, c: Colouring, ref: DynamicRefutation, r: int) -> bool:
    """Re-derive the neighbourhood colours of the selector from scratch."""
    x = lg.index_of(ref.selector)
    seen = {c[u] for u in lg.graph.neighbour_list(x)}
    degree = len(lg.graph.neighbour_list(x))
    return seen <= ref.colour_pool and len(ref.colour_pool) <= r - 1 and len(seen) < min(r, degree)


def check_domination_outcome(lg: LabeledGraph, s: Iterable[int], outcome: DominationOutcome) -> bool:
    members = set(s)
    if isinstance(outcome, Undominated):
        x = lg.index_of(outcome.selector)
        return not members.intersection(lg.graph.neighbour_list(x))
    block = lg.block(outcome.block)
    return (
        len(outcome.members) == lg.params.n
        and all(v in members and v in block for v in outcome.members)
        and is_clique(lg.graph, outcome.members)
    )


# --- certificate serialisation ---------------------------------------------


def _label_json(label) -> dict:
    if isinstance(label, Selector):
        return {"type": "selector", "i": label.i, "X": list(label.X)}
    return {"type": "part", "i": label.i, "j": label.j, "k": label.k}


def dynamic_certificate(ref: DynamicRefutation) -> tuple[str, dict]:
    lines = [
        "dynamic-refutation",
        f"selector {ref.selector.i} {','.join(map(str, ref.selector.X))}",
        f"pool {','.join(map(str, sorted(ref.colour_pool)))}",
    ]
    for b in ref.chosen_blocks():
        lines.append(f"block {b.k} part {b.i} colours {','.join(map(str, b.colours))}")
    data = {
        "kind": "dynamic",
        "selector": _label_json(ref.selector),
        "colour_pool": sorted(ref.colour_pool),
        "blocks": [
            {"k": b.k, "i": b.i, "colours": list(b.colours), "pool": list(b.pool)}
            for b in ref.block_table
        ],
        "histogram": [
            {"i": i, "pool": list(pool), "blocks": count} for (i, pool), count in ref.histogram.items()
        ],
    }
    return "\n".join(lines) + "\n", data


def domination_certificate(lg: LabeledGraph, outcome: DominationOutcome) -> tuple[str, dict]:
    if isinstance(outcome, Undominated):
        X = outcome.selector.X
        lines = [
            "domination-refutation undominated",
            f"selector {outcome.selector.i} {','.join(map(str, X))}",
        ]
        lines += [f"block {k} empty-part {outcome.block_table[k - 1]}" for k in X]
        data = {
            "kind": "undominated",
            "selector": _label_json(outcome.selector),
            "block_table": list(outcome.block_table),
        }
    else:
        labels = [lg.label_of(v) for v in outcome.members]
        lines = [f"domination-refutation clique block {outcome.block}"]
        lines += [f"member {v + 1} {lab}" for v, lab in zip(outcome.members, labels)]
        data = {
            "kind": "clique",
            "block": outcome.block,
            "members": [v + 1 for v in outcome.members],
            "labels": [_label_json(lab) for lab in labels],
        }
    return "\n".join(lines) + "\n", data


def write_certificate(text: str, data: dict, path) -> tuple[Path, Path]:
    path = Path(path)
    sidecar = path.with_name(path.name + ".json")
    path.write_text(text, encoding="ascii")
    sidecar.write_text(json.dumps(data, indent=1, sort_keys=True) + "\n", encoding="ascii")
    return path, sidecar


def part_label_rows(lg: LabeledGraph, i: int) -> list[int]:
    """All part vertices with part index ``i`` (every block, every row)."""
    return [x for k in range(1, lg.params.m + 1) for x in lg.part_row(i, k)]

