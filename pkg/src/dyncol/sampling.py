"""Random inputs for the refuters: solver-generated proper colourings and
vertex sets that miss a part in every block."""

from __future__ import annotations

import random
from typing import Iterator

from .cnf import CnfFormula, decode_model, encode_r_dynamic_cnf
from .colouring import Colouring
from .construction import LabeledGraph, Part
from .sat import SAT, solve


def sample_proper_colourings(
    lg: LabeledGraph,
    palette: int,
    count: int,
    *,
    seed: int = 0,
    backend: str | None = None,
    max_attempts: int | None = None,
) -> Iterator[Colouring]:
    """Yield up to ``count`` distinct proper colourings from ``[palette]``.

    Each attempt pins one random part vertex per block to a random colour and
    asks the SAT backend for a completion; unsatisfiable pins are skipped.
    """
    rng = random.Random(seed)
    p = lg.params
    base = encode_r_dynamic_cnf(lg.graph, 1, palette)
    x = base.block("x")
    seen: set[bytes] = set()
    attempts = 0
    limit = max_attempts if max_attempts is not None else 20 * count
    while len(seen) < count and attempts < limit:
        attempts += 1
        pins = []
        for k in range(1, p.m + 1):
            v = lg.index_of(Part(rng.randint(1, p.n), rng.randint(1, p.N), k))
            pins.append((x.var(v, rng.randrange(palette)),))
        formula = CnfFormula(
            base.kind, dict(base.params), base.variable_count, base.clauses + pins, base.variable_map
        )
        result = solve(formula, backend=backend)
        if result.status != SAT:
            continue
        c = decode_model(formula, result.model)
        key = c.array.tobytes()
        if key not in seen:
            seen.add(key)
            yield c


def sample_sparse_sets(lg: LabeledGraph, count: int, *, seed: int = 0) -> Iterator[frozenset]:
    """Random vertex sets that avoid at least one whole part row in every block."""
    rng = random.Random(seed)
    p = lg.params
    for _ in range(count):
        members = set()
        for k in range(1, p.m + 1):
            parts = list(range(1, p.n + 1))
            rng.shuffle(parts)
            kept = parts[: rng.randint(0, p.n - 1)]
            for i in kept:
                row = lg.part_row(i, k)
                members.update(x for x in row if rng.random() < 0.5)
        members.update(x for x in lg.selector_range if rng.random() < 0.1)
        yield frozenset(members)
