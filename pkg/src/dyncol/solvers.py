"""Exact chi, chi_r and gamma.

Brute-force oracles enumerate colourings directly and are kept free of any
heuristic; the production routines (DSATUR branch and bound, a backtracking
r-dynamic search, and the CNF route) are checked against them.
"""

from __future__ import annotations

import heapq
import sys
from typing import Iterable, NamedTuple

from . import kernels
from .cnf import GammaWitness, decode_model, encode_gamma_cnf, encode_r_dynamic_cnf
from .colouring import Colouring, is_proper, is_r_dynamic
from .errors import CapacityError, PreconditionError, SolverUnknown
from .graph import Graph, greedy_clique, induced_subgraph, validate_vertex_set
from .sat import SAT, UNSAT, solve

BRUTE_FORCE_CAP = 14
BACKTRACK_CAP = 40


class Optimum(NamedTuple):
    value: int
    witness: object
    trace: tuple  # (k, status, method) for every decision taken


# --- brute-force oracles ------------------------------------------------------


def _check_cap(g: Graph, cap: int) -> None:
    if g.vertex_count > cap:
        raise CapacityError("vertices", g.vertex_count, cap)


def brute_force_colourable(g: Graph, k: int, r: int = 1, *, cap: int = BRUTE_FORCE_CAP):
    """A proper r-dynamic colouring from ``[k]`` found by exhaustive search, or None."""
    _check_cap(g, cap)
    found = kernels.brute_force_colouring(g.adjacency_masks(), k, r)
    return None if found is None else Colouring(found, k)


def brute_force_chromatic(g: Graph, r: int = 1, *, cap: int = BRUTE_FORCE_CAP) -> int:
    """Least palette admitting a proper (``r = 1``) or r-dynamic colouring."""
    _check_cap(g, cap)
    masks = g.adjacency_masks()
    for k in range(0 if g.vertex_count == 0 else 1, g.vertex_count + 1):
        if kernels.brute_force_colouring(masks, k, r) is not None:
            return k
    raise AssertionError("the all-distinct colouring always qualifies")


def brute_force_gamma(g: Graph, *, cap: int = BRUTE_FORCE_CAP) -> int | None:
    """Minimum chi(G[D]) over total dominating sets D; None if none exists."""
    _check_cap(g, cap)
    if g.vertex_count == 0 or g.degrees().min() == 0:
        return None
    masks = g.adjacency_masks()
    for t in range(1, g.vertex_count + 1):
        if kernels.brute_force_gamma(masks, t) is not None:
            return t
    return None


# --- total domination ---------------------------------------------------------


def is_total_dominating(g: Graph, s: Iterable[int]) -> int | None:
    """None iff every vertex has a neighbour in ``s``; else the smallest that does not."""
    members = validate_vertex_set(g, s)
    mark = bytearray(g.vertex_count)
    for v in members:
        mark[v] = 1
    for v in range(g.vertex_count):
        if not any(mark[u] for u in g.neighbour_list(v)):
            return v
    return None


# --- chromatic number: DSATUR branch and bound ----------------------------------


def dsatur_greedy(g: Graph) -> list[int]:
    n = g.vertex_count
    nbrs = [g.neighbour_list(v) for v in range(n)]
    colour = [0] * n
    seen: list[set[int]] = [set() for _ in range(n)]
    heap = [(0, -len(nbrs[v]), v) for v in range(n)]
    heapq.heapify(heap)
    while heap:
        neg_sat, _, v = heapq.heappop(heap)
        if colour[v] or -neg_sat != len(seen[v]):
            continue
        c = 1
        while c in seen[v]:
            c += 1
        colour[v] = c
        for u in nbrs[v]:
            if not colour[u] and c not in seen[u]:
                seen[u].add(c)
                heapq.heappush(heap, (-len(seen[u]), -len(nbrs[u]), u))
    return colour


def chromatic_number(g: Graph, *, node_budget: int = 2_000_000) -> Optimum:
    """Exact chi by DSATUR branch and bound with a clique lower bound."""
    n = g.vertex_count
    if n == 0:
        return Optimum(0, Colouring([], 0), ())
    if g.edge_count == 0:
        return Optimum(1, Colouring([1] * n, 1), ())
    clique = greedy_clique(g)
    lower = len(clique)
    best = dsatur_greedy(g)
    best_k = max(best)
    if best_k == lower:
        return Optimum(best_k, Colouring(best, best_k), ((lower, "clique", "bound"),))

    nbrs = [g.neighbour_list(v) for v in range(n)]
    colour = [0] * n
    # count[v][c]: coloured neighbours of v with colour c
    count = [[0] * (n + 2) for _ in range(n)]
    sat = [0] * n
    nodes = 0
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * n + 100))

    for c, v in enumerate(clique, 1):
        colour[v] = c
        for u in nbrs[v]:
            if count[u][c] == 0:
                sat[u] += 1
            count[u][c] += 1

    def assign(v, c, delta):
        for u in nbrs[v]:
            before = count[u][c]
            count[u][c] = before + delta
            if delta > 0 and before == 0:
                sat[u] += 1
            elif delta < 0 and before == 1:
                sat[u] -= 1

    def search(coloured, used):
        nonlocal best, best_k, nodes
        if coloured == n:
            best = list(colour)
            best_k = used
            return
        nodes += 1
        if nodes > node_budget:
            raise SolverUnknown(lower, best_k, f"node budget {node_budget} exhausted")
        v = max(
            (u for u in range(n) if not colour[u]),
            key=lambda u: (sat[u], len(nbrs[u]), -u),
        )
        for c in range(1, min(used + 1, best_k - 1) + 1):
            if count[v][c]:
                continue
            colour[v] = c
            assign(v, c, 1)
            search(coloured + 1, max(used, c))
            assign(v, c, -1)
            colour[v] = 0
            if best_k == lower:
                return

    try:
        search(len(clique), len(clique))
    finally:
        sys.setrecursionlimit(limit)
    return Optimum(best_k, Colouring(best, best_k), ((lower, "clique", "bound"),))


# --- r-dynamic decisions ------------------------------------------------------


def backtrack_r_dynamic(g: Graph, r: int, k: int, *, node_budget: int = 2_000_000):
    """Backtracking search for a proper r-dynamic k-colouring (None if none).

    Vertices are taken in breadth-first order from a maximum-degree vertex so
    neighbourhoods close early; colours are introduced in increasing order.
    """
    n = g.vertex_count
    if n == 0:
        return Colouring([], k)
    nbrs = [g.neighbour_list(v) for v in range(n)]
    need = [min(r, len(a)) for a in nbrs]
    order: list[int] = []
    placed = [False] * n
    for root in sorted(range(n), key=lambda v: (-len(nbrs[v]), v)):
        if placed[root]:
            continue
        placed[root] = True
        queue = [root]
        while queue:
            v = queue.pop(0)
            order.append(v)
            for u in nbrs[v]:
                if not placed[u]:
                    placed[u] = True
                    queue.append(u)
    colour = [0] * n
    nodes = 0

    def feasible(w):
        if need[w] <= 1:
            return True
        cols = set()
        free = 0
        for u in nbrs[w]:
            if colour[u]:
                cols.add(colour[u])
            else:
                free += 1
        return len(cols) + free >= need[w]

    def search(pos, used):
        nonlocal nodes
        if pos == n:
            return True
        nodes += 1
        if nodes > node_budget:
            raise SolverUnknown(0, None, f"node budget {node_budget} exhausted")
        v = order[pos]
        blocked = {colour[u] for u in nbrs[v]}
        for c in range(1, min(used + 1, k) + 1):
            if c in blocked:
                continue
            colour[v] = c
            if all(feasible(w) for w in nbrs[v]):
                if search(pos + 1, max(used, c)):
                    return True
            colour[v] = 0
        return False

    return Colouring(colour, k) if search(0, 0) else None


def decide_r_dynamic(
    g: Graph,
    r: int,
    k: int,
    *,
    method: str = "auto",
    backend: str | None = None,
    timeout: float | None = None,
    symmetry=None,
):
    """Return ``(status, colouring or None, method)`` for r-dynamic k-colourability."""
    if method == "auto":
        method = "backtrack" if g.vertex_count <= BACKTRACK_CAP else "sat"
    if method == "backtrack":
        found = backtrack_r_dynamic(g, r, k)
        return (SAT, found, "backtrack") if found is not None else (UNSAT, None, "backtrack")
    if method == "brute-force":
        found = brute_force_colourable(g, k, r, cap=63)
        return (SAT, found, "brute-force") if found is not None else (UNSAT, None, "brute-force")
    clique = greedy_clique(g) if symmetry is None else list(symmetry)
    formula = encode_r_dynamic_cnf(g, r, k, symmetry=clique)
    result = solve(formula, backend=backend, timeout=timeout)
    label = f"sat[{result.solver}]"
    if result.status == SAT:
        c = decode_model(formula, result.model)
        assert is_proper(g, c) is None and is_r_dynamic(g, c, r) is None
        return SAT, c, label
    return result.status, None, label + (f" {result.reason}" if result.reason else "")


def r_dynamic_chromatic_number(
    g: Graph,
    r: int,
    *,
    method: str = "auto",
    backend: str | None = None,
    timeout: float | None = None,
    symmetry=None,
) -> Optimum:
    """Smallest k with a proper r-dynamic k-colouring, searching upward from chi."""
    n = g.vertex_count
    if n == 0:
        return Optimum(0, Colouring([], 0), ())
    k = chromatic_number(g).value
    trace = []
    while k <= n:
        status, found, how = decide_r_dynamic(
            g, r, k, method=method, backend=backend, timeout=timeout, symmetry=symmetry
        )
        trace.append((k, status, how))
        if status == SAT:
            return Optimum(k, found, tuple(trace))
        if status != UNSAT:
            raise SolverUnknown(k, n, how)
        k += 1
    raise AssertionError("the all-distinct colouring always qualifies")


# --- gamma --------------------------------------------------------------------


def check_gamma_witness(g: Graph, w: GammaWitness) -> bool:
    if is_total_dominating(g, w.members) is not None:
        return False
    sub, _ = induced_subgraph(g, w.members)
    return is_proper(sub, w.induced_colouring()) is None


def decide_gamma(g: Graph, t: int, *, backend=None, timeout=None, symmetry=True):
    formula = encode_gamma_cnf(g, t, symmetry=symmetry)
    result = solve(formula, backend=backend, timeout=timeout)
    label = f"sat[{result.solver}]"
    if result.status == SAT:
        w = decode_model(formula, result.model)
        assert check_gamma_witness(g, w)
        return SAT, w, label
    return result.status, None, label + (f" {result.reason}" if result.reason else "")


def gamma(g: Graph, *, backend=None, timeout=None, symmetry=True) -> Optimum:
    """Smallest t such that some total dominating set induces a t-colourable graph."""
    if g.vertex_count == 0 or g.degrees().min() == 0:
        raise PreconditionError("gamma needs a graph without isolated vertices")
    trace = []
    t = 2
    while True:
        status, w, how = decide_gamma(g, t, backend=backend, timeout=timeout, symmetry=symmetry)
        trace.append((t, status, how))
        if status == SAT:
            return Optimum(t, w, tuple(trace))
        if status != UNSAT:
            raise SolverUnknown(t, None, how)
        t += 1
