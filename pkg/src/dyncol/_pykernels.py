"""Pure-Python kernels.  ``_ckernels.pyx`` implements the same functions."""

BACKEND = "python"


def first_improper_edge(indptr, indices, colours):
    """Lexicographically first edge ``(u, v)``, ``u < v``, with equal colours, or None."""
    indptr = indptr.tolist()
    indices = indices.tolist()
    colours = colours.tolist()
    for u in range(len(indptr) - 1):
        cu = colours[u]
        for p in range(indptr[u], indptr[u + 1]):
            v = indices[p]
            if v > u and colours[v] == cu:
                return u, v
    return None


def first_starved_vertex(indptr, indices, colours, r):
    """Smallest vertex seeing fewer than ``min(r, deg)`` colours on its neighbours, or -1."""
    indptr = indptr.tolist()
    indices = indices.tolist()
    colours = colours.tolist()
    for v in range(len(indptr) - 1):
        lo, hi = indptr[v], indptr[v + 1]
        need = min(r, hi - lo)
        if need <= 1:
            continue
        seen = set()
        for p in range(lo, hi):
            seen.add(colours[indices[p]])
            if len(seen) >= need:
                break
        if len(seen) < need:
            return v
    return -1


def _closing_lists(masks):
    n = len(masks)
    closes = [[] for _ in range(n)]
    for w, mask in enumerate(masks):
        if mask:
            closes[mask.bit_length() - 1].append(w)
    return closes


def brute_force_colouring(masks, k, r):
    """Exhaustive search for a proper colouring with colours ``1..k`` that is
    ``r``-dynamic, over colourings up to relabelling of colour classes.

    ``masks[v]`` is the neighbourhood bitmask of ``v``.  Vertices are coloured
    in index order; a partial assignment is abandoned as soon as an edge is
    monochromatic or a vertex whose whole neighbourhood is coloured sees too
    few colours.  Returns the colour list or None.
    """
    n = len(masks)
    if n == 0:
        return []
    closes = _closing_lists(masks)
    need = [min(r, bin(mask).count("1")) for mask in masks]
    colour = [0] * n
    nbrs = [[u for u in range(n) if mask >> u & 1] for mask in masks]

    def place(v, used):
        if v == n:
            return True
        earlier = [colour[u] for u in nbrs[v] if u < v]
        for c in range(1, min(used + 1, k) + 1):
            if c in earlier:
                continue
            colour[v] = c
            ok = True
            for w in closes[v]:
                if need[w] > 1 and len({colour[u] for u in nbrs[w]}) < need[w]:
                    ok = False
                    break
            if ok and place(v + 1, max(used, c)):
                return True
        colour[v] = 0
        return False

    return list(colour) if place(0, 0) else None


def brute_force_gamma(masks, t):
    """Smallest-bitmask total dominating set whose induced subgraph is
    ``t``-colourable, as ``(members, colours)``, or None."""
    n = len(masks)
    for D in range(1, 1 << n):
        if any(not (mask & D) for mask in masks):
            continue
        members = [v for v in range(n) if D >> v & 1]
        pos = {v: p for p, v in enumerate(members)}
        sub = [
            sum(1 << pos[u] for u in range(n) if masks[v] >> u & 1 and D >> u & 1)
            for v in members
        ]
        colours = brute_force_colouring(sub, t, 1)
        if colours is not None:
            return members, colours
    return None
