# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contracts as ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int32_t, int64_t, uint64_t

cnp.import_array()

BACKEND = "cython"


def first_improper_edge(const int64_t[::1] indptr, const int32_t[::1] indices, const int32_t[::1] colours):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t u, p
    cdef int32_t v, cu
    for u in range(n):
        cu = colours[u]
        for p in range(indptr[u], indptr[u + 1]):
            v = indices[p]
            if v > u and colours[v] == cu:
                return int(u), int(v)
    return None


def first_starved_vertex(const int64_t[::1] indptr, const int32_t[::1] indices, const int32_t[::1] colours, int r):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t v, p
    cdef int64_t lo, hi
    cdef int need, seen, c, maxc = 0
    for v in range(n):
        if colours[v] > maxc:
            maxc = colours[v]
    cdef int64_t[::1] stamp = np.full(maxc + 1, -1, dtype=np.int64)
    for v in range(n):
        lo = indptr[v]
        hi = indptr[v + 1]
        need = r if r < hi - lo else <int>(hi - lo)
        if need <= 1:
            continue
        seen = 0
        for p in range(lo, hi):
            c = colours[indices[p]]
            if stamp[c] != v:
                stamp[c] = v
                seen += 1
                if seen >= need:
                    break
        if seen < need:
            return int(v)
    return -1


cdef struct Search:
    int n
    int k
    const uint64_t* masks
    const int* need
    const int* close_ptr
    const int* close_list
    int* colour


cdef bint _place(Search* s, int v, int used):
    cdef int c, w, u, q, top, distinct
    cdef uint64_t mask, seen
    cdef bint ok
    if v == s.n:
        return True
    top = used + 1 if used + 1 < s.k else s.k
    for c in range(1, top + 1):
        ok = True
        mask = s.masks[v]
        for u in range(v):
            if (mask >> u) & 1 and s.colour[u] == c:
                ok = False
                break
        if not ok:
            continue
        s.colour[v] = c
        for q in range(s.close_ptr[v], s.close_ptr[v + 1]):
            w = s.close_list[q]
            if s.need[w] <= 1:
                continue
            seen = 0
            mask = s.masks[w]
            for u in range(s.n):
                if (mask >> u) & 1:
                    seen |= (<uint64_t>1) << s.colour[u]
            distinct = 0
            while seen:
                seen &= seen - 1
                distinct += 1
            if distinct < s.need[w]:
                ok = False
                break
        if ok and _place(s, v + 1, used if used > c else c):
            return True
    s.colour[v] = 0
    return False


cdef object _colour(list masks, int k, int r):
    cdef int n = len(masks)
    cdef int v, w, deg, top
    if n == 0:
        return []
    if n > 63:
        raise ValueError("brute-force kernels take at most 63 vertices")
    if k > n:
        k = n
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] m = np.array(masks, dtype=np.uint64)
    cdef cnp.ndarray[int, ndim=1] need = np.zeros(n, dtype=np.intc)
    cdef cnp.ndarray[int, ndim=1] colour = np.zeros(n, dtype=np.intc)
    cdef cnp.ndarray[int, ndim=1] close_ptr = np.zeros(n + 1, dtype=np.intc)
    cdef cnp.ndarray[int, ndim=1] close_list = np.zeros(n, dtype=np.intc)
    buckets = [[] for _ in range(n)]
    for w in range(n):
        mask = masks[w]
        deg = bin(mask).count("1")
        need[w] = r if r < deg else deg
        if mask:
            top = mask.bit_length() - 1
            buckets[top].append(w)
    pos = 0
    for v in range(n):
        close_ptr[v] = pos
        for w in buckets[v]:
            close_list[pos] = w
            pos += 1
    close_ptr[n] = pos
    cdef Search s
    s.n = n
    s.k = k
    s.masks = <const uint64_t*> m.data
    s.need = <const int*> need.data
    s.close_ptr = <const int*> close_ptr.data
    s.close_list = <const int*> close_list.data
    s.colour = <int*> colour.data
    if _place(&s, 0, 0):
        return colour.tolist()
    return None


def brute_force_colouring(masks, int k, int r):
    return _colour(list(masks), k, r)


def brute_force_gamma(masks, int t):
    masks = list(masks)
    cdef int n = len(masks)
    cdef int v, u, p
    cdef uint64_t D, limit, sub
    if n > 63:
        raise ValueError("brute-force kernels take at most 63 vertices")
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] m = np.array(masks, dtype=np.uint64)
    cdef uint64_t* mp = <uint64_t*> m.data
    cdef bint dominated
    limit = (<uint64_t>1) << n
    D = 1
    while D < limit:
        dominated = True
        for v in range(n):
            if not (mp[v] & D):
                dominated = False
                break
        if dominated:
            members = [v for v in range(n) if (D >> v) & 1]
            sub_masks = []
            for v in members:
                sub = 0
                for p, u in enumerate(members):
                    if (mp[v] >> u) & 1:
                        sub |= (<uint64_t>1) << p
                sub_masks.append(int(sub))
            colours = _colour(sub_masks, t, 1)
            if colours is not None:
                return members, colours
        D += 1
    return None
