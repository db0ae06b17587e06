# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: truncated BFS, per-node component reach, Pi rule sweep."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64
ctypedef cnp.int8_t i8
ctypedef cnp.int16_t i16


def bfs_ball(i64[::1] indptr, i64[::1] indices, Py_ssize_t src, Py_ssize_t maxr):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef cnp.ndarray[i64, ndim=1] dist_arr = np.full(n, -1, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] order_arr = np.empty(n, dtype=np.int64)
    cdef i64[::1] dist = dist_arr
    cdef i64[::1] order = order_arr
    cdef Py_ssize_t head = 0, tail = 0, x, y, k
    dist[src] = 0
    order[tail] = src
    tail += 1
    while head < tail:
        x = order[head]
        head += 1
        if maxr >= 0 and dist[x] >= maxr:
            continue
        for k in range(indptr[x], indptr[x + 1]):
            y = indices[k]
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                order[tail] = y
                tail += 1
    found = order_arr[:tail].copy()
    return found, dist_arr[found]


def component_reach(i64[::1] indptr, i64[::1] indices, i64[::1] comp, i64[::1] comp_size,
                    i64[::1] sources):
    """For each source, the largest hop distance in the whole graph to a node of its own block."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t ns = sources.shape[0]
    cdef cnp.ndarray[i64, ndim=1] out_arr = np.full(ns, -1, dtype=np.int64)
    cdef i64[::1] out = out_arr
    cdef cnp.ndarray[i64, ndim=1] stamp_arr = np.full(n, -1, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] dist_arr = np.zeros(n, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] queue_arr = np.empty(n, dtype=np.int64)
    cdef i64[::1] stamp = stamp_arr
    cdef i64[::1] dist = dist_arr
    cdef i64[::1] queue = queue_arr
    cdef Py_ssize_t s, u, head, tail, x, y, k, c, need, best
    for s in range(ns):
        u = sources[s]
        c = comp[u]
        need = comp_size[c] - 1
        best = 0
        stamp[u] = s
        dist[u] = 0
        head = 0
        tail = 0
        queue[tail] = u
        tail += 1
        while head < tail and need > 0:
            x = queue[head]
            head += 1
            for k in range(indptr[x], indptr[x + 1]):
                y = indices[k]
                if stamp[y] != s:
                    stamp[y] = s
                    dist[y] = dist[x] + 1
                    queue[tail] = y
                    tail += 1
                    if comp[y] == c:
                        need -= 1
                        best = dist[y]
                        if need == 0:
                            break
        out[s] = best if need == 0 else -1
    return out_arr


def pi_rule_masks(i8[::1] out, i8[::1] is_grid, i8[::1] bit_in, i64[::1] right,
                  i64[::1] chl, i64[::1] chr_, i64[::1] par):
    """Bitmask per node of violated Pi rules 2..7 (bit r) plus bit 0 for out-of-universe."""
    cdef Py_ssize_t n = out.shape[0]
    cdef cnp.ndarray[i16, ndim=1] mask_arr = np.zeros(n, dtype=np.int16)
    cdef i16[::1] mask = mask_arr
    cdef Py_ssize_t u, v, z
    cdef int o, ov, oz, b, x, xv, xz
    for u in range(n):
        o = out[u]
        if o <= 0 or o > 15:
            mask[u] |= 1
            continue
        if o <= 9:
            continue
        if o <= 13:
            b = (o - 10) >> 1
            x = (o - 10) & 1
            if not is_grid[u]:
                mask[u] |= 1 << 5
            v = right[u]
            if v >= 0:
                ov = out[v]
                if not (1 <= ov <= 9 or (10 <= ov <= 13 and ((ov - 10) >> 1) == b)):
                    mask[u] |= 1 << 3
            else:
                if (x == 1) != (bit_in[u] == b):
                    mask[u] |= 1 << 4
        else:
            x = o - 14
            if is_grid[u]:
                mask[u] |= 1 << 2
            v = chl[u]
            z = chr_[u]
            if v < 0 or z < 0:
                mask[u] |= 1 << 6
            else:
                ov = out[v]
                oz = out[z]
                if ov >= 14:
                    xv = ov - 14
                elif 10 <= ov <= 13:
                    xv = (ov - 10) & 1
                else:
                    xv = -1
                if oz >= 14:
                    xz = oz - 14
                elif 10 <= oz <= 13:
                    xz = (oz - 10) & 1
                else:
                    xz = -1
                if xv < 0 or xz < 0 or (x == 1) != (xv == 1 or xz == 1):
                    mask[u] |= 1 << 6
            if par[u] < 0 and x != 1:
                mask[u] |= 1 << 7
    return mask_arr
