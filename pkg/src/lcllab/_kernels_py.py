"""Pure-Python versions of the compiled kernels; same signatures and results."""

from __future__ import annotations

from collections import deque

import numpy as np


def bfs_ball(indptr, indices, src, maxr):
    n = len(indptr) - 1
    dist = np.full(n, -1, dtype=np.int64)
    dist[src] = 0
    order = [src]
    queue = deque([src])
    ip = indptr.tolist()
    ind = indices.tolist()
    while queue:
        x = queue.popleft()
        dx = dist[x]
        if maxr >= 0 and dx >= maxr:
            continue
        for k in range(ip[x], ip[x + 1]):
            y = ind[k]
            if dist[y] < 0:
                dist[y] = dx + 1
                order.append(y)
                queue.append(y)
    found = np.array(order, dtype=np.int64)
    return found, dist[found]


def component_reach(indptr, indices, comp, comp_size, sources):
    ip = indptr.tolist()
    ind = indices.tolist()
    cp = comp.tolist()
    out = np.full(len(sources), -1, dtype=np.int64)
    for s, u in enumerate(sources.tolist()):
        c = cp[u]
        need = int(comp_size[c]) - 1
        best = 0
        dist = {u: 0}
        queue = deque([u])
        while queue and need > 0:
            x = queue.popleft()
            for k in range(ip[x], ip[x + 1]):
                y = ind[k]
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
                    if cp[y] == c:
                        need -= 1
                        best = dist[y]
                        if need == 0:
                            break
        out[s] = best if need == 0 else -1
    return out


def pi_rule_masks(out, is_grid, bit_in, right, chl, chr_, par):
    out = out.astype(np.int64)
    n = len(out)
    mask = np.zeros(n, dtype=np.int16)
    bad = (out <= 0) | (out > 15)
    mask[bad] |= 1
    is_pair = (out >= 10) & (out <= 13)
    is_yn = out >= 14
    is_bg = (out >= 1) & (out <= 9)
    grid = is_grid.astype(bool)

    def x_of(codes):
        x = np.full(len(codes), -1, dtype=np.int64)
        pr = (codes >= 10) & (codes <= 13)
        x[pr] = (codes[pr] - 10) & 1
        yn = (codes >= 14) & (codes <= 15)
        x[yn] = codes[yn] - 14
        return x

    b = np.where(is_pair, (out - 10) >> 1, -1)
    x = x_of(out)

    mask[is_pair & ~grid] |= 1 << 5
    mask[is_yn & grid] |= 1 << 2

    has_right = right >= 0
    rv = np.where(has_right, right, 0)
    o_right = out[rv]
    ok3 = ((o_right >= 1) & (o_right <= 9)) | (
        (o_right >= 10) & (o_right <= 13) & (((o_right - 10) >> 1) == b))
    mask[is_pair & has_right & ~ok3] |= 1 << 3
    ok4 = (x == 1) == (bit_in.astype(np.int64) == b)
    mask[is_pair & ~has_right & ~ok4] |= 1 << 4

    kids = (chl >= 0) & (chr_ >= 0)
    xv = x_of(out[np.where(kids, chl, 0)])
    xz = x_of(out[np.where(kids, chr_, 0)])
    ok6 = kids & (xv >= 0) & (xz >= 0) & ((x == 1) == ((xv == 1) | (xz == 1)))
    mask[is_yn & ~ok6] |= 1 << 6
    mask[is_yn & (par < 0) & (x != 1)] |= 1 << 7
    mask[is_bg] = 0
    mask[bad] = 1
    return mask
