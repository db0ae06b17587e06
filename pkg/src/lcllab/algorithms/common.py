from __future__ import annotations

import math

from .. import labels as lb

# rules are evaluated within this many hops, so a component is only decided
# once every member is at least this far from the edge of the view
MARGIN = 4


def log2_ceil(n: int) -> int:
    return max(1, math.ceil(math.log2(max(n, 2))))


def default_locality(n: int) -> int:
    return 4 * log2_ceil(n) + 8


def is_tree_edge(lu: str, lv: str) -> bool:
    tu = lb.label_type(lu)
    return tu == lb.label_type(lv) and lb.TREE in tu


def any_edge(lu: str, lv: str) -> bool:
    return True


def bfs_in_view(view, src: int, r: int) -> dict[int, int]:
    """Distances from ``src`` (up to ``r``) using only edges visible in ``view``."""
    dist = {src: 0}
    frontier = [src]
    for d in range(1, r + 1):
        nxt = []
        for x in frontier:
            for y, _, _ in view.neighbors(x):
                if y not in dist:
                    dist[y] = d
                    nxt.append(y)
        frontier = nxt
        if not frontier:
            break
    return dist


def closed_component(ctx, center: int, offset: int, keep_edge, margin: int = MARGIN):
    """Grow the view until the ``keep_edge`` component of ``center`` is decided.

    ``center`` sits ``offset`` hops from the node running the algorithm.
    Returns ``(members, view, r, closed)`` where ``r`` is the smallest radius
    around ``center`` at which every member lies within ``r - margin``; if the
    locality cap is hit first, ``closed`` is False and ``members`` is partial.
    """
    members, view, r = {center}, None, margin
    for r in range(margin, ctx.cap - offset + 1):
        view = ctx.view(offset + r)
        dist = view.distances if offset == 0 else bfs_in_view(view, center, r)
        members = {center}
        stack = [center]
        closed = True
        while stack:
            x = stack.pop()
            if dist[x] > r - margin:
                closed = False
                break
            for y, lx, ly in view.neighbors(x):
                if y not in members and keep_edge(lx, ly):
                    members.add(y)
                    stack.append(y)
        if closed:
            return members, view, r, True
    if view is None:
        view = ctx.view(ctx.cap)
    return members, view, r, False
