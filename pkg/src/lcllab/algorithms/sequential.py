"""Row-copying solvers for the sequential models.

Both reuse the bad-graph marking and then let a grid node copy the bit of a
row-mate that already committed, so a row stays constant as long as some
node of it was processed before.  Tree nodes read the committed answers of
the row ends below them, which works whenever tree nodes come after the
grid (as in every order the adversaries produce).
"""

from __future__ import annotations

from .. import labels as lb
from ..simulator.engine import NodeAlgorithm
from .bad_graph import BadGraphAnalysis, bad_graph_view
from .common import default_locality, log2_ceil
from .pi import CHILDREN, RIGHT

LEFT = "gridEdge:L"


def committed_bit(out) -> int | None:
    if out is None:
        return None
    for b in (0, 1):
        if out in (lb.pair(b, lb.YES), lb.pair(b, lb.NO)):
            return b
    return None


def row_end_output(b: int, view, u: int) -> str:
    if view.follow(u, [RIGHT]) is not None:
        return lb.pair(b, lb.YES)
    return lb.pair(b, lb.YES if b == lb.pi_bit(view.input(u)) else lb.NO)


def _marking(ctx) -> tuple[str, int]:
    out, _, _, r = bad_graph_view(ctx, ctx.node)
    return out, r


def _marking_table(g, cap) -> dict:
    a = BadGraphAnalysis.of(g, cap)
    return {u: ((a.outputs[u], a.radii[u]), a.radii[u]) for u in g.nodes}


def marking(ctx, batch: bool) -> tuple[str, int]:
    """Bad-graph output and radius at ``ctx.node``; ``batch`` precomputes the whole graph at once."""
    if batch:
        return ctx.memo("bad-graph", _marking, _marking_table)
    return ctx.memo("bad-graph-view", _marking)


def tree_answer(u: int, neighbors_of, output_of, input_of) -> str:
    """yes iff some committed grid leaf under ``u`` says yes (uncommitted row ends count as yes)."""
    stack, seen = [u], {u}
    while stack:
        x = stack.pop()
        if lb.is_grid_node(input_of(x)):
            out = output_of(x)
            if out is None or out.endswith(lb.YES):
                return lb.YES
            continue
        for y, lx, _ in neighbors_of(x):
            if lx in CHILDREN and y not in seen:
                seen.add(y)
                stack.append(y)
    return lb.NO


class SlocalRowGreedy(NodeAlgorithm):
    """SLOCAL: copy the nearest committed bit within ``reach`` row steps, else draw a fresh one."""

    name = "slocal-row-greedy"
    randomness = "private"

    def __init__(self, reach: int | None = None, batch: bool = True):
        self.reach = reach
        self.batch_marking = batch

    def locality(self, n):
        return default_locality(n)

    def _reach(self, n):
        return self.reach if self.reach is not None else log2_ceil(n)

    def sequential(self, ctx):
        u = ctx.node
        out, r = marking(ctx, self.batch_marking)
        if out != lb.BOT:
            return out
        k = min(self._reach(ctx.n or 2), ctx.cap)
        view = ctx.view(max(r, k))
        if not lb.is_grid_node(view.input(u)):
            return tree_answer(u, view.neighbors, view.output, view.input)
        b = None
        for j in range(1, k + 1):
            for side in (LEFT, RIGHT):
                if b is None:
                    nxt = view.follow(u, [side] * j)
                    if nxt is not None:
                        b = committed_bit(view.output(nxt))
            if b is not None:
                break
        if b is None:
            b = ctx.read_bit()
        return row_end_output(b, view, u)

    def compute(self, ctx):
        raise TypeError(f"{self.name} only runs in the SLOCAL engine")


class OnlineRowCopy(NodeAlgorithm):
    """Deterministic online solver: copy any committed bit on the revealed part of the row, else 0.

    ``radius`` overrides the reveal radius (by default the usual logarithmic one).
    """

    name = "online-row-copy"
    randomness = "none"

    def __init__(self, radius: int | None = None, batch: bool = True):
        self.radius = radius
        self.batch_marking = batch

    def locality(self, n):
        return self.radius if self.radius is not None else default_locality(n)

    def online(self, ctx):
        u = ctx.node
        tr = ctx.transcript
        out, r = marking(ctx, self.batch_marking)
        view = ctx.view(r)
        if out != lb.BOT:
            return out
        if not lb.is_grid_node(tr.input(u)):
            return tree_answer(u, tr.neighbors, tr.outputs.get, tr.input)
        b = None
        best = None
        for side in (LEFT, RIGHT):
            cur, d, seen = u, 0, {u}
            while True:
                cur = tr.port(cur, side) if cur in tr.known else None
                if cur is None or cur in seen:
                    break
                seen.add(cur)
                d += 1
                c = committed_bit(tr.outputs.get(cur))
                if c is not None:
                    if best is None or d < best:
                        best, b = d, c
                    break
        return row_end_output(0 if b is None else b, view, u)

    def compute(self, ctx):
        raise TypeError(f"{self.name} only runs in the online engine")
