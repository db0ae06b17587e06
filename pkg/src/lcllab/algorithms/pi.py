"""Solvers for the row-bit problem on top of the bad-graph marking.

Nodes left bot by the marking sit in well-formed components.  A grid node
picks a bit b for its row and outputs (b, yes), except at the end of a row
where it outputs yes exactly when b equals its input.  Tree nodes output the
OR of their children, so a root says yes iff some row in its column matched.

How b is chosen is what separates the variants:

* shared: row i reads bit i of the shared string; short grids
  (height <= c_log * log2 n) instead copy the input at the end of the row
* private-zero: b = 0
* private-rowrand: b = the node's own private bit (no coordination)
"""

from __future__ import annotations

import math

import numpy as np
from scipy import sparse

from .. import labels as lb
from ..fastpi import CODES, CompiledInstance
from ..graph import LabeledGraph
from ..simulator.engine import NodeAlgorithm
from .bad_graph import BadGraphAnalysis, bad_graph_block, bad_graph_view
from .common import default_locality, log2_ceil

RIGHT = "gridEdge:R"
DOWN = "gridEdge:D+treeEdge:L"
CHILDREN = ("treeEdge:ChL", "treeEdge:ChR")


def row_index(follow_step, u: int, limit: int) -> int:
    """Number of D steps from ``u`` to the bottom of its column."""
    y, cur, seen = 0, u, {u}
    while y <= limit:
        nxt = follow_step(cur, DOWN)
        if nxt is None or nxt in seen:
            return y
        seen.add(nxt)
        cur = nxt
        y += 1
    return y


class _Layout:
    """Per-instance arrays for the bot part of the bad-graph output (cached)."""

    def __init__(self, g: LabeledGraph, a: BadGraphAnalysis):
        ci = CompiledInstance.of(g)
        self.ci = ci
        ids = ci.ids.tolist()
        idx = ci.index
        n = len(ids)
        bg = np.array([CODES[a.outputs[u]] for u in ids], dtype=np.int8)
        self.bg = bg
        self.free = bg == 0
        self.grid_free = self.free & (ci.is_grid == 1)
        self.tree_free = self.free & (ci.is_grid == 0)
        self.row_end = ci.right < 0
        self.bit_in = ci.bit_in.astype(np.int64)
        self.rows = np.zeros(n, dtype=np.int64)
        self.height = np.zeros(n, dtype=np.int64)
        for block in a.blocks:
            # blocks may mix bot with marked members; only all-marked ones are skipped
            if all(a.outputs[u] != lb.BOT for u in block):
                continue
            h = sum(1 for u in block if lb.is_grid_node(g.input(u)))
            for u in block:
                i = idx[u]
                self.height[i] = h
                if self.grid_free[i]:
                    self.rows[i] = row_index(g.port, u, h)
        self.radii_bg = np.array([a.radii[u] for u in ids], dtype=np.int64)
        # tree node -> the row-end leaves below it, and whether it has any other leaf
        tree_idx = np.flatnonzero(self.tree_free)
        end_leaves = np.flatnonzero(self.grid_free & self.row_end)
        col_of = {int(j): c for c, j in enumerate(end_leaves)}
        rows, cols = [], []
        self.other_leaf = np.zeros(n, dtype=bool)
        self.childless = np.zeros(n, dtype=bool)
        memo: dict[int, tuple[frozenset, bool, bool]] = {}

        def below(i):
            if i in memo:
                return memo[i]
            stack = [(i, False)]
            while stack:
                j, done = stack.pop()
                if j in memo:
                    continue
                kids = [ci.chl[j], ci.chr_[j]]
                if ci.is_grid[j]:
                    # a marked grid child answers nothing to the tree above it
                    if not self.free[j]:
                        memo[j] = (frozenset(), False, False)
                    else:
                        memo[j] = (frozenset([j]) if self.row_end[j] else frozenset(), not self.row_end[j], False)
                    continue
                if kids[0] < 0 or kids[1] < 0:
                    memo[j] = (frozenset(), False, True)
                    continue
                if not done:
                    stack.append((j, True))
                    stack.extend((int(k), False) for k in kids if int(k) not in memo)
                    continue
                a_, b_ = memo[int(kids[0])], memo[int(kids[1])]
                memo[j] = (a_[0] | b_[0], a_[1] or b_[1], False)
            return memo[i]

        for i in tree_idx.tolist():
            ends, other, childless = below(i)
            self.other_leaf[i] = other
            self.childless[i] = childless
            for j in ends:
                rows.append(i)
                cols.append(col_of[j])
        self.tree_idx = tree_idx
        self.end_leaves = end_leaves
        self.cover = sparse.csr_matrix((np.ones(len(rows), dtype=np.int32), (rows, cols)),
                                       shape=(n, max(len(end_leaves), 1)))
        self._small_cache = None

    @classmethod
    def of(cls, g: LabeledGraph, cap: int) -> "_Layout":
        key = ("pi-layout", cap)
        if key not in g.cache:
            g.cache[key] = cls(g, BadGraphAnalysis.of(g, cap))
        return g.cache[key]

    def small_branch(self, g: LabeledGraph):
        """Row bits and radii when every node copies the input at the end of its row."""
        if self._small_cache is None:
            ci = self.ci
            ids = ci.ids
            n = len(ids)
            bits = np.zeros(n, dtype=np.int64)
            reach = self.radii_bg.copy()
            for i in np.flatnonzero(self.grid_free).tolist():
                walk = [i]
                seen = {i}
                cycle = False
                stop = None
                while True:
                    j = int(ci.right[walk[-1]])
                    if j < 0:
                        break
                    if not self.free[j]:
                        stop = j
                        break
                    if j in seen:
                        cycle = True
                        break
                    walk.append(j)
                    seen.add(j)
                if cycle:
                    k = min(walk, key=lambda x: ids[x])
                    bits[i] = self.bit_in[k]
                else:
                    bits[i] = self.bit_in[walk[-1]]
                reach[i] = max(d + int(self.radii_bg[j]) for d, j in enumerate(walk))
                if stop is not None:
                    # seeing that the walk is blocked needs the blocker's own radius
                    reach[i] = max(reach[i], len(walk) + int(self.radii_bg[stop]))
            self._small_cache = (bits, reach)
        return self._small_cache


def _assemble(lay: _Layout, bits: np.ndarray) -> np.ndarray:
    """Output codes from the per-node row bits (only read at free grid nodes)."""
    codes = lay.bg.copy()
    grid = lay.grid_free
    x = np.where(lay.row_end, bits == lay.bit_in, True)
    codes[grid] = (10 + 2 * bits[grid] + x[grid]).astype(np.int8)
    if len(lay.tree_idx):
        match = (bits[lay.end_leaves] == lay.bit_in[lay.end_leaves]).astype(np.int32)
        if len(match) == 0:
            match = np.zeros(1, dtype=np.int32)
        hit = (lay.cover @ match) > 0
        t = lay.tree_idx
        yes = (hit[t] | lay.other_leaf[t]) & ~lay.childless[t]
        codes[t] = np.where(yes, CODES[lb.YES], CODES[lb.NO]).astype(np.int8)
    return codes


class _PiBase(NodeAlgorithm):
    problem = "pi"

    def locality(self, n):
        return default_locality(n) + 2 * log2_ceil(n)

    # per-node route ------------------------------------------------------
    def _bit(self, ctx, view, u: int, height: int, small_end) -> int:
        raise NotImplementedError

    def _row_end_match(self, ctx, view, leaf: int, height: int) -> bool:
        """x of a row-end leaf, evaluated from the caller's view."""
        b = self._bit(ctx, view, leaf, height, small_end=leaf)
        return b == lb.pi_bit(view.input(leaf))

    def compute(self, ctx):
        u = ctx.node
        block, members, view, r = bad_graph_block(ctx, u)
        if block[u] != lb.BOT:
            return block[u]
        height = sum(1 for x in members if lb.is_grid_node(view.input(x)))
        if lb.is_grid_node(view.input(u)):
            b = self._bit(ctx, view, u, height, small_end=None)
            if view.follow(u, [RIGHT]) is not None:
                return lb.pair(b, lb.YES)
            return lb.pair(b, lb.YES if b == lb.pi_bit(view.input(u)) else lb.NO)
        return lb.YES if self._subtree_yes(ctx, view, u, height, block) else lb.NO

    def _subtree_yes(self, ctx, view, u, height, block) -> bool:
        stack, any_yes = [u], False
        while stack:
            x = stack.pop()
            if lb.is_grid_node(view.input(x)):
                if block.get(x, lb.BOT) != lb.BOT:
                    continue
                if view.follow(x, [RIGHT]) is not None or self._row_end_match(ctx, view, x, height):
                    any_yes = True
                continue
            kids = [view.follow(x, [c]) for c in CHILDREN]
            if None in kids:
                if x == u:
                    return False
                continue
            stack.extend(kids)
        return any_yes

    # batch route ---------------------------------------------------------
    def _bits_batch(self, g, env, lay: _Layout):
        raise NotImplementedError

    def batch(self, g, env):
        lay = _Layout.of(g, env.cap)
        bits, radii = self._bits_batch(g, env, lay)
        codes = _assemble(lay, bits)
        ids = lay.ci.ids.tolist()
        return codes, dict(zip(ids, radii.tolist()))


class PiShared(_PiBase):
    """Shared-randomness solver; pass ``fixed_bits`` for a deterministic variant."""

    name = "pi-shared"
    randomness = "shared"

    def __init__(self, c_log: float = 2.0, fixed_bits=None):
        self.c_log = c_log
        self.fixed_bits = None if fixed_bits is None else [int(b) for b in fixed_bits]
        if fixed_bits is not None:
            self.name = "pi-shared-fixed"
            self.randomness = "none"

    def small(self, n, height) -> bool:
        return n is not None and height <= self.c_log * math.log2(max(n, 2))

    def _shared_bit(self, ctx_shared, i: int, private_stream=None) -> int:
        if self.fixed_bits is not None:
            return self.fixed_bits[i] if i < len(self.fixed_bits) else 0
        if ctx_shared is not None:
            return ctx_shared.bit(i)
        return private_stream.bit(i)

    def _bit(self, ctx, view, u, height, small_end):
        if self.small(ctx.n, height):
            if small_end is not None:
                return lb.pi_bit(view.input(small_end))
            return self._walk_bit(ctx, u)
        y = row_index(lambda x, lab: view.follow(x, [lab]), u, height)
        stream = None
        if self.fixed_bits is None and ctx.shared is None:
            stream = view.private(u)
        return self._shared_bit(ctx.shared, y, stream)

    def _walk_bit(self, ctx, u) -> int:
        walk, seen, d = [u], {u}, 0
        while True:
            _, _, view, _ = bad_graph_view(ctx, walk[-1], d)
            nxt = view.follow(walk[-1], [RIGHT])
            if nxt is None:
                break
            if nxt in seen:
                k = min(walk)
                return lb.pi_bit(view.input(k))
            out, _, view2, _ = bad_graph_view(ctx, nxt, d + 1)
            if out != lb.BOT:
                break
            walk.append(nxt)
            seen.add(nxt)
            d += 1
        return lb.pi_bit(ctx.view(d).input(walk[-1]))

    def _bits_batch(self, g, env, lay):
        n = env.n
        bits = np.zeros(len(lay.ci.ids), dtype=np.int64)
        radii = lay.radii_bg.copy()
        small_mask = np.array([self.small(n, int(h)) for h in lay.height]) if n is not None else \
            np.zeros(len(bits), dtype=bool)
        small_mask &= lay.grid_free
        if small_mask.any():
            sb, sr = lay.small_branch(g)
            bits[small_mask] = sb[small_mask]
            radii[small_mask] = sr[small_mask]
        big = lay.grid_free & ~small_mask
        if big.any():
            rows = lay.rows[big]
            top = int(rows.max()) + 1
            if self.fixed_bits is not None:
                table = np.array([self._shared_bit(None, i) for i in range(top)], dtype=np.int64)
                bits[big] = table[rows]
            elif env.shared is not None:
                bits[big] = env.shared.bits(top).astype(np.int64)[rows]
            else:
                ids = lay.ci.ids[big]
                vals = np.zeros(len(ids), dtype=np.int64)
                for y in np.unique(rows).tolist():
                    sel = rows == y
                    vals[sel] = env.private.bits_for(ids[sel], y)
                bits[big] = vals
        # a row end in the short branch compares its input with itself
        return bits, radii


class PiPrivate(_PiBase):
    randomness = "private"

    def __init__(self, variant: str):
        if variant not in ("all-zero", "row-random-leftmost"):
            raise ValueError(f"unknown baseline {variant!r}")
        self.variant = variant
        self.name = "pi-private-zero" if variant == "all-zero" else "pi-private-rowrand"
        if variant == "all-zero":
            self.randomness = "none"

    def _bit(self, ctx, view, u, height, small_end):
        if self.variant == "all-zero":
            return 0
        return view.private(u).bit(0)

    def _bits_batch(self, g, env, lay):
        n = len(lay.ci.ids)
        if self.variant == "all-zero":
            bits = np.zeros(n, dtype=np.int64)
        else:
            bits = env.private.bits_for(lay.ci.ids, 0).astype(np.int64)
        return bits, lay.radii_bg.copy()
