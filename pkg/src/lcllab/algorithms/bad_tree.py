"""Certifying broken tree-like structures with pointer chains.

Inside one component with error set E (structure violations and marks):

* a node whose L-walk or R-walk along its layer reaches E points that way,
  choosing the shorter side (L on ties); the choice is stable along the walk
* otherwise, a node whose P-walk reaches E or a layer-pointing node points P
* otherwise, a node whose ChR-walk reaches E or a layer-pointing node points ChR
* anything left outputs bot

Every chain is therefore of the form (P*|ChR*)(L*|R*) and ends in Error.
"""

from __future__ import annotations

import math

import numpy as np

from .. import kernels
from .. import labels as lb
from ..constraints.structure import tree_rules_at
from ..graph import LabeledGraph, components
from ..simulator.engine import NodeAlgorithm
from .common import MARGIN, any_edge, closed_component, default_locality

INF = math.inf


def _walk_lengths(t: LabeledGraph, members, label: str, targets, blocked=frozenset()) -> dict:
    """Steps along ``label`` ports until a target is hit (inf if never)."""
    dist = {x: 0 for x in targets}
    for u in members:
        if u in dist:
            continue
        path, seen, cur = [], set(), u
        while True:
            if cur in dist:
                base = dist[cur]
                break
            if cur in seen or cur in blocked:
                base = INF
                break
            seen.add(cur)
            path.append(cur)
            nxt = t.port(cur, label)
            if nxt is None or nxt not in members:
                base = INF
                break
            cur = nxt
        for i, x in enumerate(reversed(path)):
            dist[x] = base + i + 1
    return dist


def solve_component(t: LabeledGraph, members, errors) -> dict[int, str]:
    """Bad-tree outputs for one component of the tree-labeled graph ``t``."""
    members = set(members)
    errors = set(errors) & members
    if not errors:
        return {u: lb.BOT for u in members}
    out = {u: lb.ERROR for u in errors}
    dl = _walk_lengths(t, members, "L", errors)
    dr = _walk_lengths(t, members, "R", errors)
    layer = set()
    for u in members - errors:
        if dl[u] < INF or dr[u] < INF:
            out[u] = lb.pointer("L" if dl[u] <= dr[u] else "R")
            layer.add(u)
    ground = errors | layer
    dp = _walk_lengths(t, members, "P", ground)
    up = {u for u in members - ground if dp[u] < INF}
    for u in up:
        out[u] = lb.pointer("P")
    dc = _walk_lengths(t, members, "ChR", ground, blocked=up)
    for u in members - ground - up:
        out[u] = lb.pointer("ChR") if dc[u] < INF else lb.BOT
    return out


def tree_errors(t: LabeledGraph, marks=()) -> set[int]:
    marks = set(marks)
    return {u for u in t.nodes if u in marks or tree_rules_at(t, u)}


def solve_bad_tree(g: LabeledGraph, marks=None) -> dict[int, str]:
    """Solve every component of a tree-labeled graph; marks default to inputs equal to "1"."""
    if marks is None:
        marks = {u for u, lab in g.inputs.items() if lab == "1"}
    errors = tree_errors(g, marks)
    out = {}
    for comp in components(g):
        out.update(solve_component(g, comp, errors))
    return out


def component_radii(g: LabeledGraph, blocks, cap: int | None = None) -> dict[int, int]:
    """For each node, its largest distance in ``g`` to a member of its block, plus the margin."""
    ids, index, indptr, indices = g.csr()
    comp = np.empty(len(ids), dtype=np.int64)
    sizes = np.empty(len(blocks), dtype=np.int64)
    for c, block in enumerate(blocks):
        sizes[c] = len(block)
        for u in block:
            comp[index[u]] = c
    reach = kernels.component_reach(indptr, indices, comp, sizes, np.arange(len(ids), dtype=np.int64))
    out = {}
    for i, u in enumerate(ids.tolist()):
        r = int(reach[i])
        out[u] = (cap + 1 if r < 0 else r + MARGIN)
    return out


class BadTreeAlgorithm(NodeAlgorithm):
    name = "bad-tree"
    problem = "badTree"

    def locality(self, n):
        return default_locality(n)

    def compute(self, ctx):
        u = ctx.node
        members, view, r, closed = closed_component(ctx, u, 0, any_edge)
        sub = view.subgraph
        marked = {x for x in members if sub.input(x) == "1"}
        if not closed:
            return lb.ERROR if u in marked or tree_rules_at(sub, u) else lb.BOT
        errors = {x for x in members if x in marked or tree_rules_at(sub, x)}
        return solve_component(sub.induced(members), members, errors)[u]

    def batch(self, g, env):
        blocks = components(g)
        radii = component_radii(g, blocks, env.cap)
        out = solve_bad_tree(g)
        for u, r in radii.items():
            if r > env.cap:
                radii[u] = env.cap
                out[u] = lb.ERROR if g.input(u) == "1" or tree_rules_at(g, u) else lb.BOT
        return out, radii
