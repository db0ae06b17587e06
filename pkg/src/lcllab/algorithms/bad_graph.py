"""Marking everything that does not look like a well-formed grid-with-trees instance.

1. a node with a locally checkable defect outputs Error, TreeError or GridError
   (that priority order);
2. each component of the tree projection solves the bad-tree problem with the
   defective nodes marked, and non-bot answers are wrapped as ColumnError;
3. a component left all-bot that holds no diagonal-1 grid node outputs VertError.

A node needs to see its whole tree component plus a margin of four hops, so
its radius is the largest distance to a component member plus four.
"""

from __future__ import annotations

from .. import labels as lb
from ..constraints.problems import BadGraphFlags
from ..graph import LabeledGraph, components
from ..simulator.engine import NodeAlgorithm
from .bad_tree import component_radii, solve_component
from .common import closed_component, default_locality, is_tree_edge


def finish_component(tree: LabeledGraph, members, flagged: dict, inputs) -> dict[int, str]:
    """Outputs for one tree component given the local error flags of its members."""
    errors = {u for u in members if flagged.get(u)}
    inner = solve_component(tree, members, errors)
    out = {}
    for u in members:
        if u in errors:
            out[u] = flagged[u]
        else:
            out[u] = lb.column_error(inner[u])
    if not errors and not any(lb.bad_graph_input(inputs(u)) == lb.GRID_NODE_1 for u in members):
        out = {u: lb.VERT_ERROR for u in members}
    return out


class BadGraphAnalysis:
    """All bad-graph outputs and radii of an instance, computed once and cached on the graph."""

    def __init__(self, g: LabeledGraph, cap: int):
        self.cap = cap
        flags = BadGraphFlags(g)
        self.flags = flags
        tree = flags.tree
        self.flagged = {u: flags.strongest(u) for u in g.nodes}
        self.blocks = components(tree)
        self.block_of = {}
        self.outputs = {}
        for c, block in enumerate(self.blocks):
            for u in block:
                self.block_of[u] = c
            self.outputs.update(finish_component(tree, block, self.flagged, g.input))
        self.radii = component_radii(g, self.blocks, cap)
        for u, r in self.radii.items():
            if r > cap:
                self.radii[u] = cap
                self.outputs[u] = self.flagged[u] or lb.BOT

    @classmethod
    def of(cls, g: LabeledGraph, cap: int) -> "BadGraphAnalysis":
        key = ("bad-graph", cap)
        if key not in g.cache:
            g.cache[key] = cls(g, cap)
        return g.cache[key]


def bad_graph_block(ctx, v: int, offset: int = 0):
    """Bad-graph outputs of the tree component of ``v`` (``offset`` hops from the caller).

    Returns ``(outputs, members, view, r)`` with ``outputs`` covering ``members``.
    When the component does not close within the cap, every member falls back
    to its own local flag, as in the batch route.
    """
    members, view, r, closed = closed_component(ctx, v, offset, is_tree_edge)
    sub = view.subgraph
    if ("flags",) not in sub.cache:
        sub.cache[("flags",)] = BadGraphFlags(sub)
    flags = sub.cache[("flags",)]
    flagged = {x: flags.strongest(x) for x in members}
    if not closed:
        return {x: flagged[x] or lb.BOT for x in members}, members, view, r
    return finish_component(flags.tree.induced(members), members, flagged, sub.input), members, view, r


def bad_graph_view(ctx, v: int, offset: int = 0):
    """Bad-graph output of ``v`` (``offset`` hops from the caller) from the caller's views.

    Returns ``(output, members, view, r)``.
    """
    outs, members, view, r = bad_graph_block(ctx, v, offset)
    return outs[v], members, view, r


class BadGraphAlgorithm(NodeAlgorithm):
    name = "bad-graph"
    problem = "badGraph"

    def locality(self, n):
        return default_locality(n)

    def compute(self, ctx):
        return bad_graph_view(ctx, ctx.node)[0]

    def batch(self, g, env):
        a = BadGraphAnalysis.of(g, env.cap)
        return dict(a.outputs), dict(a.radii)


def solve_bad_graph(g: LabeledGraph) -> dict[int, str]:
    return dict(BadGraphAnalysis.of(g, default_locality(g.n)).outputs)
