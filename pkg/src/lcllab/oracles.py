"""Brute-force structure recognition, independent of the rule checkers.

Two kinds of oracle live here.  The isomorphism ones compare a graph with
the canonical generator output through networkx, matching half-edge labels
on both ends of every edge; they are slow but share no logic with the
checkers.  The family oracle rebuilds coordinates from the labels and then
compares edge by edge with a freshly generated instance, which scales to
the instance sizes the experiments use.
"""

from __future__ import annotations

import math

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher

from . import labels as lb
from .generators import family_graph, gen_grid, gen_tree
from .graph import LabeledGraph


def _digraph(g: LabeledGraph, node_attr=None) -> nx.DiGraph:
    d = nx.DiGraph()
    for u in g.nodes:
        d.add_node(u, tag=None if node_attr is None else node_attr(g.input(u)))
    for u, v, lu, lv in g.edges():
        d.add_edge(u, v, label=lu)
        d.add_edge(v, u, label=lv)
    return d


def isomorphic(g: LabeledGraph, h: LabeledGraph, node_attr=None) -> bool:
    """Label-respecting isomorphism; ``node_attr`` maps inputs to what must match (None: ignore inputs)."""
    if g.n != h.n or g.m != h.m:
        return False
    a, b = _digraph(g, node_attr), _digraph(h, node_attr)
    same = lambda x, y: x["label"] == y["label"]
    tags = lambda x, y: x["tag"] == y["tag"]
    return DiGraphMatcher(a, b, node_match=tags, edge_match=same).is_isomorphic()


def is_tree_like(g: LabeledGraph) -> bool:
    """Isomorphic to a canonical tree-like structure with the same number of nodes."""
    ell = int(math.log2(g.n + 1)) if g.n else 0
    if ell < 1 or 2 ** ell - 1 != g.n:
        return False
    return isomorphic(g, gen_tree(ell))


def grid_shape(g: LabeledGraph) -> tuple[int, int] | None:
    """``(h, w)`` if ``g`` is isomorphic to a canonical h x w grid, else None."""
    for h in range(1, g.n + 1):
        if g.n % h == 0 and isomorphic(g, gen_grid(h, g.n // h)):
            return h, g.n // h
    return None


def is_vertical_grid(g: LabeledGraph) -> bool:
    shape = grid_shape(g)
    return shape is not None and shape[0] >= shape[1]


# family membership

def _kind(inp: str) -> bool:
    return lb.is_grid_node(inp)


def family_coordinates(g: LabeledGraph) -> tuple[int, int, dict] | None:
    """Rebuild ``(ell, w, node -> (x, layer, k))`` from the labels, or None if that fails.

    Grid positions come from R/U walks out of the unique corner without L and
    D; tree positions come from P walks up from the bottom layer.  Nothing is
    verified here beyond what is needed to assign coordinates.
    """
    grid = [u for u in g.nodes if lb.is_grid_node(g.input(u))]
    corners = [u for u in grid if g.port(u, "gridEdge:L") is None and g.port(u, "gridEdge:D+treeEdge:L") is None]
    if len(corners) != 1:
        return None
    pos = {}
    x, cur = 0, corners[0]
    while cur is not None and cur not in pos:
        y, c = 0, cur
        while c is not None and c not in pos:
            pos[c] = (x, y)
            c = g.port(c, "gridEdge:U+treeEdge:R")
            y += 1
        cur = g.port(cur, "gridEdge:R")
        x += 1
    if len(pos) != len(grid):
        return None
    w = 1 + max(p[0] for p in pos.values())
    h = 1 + max(p[1] for p in pos.values())
    ell = int(math.log2(h))
    if 2 ** ell != h or ell < 1:
        return None
    coords = {u: (px, ell, py) for u, (px, py) in pos.items()}
    layer = {u: (px, py) for u, (px, py) in pos.items()}
    for l in range(ell - 1, -1, -1):
        up = {}
        for u, (px, k) in layer.items():
            p = g.port(u, "treeEdge:P")
            if p is None:
                return None
            c = (px, l, k // 2)
            if coords.get(p, c) != c:
                return None
            coords[p] = c
            up[p] = (px, k // 2)
        layer = up
    return ell, w, coords


def is_family_member(g: LabeledGraph) -> bool:
    """Whether ``g`` is a hard-family instance: grid of height 2^ell >= w with a tree on each column.

    Membership is a property of the graph and its labels up to input bits:
    edge labels and the tree/grid kind of every node must match the
    canonical construction, while Pi bits and the placement of vertical-grid
    ones are free.
    """
    rebuilt = family_coordinates(g)
    if rebuilt is None:
        return False
    ell, w, coords = rebuilt
    if w > 2 ** ell or len(coords) != g.n or len(set(coords.values())) != g.n:
        return False
    ref = family_graph(ell, w, {}, seed=None)
    ref_ids = {c: u for u, c in ref.meta["_layout"].items()}
    to_ref = {u: ref_ids.get(c) for u, c in coords.items()}
    if None in to_ref.values():
        return False
    if ref.m != g.m:
        return False
    for u in g.nodes:
        if _kind(g.input(u)) != _kind(ref.input(to_ref[u])):
            return False
    for u, v, lu, lv in g.edges():
        if ref.label_between(to_ref[u], to_ref[v]) != lu or ref.label_between(to_ref[v], to_ref[u]) != lv:
            return False
    return True


def is_family_member_slow(g: LabeledGraph) -> bool:
    """Same question answered by isomorphism against every candidate size (small graphs only)."""
    for ell in range(1, 6):
        h = 2 ** ell
        for w in range(1, h + 1):
            if w * (2 * h - 1) == g.n and isomorphic(g, family_graph(ell, w, {}, None), _kind):
                return True
    return False
