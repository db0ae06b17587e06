"""Canonical instances (trees, grids, the grid-with-trees family) and corruptions.

Coordinates used throughout:

* tree node ``(l, k)``: layer ``l`` from the root, position ``k`` in the layer
* grid node ``(x, y)``: column ``x`` (``R`` increases it), row ``y`` (``U`` increases it)

In a family instance the tree above column ``x`` has ``ell + 1`` layers and
its bottom layer ``ell`` is the column itself: tree node ``(ell, k)`` is grid
node ``(x, k)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping

from . import labels as lb
from .graph import LabeledGraph, disjoint_union

CORRUPTIONS = (
    "torus-wrap-horizontal", "delete-edge", "relabel-half-edge", "mark-node",
    "horizontal-grid", "drop-vertical-ones", "mismatch-edge-type", "detach-tree",
)


def _ids(n: int, seed: int | None) -> list[int]:
    """Identifiers for ``n`` nodes: 1..n in order, or a seeded sample of {1..n^2}."""
    if seed is None:
        return list(range(1, n + 1))
    return random.Random(seed).sample(range(1, n * n + 1), n)


def tree_edges(ell: int):
    """Half-edge labeled edges of the tree-like structure on layers 0..ell-1, by coordinates."""
    out = []
    for l in range(ell):
        for k in range(2 ** l):
            if k + 1 < 2 ** l:
                out.append(((l, k), (l, k + 1), "R", "L"))
            if l > 0:
                out.append(((l, k), (l - 1, k // 2), "P", "ChL" if k % 2 == 0 else "ChR"))
    return out


def gen_tree(ell: int, seed: int | None = None, marks=()) -> LabeledGraph:
    if ell < 1:
        raise ValueError("ell must be >= 1")
    coords = [(l, k) for l in range(ell) for k in range(2 ** l)]
    ids = dict(zip(coords, _ids(len(coords), seed)))
    marks = set(marks)
    nodes = {ids[c]: "1" if c in marks else "0" for c in coords}
    edges = [(ids[a], ids[b], la, lb_) for a, b, la, lb_ in tree_edges(ell)]
    layout = {ids[c]: c for c in coords}
    return LabeledGraph(nodes, edges, {"kind": "tree", "ell": ell, "_layout": layout})


def grid_edges(h: int, w: int):
    out = []
    for x in range(w):
        for y in range(h):
            if x + 1 < w:
                out.append(((x, y), (x + 1, y), "R", "L"))
            if y + 1 < h:
                out.append(((x, y), (x, y + 1), "U", "D"))
    return out


def gen_grid(h: int, w: int, seed: int | None = None) -> LabeledGraph:
    if h < 1 or w < 1:
        raise ValueError("grid dimensions must be >= 1")
    coords = [(x, y) for x in range(w) for y in range(h)]
    ids = dict(zip(coords, _ids(len(coords), seed)))
    edges = [(ids[a], ids[b], la, lb_) for a, b, la, lb_ in grid_edges(h, w)]
    return LabeledGraph({ids[c]: "0" for c in coords}, edges,
                        {"kind": "grid", "h": h, "w": w, "_layout": {ids[c]: c for c in coords}})


def diagonal_walk(g: LabeledGraph, start: int) -> list[int]:
    from .graph import follow

    walk = [start]
    seen = {start}
    while True:
        nxt = follow(g, walk[-1], ("R", "U"))
        if nxt is None or nxt in seen:
            return walk
        walk.append(nxt)
        seen.add(nxt)


def label_vertical(g: LabeledGraph) -> LabeledGraph:
    """Set bit 1 on the diagonal walked from the bottom-left corner, 0 elsewhere."""
    h, w = g.meta.get("h"), g.meta.get("w")
    if h is not None and h < w:
        raise ValueError(f"vertical labeling needs h >= w, got h={h}, w={w}")
    corner = [u for u in g.nodes if g.port(u, "D") is None and g.port(u, "L") is None]
    if len(corner) != 1:
        raise ValueError("graph has no unique bottom-left corner")
    ones = set(diagonal_walk(g, corner[0]))
    return g.with_inputs({u: "1" if u in ones else "0" for u in g.nodes})


@dataclass
class FamilyParams:
    ell: int
    w: int
    inputBits: Mapping[int, int] = field(default_factory=dict)
    seed: int = 0

    @property
    def h(self) -> int:
        return 2 ** self.ell

    def validate(self, allow_wide: bool = False) -> None:
        if not isinstance(self.ell, int) or self.ell < 1:
            raise ValueError(f"ell must be an integer >= 1, got {self.ell!r}")
        if self.w < 1:
            raise ValueError(f"w must be >= 1, got {self.w}")
        if self.w > self.h and not allow_wide:
            raise ValueError(f"w={self.w} exceeds the grid height h={self.h}")
        for row, bit in self.inputBits.items():
            if not 0 <= row < self.h or bit not in (0, 1):
                raise ValueError(f"bad input bit {bit!r} for row {row!r}")

    def node_count(self) -> int:
        return self.w * (2 * self.h - 1)


class FamilyLayout:
    """Coordinate bookkeeping for a family instance (for tests and adversaries only)."""

    def __init__(self, ell: int, w: int, coords: Mapping[int, tuple]):
        self.ell, self.w, self.h = ell, w, 2 ** ell
        self.coords = dict(coords)
        self.ids = {c: u for u, c in self.coords.items()}

    @classmethod
    def of(cls, g: LabeledGraph) -> "FamilyLayout":
        m = g.meta
        if "_layout" in m and m.get("family") == "G":
            return cls(m["ell"], m["w"], m["_layout"])
        # graphs read from JSON lose the layout; rebuild it from the labels
        if "family_layout" not in g.cache:
            from .oracles import family_coordinates, is_family_member

            rebuilt = family_coordinates(g) if is_family_member(g) else None
            g.cache["family_layout"] = None if rebuilt is None else cls(*rebuilt)
        if g.cache["family_layout"] is None:
            raise ValueError("graph is not a family instance")
        return g.cache["family_layout"]

    def tree(self, x: int, l: int, k: int) -> int:
        return self.ids[(x, l, k)]

    def grid(self, x: int, y: int) -> int:
        return self.ids[(x, self.ell, y)]

    def column(self, x: int) -> list[int]:
        return [self.grid(x, y) for y in range(self.h)]

    def row(self, y: int) -> list[int]:
        return [self.grid(x, y) for x in range(self.w)]

    def root(self, x: int) -> int:
        return self.ids[(x, 0, 0)]

    def is_grid(self, u: int) -> bool:
        return self.coords[u][1] == self.ell


def family_graph(ell: int, w: int, input_bits: Mapping[int, int], seed: int | None,
                 ones: set | None = None) -> LabeledGraph:
    h = 2 ** ell
    coords = [(x, l, k) for x in range(w) for l in range(ell + 1) for k in range(2 ** l)]
    ids = dict(zip(coords, _ids(len(coords), seed)))
    if ones is None:
        ones = {(i, i) for i in range(min(h, w))}
    nodes = {}
    for (x, l, k) in coords:
        if l < ell:
            base = lb.TREE_NODE
            bit = 0
        else:
            base = lb.GRID_NODE_1 if (x, k) in ones else lb.GRID_NODE_0
            bit = int(input_bits.get(k, 0)) if x == w - 1 else 0
        nodes[ids[(x, l, k)]] = lb.pi_input(base, bit)
    edges = []
    for x in range(w):
        for (l, k), (l2, k2), la, lb_ in tree_edges(ell + 1):
            a, b = ids[(x, l, k)], ids[(x, l2, k2)]
            if l == ell and l2 == ell:
                # bottom layer path = column edge; R along the path is U in the grid
                edges.append((a, b, "gridEdge:U+treeEdge:R", "gridEdge:D+treeEdge:L"))
            else:
                edges.append((a, b, f"treeEdge:{la}", f"treeEdge:{lb_}"))
        if x + 1 < w:
            for y in range(h):
                edges.append((ids[(x, ell, y)], ids[(x + 1, ell, y)], "gridEdge:R", "gridEdge:L"))
    meta = {"family": "G", "ell": ell, "w": w, "seed": seed,
            "_layout": {ids[c]: c for c in coords}}
    return LabeledGraph(nodes, edges, meta)


def gen_family_instance(p: FamilyParams) -> LabeledGraph:
    p.validate()
    return family_graph(p.ell, p.w, p.inputBits, p.seed)


def set_input_bits(g: LabeledGraph, bits: Mapping[int, int]) -> LabeledGraph:
    """Replace the extra input bit of the given nodes."""
    return g.with_inputs({u: lb.pi_input(lb.bad_graph_input(g.input(u)), b) for u, b in bits.items()})


def set_row_inputs(g: LabeledGraph, row_bits: Mapping[int, int]) -> LabeledGraph:
    """Set the input bit of the right-most grid node of each listed row."""
    lay = FamilyLayout.of(g)
    return set_input_bits(g, {lay.grid(lay.w - 1, y): b for y, b in row_bits.items()})


# corruptions

@dataclass
class Corruption:
    kind: str
    targets: tuple = ()
    seed: int = 0

    def __post_init__(self):
        if self.kind not in CORRUPTIONS:
            raise ValueError(f"unknown corruption {self.kind!r}")


def _rebuild(g: LabeledGraph, nodes=None, edges=None, **meta) -> LabeledGraph:
    m = dict(g.meta)
    m.update(meta)
    return LabeledGraph(g.inputs if nodes is None else nodes,
                        list(g.edges()) if edges is None else edges, m)


def _other_label(label: str, universe, rng, keep_type=None) -> str:
    choices = [x for x in universe if x != label]
    if keep_type is not None:
        choices = [x for x in choices if (lb.label_type(x) == lb.label_type(label)) == keep_type]
    return rng.choice(choices)


def corrupt(g: LabeledGraph, c: Corruption) -> tuple[LabeledGraph, dict]:
    """Apply one corruption; returns the new instance and a record of the change."""
    rng = random.Random(c.seed)
    family = g.meta.get("family") == "G"
    edges = list(g.edges())
    record = {"kind": c.kind, "seed": c.seed}

    if c.kind == "torus-wrap-horizontal":
        if not family:
            raise ValueError("torus wrap needs a family instance")
        lay = FamilyLayout.of(g)
        if lay.w < 3 or lay.h < 3:
            raise ValueError("torus wrap needs w >= 3 and h >= 3")
        added = []
        for y in range(lay.h):
            added.append((lay.grid(lay.w - 1, y), lay.grid(0, y), "gridEdge:R", "gridEdge:L"))
        for x in range(lay.w):
            added.append((lay.grid(x, lay.h - 1), lay.grid(x, 0), "gridEdge:U+treeEdge:R", "gridEdge:D+treeEdge:L"))
        record["added"] = [(u, v) for u, v, _, _ in added]
        return _rebuild(g, edges=edges + added), record

    if c.kind == "delete-edge":
        if not edges:
            raise ValueError("graph has no edges")
        idx = c.targets[0] if c.targets else rng.randrange(len(edges))
        u, v, _, _ = edges.pop(idx)
        record["removed"] = (u, v)
        return _rebuild(g, edges=edges), record

    if c.kind == "relabel-half-edge":
        if not edges:
            raise ValueError("graph has no edges")
        idx = c.targets[0] if c.targets else rng.randrange(len(edges))
        u, v, lu, lv = edges[idx]
        if lb.is_bad_graph_label(lu):
            universe = lb.BAD_GRAPH_LABELS
        else:
            universe = lb.GRID_LABELS if g.meta.get("kind") == "grid" else lb.TREE_LABELS
        new = _other_label(lu, universe, rng)
        edges[idx] = (u, v, new, lv)
        record.update(node=u, edge=(u, v), old=lu, new=new)
        return _rebuild(g, edges=edges), record

    if c.kind == "mark-node":
        if family:
            lay = FamilyLayout.of(g)
            grid_nodes = [u for u in g.nodes if lay.is_grid(u)]
            u = c.targets[0] if c.targets else rng.choice(grid_nodes)
            bit = lb.pi_bit(g.input(u))
            record["node"] = u
            return g.with_inputs({u: lb.pi_input(lb.TREE_NODE, bit)}), record
        u = c.targets[0] if c.targets else rng.choice(g.nodes)
        record["node"] = u
        return g.with_inputs({u: "1"}), record

    if c.kind == "horizontal-grid":
        ell = g.meta.get("ell", 1) if family else (c.targets[0] if c.targets else 1)
        h = 2 ** ell
        wide = family_graph(ell, 2 * h, {}, c.seed)
        record.update(ell=ell, w=2 * h)
        return wide, record

    if c.kind == "drop-vertical-ones":
        if not family:
            raise ValueError("needs a family instance")
        ones = [u for u in g.nodes if lb.bad_graph_input(g.input(u)) == lb.GRID_NODE_1]
        record["nodes"] = ones
        return g.with_inputs({u: lb.pi_input(lb.GRID_NODE_0, lb.pi_bit(g.input(u))) for u in ones}), record

    if c.kind == "mismatch-edge-type":
        if not family:
            raise ValueError("needs a family instance")
        idx = c.targets[0] if c.targets else rng.randrange(len(edges))
        u, v, lu, lv = edges[idx]
        new = _other_label(lu, lb.BAD_GRAPH_LABELS, rng, keep_type=False)
        edges[idx] = (u, v, new, lv)
        record.update(edge=(u, v), old=lu, new=new)
        return _rebuild(g, edges=edges), record

    if c.kind == "detach-tree":
        if not family:
            raise ValueError("needs a family instance")
        lay = FamilyLayout.of(g)
        x = c.targets[0] if c.targets else rng.randrange(lay.w)
        column = set(lay.column(x))
        kept, removed = [], []
        for e in edges:
            u, v, lu, lv = e
            if (u in column) != (v in column) and "treeEdge:P" in (lu, lv):
                removed.append((u, v))
            else:
                kept.append(e)
        record.update(column=x, removed=removed)
        return _rebuild(g, edges=kept), record

    raise ValueError(f"unknown corruption {c.kind!r}")


def glue(g1: LabeledGraph, g2: LabeledGraph, seed: int = 0) -> tuple[LabeledGraph, tuple[int, int]]:
    """Disjoint union plus one edge whose half-edge types disagree."""
    rng = random.Random(seed)
    g = disjoint_union(g1, g2)
    shift = max(g1.inputs, default=0)
    u = rng.choice(g1.nodes)
    v = rng.choice(g2.nodes) + shift
    edges = list(g.edges()) + [(u, v, "treeEdge:L", "gridEdge:R")]
    return LabeledGraph(g.inputs, edges), (u, v)
