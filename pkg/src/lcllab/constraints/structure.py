"""Checkers for the tree-like, grid and vertical-grid certificate constraints.

Each rule has a fixed evaluation radius: a walk of k labels needs the full
edge lists of nodes up to k-1 hops away, hence radius k.
"""

from __future__ import annotations

from typing import Callable, Iterable

from .. import labels as lb
from ..graph import LabeledGraph, follow
from .report import Violation, ViolationReport

TREE_RADIUS = {1: 1, 2: 1, 3: 1, 4: 3, 5: 4, 6: 1, 7: 1, 8: 2, 9: 2}
GRID_RADIUS = {1: 1, 2: 1, 3: 1, 4: 4, 5: 2, 6: 2}
VGRID_RADIUS = {1: 2, 2: 1, 3: 1}

_CHILD = ("ChL", "ChR")


def _require_labels(g: LabeledGraph, universe, what: str) -> None:
    allowed = set(universe)
    for u, v, lu, lv in g.edges():
        if lu not in allowed or lv not in allowed:
            raise ValueError(f"edge ({u}, {v}) carries labels {lu!r}/{lv!r} outside the {what} universe")


def tree_rules_at(g: LabeledGraph, u: int) -> list[int]:
    """Numbers of the tree-like structure rules violated at ``u``."""
    nbrs = g.neighbors(u)
    labs = [lu for _, lu, _ in nbrs]
    have = set(labs)
    bad = []
    if len(labs) != len(have):
        bad.append(1)
    if any((lu == "L" and lv != "R") or (lu == "R" and lv != "L") for _, lu, lv in nbrs):
        bad.append(2)
    if any((lu == "P" and lv not in _CHILD) or (lu in _CHILD and lv != "P") for _, lu, lv in nbrs):
        bad.append(3)
    for v, lu, lv in nbrs:
        if lu == "P" and lv == "ChL" and follow(g, u, ("P", "ChR", "L")) != u:
            bad.append(4)
            break
    if "R" in have:
        for v, lu, lv in nbrs:
            if lu == "P" and lv == "ChR" and follow(g, u, ("P", "R", "ChL", "L")) != u:
                bad.append(5)
                break
    if ("ChL" in have) != ("ChR" in have):
        bad.append(6)
    if ("P" not in have) != ("L" not in have and "R" not in have):
        bad.append(7)
    if "ChL" not in have and "ChR" not in have:
        for side in ("L", "R"):
            x = g.port(u, side)
            if x is not None and (g.has_label(x, "ChL") or g.has_label(x, "ChR")):
                bad.append(8)
                break
    for v, lu, lv in nbrs:
        if lu != "P":
            continue
        side = "R" if lv == "ChR" else "L" if lv == "ChL" else None
        if side is not None and (side in have) != g.has_label(v, side):
            bad.append(9)
            break
    return bad


def grid_rules_at(g: LabeledGraph, u: int) -> list[int]:
    nbrs = g.neighbors(u)
    labs = [lu for _, lu, _ in nbrs]
    have = set(labs)
    bad = []
    if len(labs) != len(have):
        bad.append(1)
    if any((lu == "L" and lv != "R") or (lu == "R" and lv != "L") for _, lu, lv in nbrs):
        bad.append(2)
    if any((lu == "U" and lv != "D") or (lu == "D" and lv != "U") for _, lu, lv in nbrs):
        bad.append(3)
    if "R" in have and "U" in have and follow(g, u, ("R", "U", "L", "D")) != u:
        bad.append(4)
    x = g.port(u, "R")
    if x is not None and (("D" in have) != g.has_label(x, "D") or ("U" in have) != g.has_label(x, "U")):
        bad.append(5)
    x = g.port(u, "U")
    if x is not None and (("L" in have) != g.has_label(x, "L") or ("R" in have) != g.has_label(x, "R")):
        bad.append(6)
    return bad


def vgrid_rules_at(g: LabeledGraph, u: int, bit: Callable[[int], int]) -> list[int]:
    """The three diagonal rules added on top of the grid rules."""
    if bit(u) != 1:
        return []
    bad = []
    for walk in (("U", "R"), ("D", "L")):
        x = follow(g, u, walk)
        if x is not None and bit(x) != 1:
            bad.append(1)
            break
    if g.port(u, "D") is None and g.port(u, "L") is not None:
        bad.append(2)
    if g.port(u, "U") is None and g.port(u, "R") is not None:
        bad.append(3)
    return bad


def node_bit(node_input: str) -> int:
    """Vertical-grid bit of a node input: plain ``"0"``/``"1"`` or a bad-graph/Pi input."""
    if node_input in ("0", "1"):
        return int(node_input)
    return lb.vgrid_bit(node_input)


def _nodes(g: LabeledGraph, nodes: Iterable[int] | None):
    return g.nodes if nodes is None else nodes


def check_tree(g: LabeledGraph, nodes: Iterable[int] | None = None) -> ViolationReport:
    _require_labels(g, lb.TREE_LABELS, "tree")
    out = []
    for u in _nodes(g, nodes):
        for r in tree_rules_at(g, u):
            out.append(Violation(u, f"tree.{r}", TREE_RADIUS[r]))
    return ViolationReport(out)


def check_grid(g: LabeledGraph, nodes: Iterable[int] | None = None) -> ViolationReport:
    _require_labels(g, lb.GRID_LABELS, "grid")
    out = []
    for u in _nodes(g, nodes):
        for r in grid_rules_at(g, u):
            out.append(Violation(u, f"grid.{r}", GRID_RADIUS[r]))
    return ViolationReport(out)


def check_vgrid(g: LabeledGraph, nodes: Iterable[int] | None = None) -> ViolationReport:
    _require_labels(g, lb.GRID_LABELS, "grid")
    bits = {u: node_bit(lab) for u, lab in g.inputs.items()}
    out = []
    for u in _nodes(g, nodes):
        for r in grid_rules_at(g, u):
            out.append(Violation(u, f"grid.{r}", GRID_RADIUS[r]))
        for r in vgrid_rules_at(g, u, bits.__getitem__):
            out.append(Violation(u, f"vgrid.{r}", VGRID_RADIUS[r]))
    return ViolationReport(out)
