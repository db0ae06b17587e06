"""Validity checkers for the three labeling problems built on the certificates.

* bad-tree: certify that a tree-like structure is broken (or marked)
* bad-graph: certify that a graph is not a well-formed grid-with-trees instance
* pi: the row-bit problem solved on top of bad-graph
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .. import labels as lb
from ..graph import LabeledGraph, components, project
from .report import Violation, ViolationReport
from .structure import grid_rules_at, node_bit, tree_rules_at, vgrid_rules_at

PROBLEMS = ("badTree", "badGraph", "pi")

BAD_TREE_RADIUS = {2: 4, 3: 2}
BAD_GRAPH_RADIUS = {2: 1, 3: 4, 4: 4, 5: 4, 6: 1}
PI_RADIUS = {1: 4, 2: 0, 3: 1, 4: 1, 5: 0, 6: 1, 7: 1}

# pointer p at u may be followed by these pointer directions at f(u, p)
POINTER_NEXT = {"L": ("L",), "R": ("R",), "P": ("P", "L", "R"), "ChR": ("ChR", "L", "R")}

_UNIVERSE = {
    "badTree": frozenset(lb.BAD_TREE_OUTPUTS),
    "badGraph": frozenset(lb.BAD_GRAPH_OUTPUTS),
    "pi": frozenset(lb.PI_OUTPUTS),
}


@dataclass
class OutputAssignment:
    problem: str
    outputs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.problem not in PROBLEMS:
            raise ValueError(f"unknown problem {self.problem!r}")

    def __getitem__(self, u):
        return self.outputs[u]

    def validate(self, g: LabeledGraph) -> None:
        _require_outputs(g, self.outputs, self.problem)


def _require_outputs(g: LabeledGraph, out: Mapping[int, str], problem: str) -> None:
    universe = _UNIVERSE[problem]
    for u in g.nodes:
        if u not in out:
            raise ValueError(f"node {u} has no output")
        if out[u] not in universe:
            raise ValueError(f"output {out[u]!r} at node {u} is outside the {problem} universe")


def _outputs(out) -> Mapping[int, str]:
    return out.outputs if isinstance(out, OutputAssignment) else out


def _tree_marks(g: LabeledGraph) -> set[int]:
    return {u for u, lab in g.inputs.items() if lab == "1"}


# bad-tree

def bad_tree_rules_at(g: LabeledGraph, u: int, out: Mapping[int, str], marked, tree_broken) -> list[tuple[int, str]]:
    o = out[u]
    if o == lb.BOT:
        return []
    if o == lb.ERROR:
        if u in marked or tree_broken(u):
            return []
        return [(2, "Error without a local structure violation or mark")]
    p = lb.pointer_dir(o)
    if not g.has_label(u, p):
        return [(3, f"no half-edge labeled {p}")]
    v = g.port(u, p)
    if v is None:
        return [(3, f"half-edge {p} is not unique")]
    ov = out[v]
    if ov == lb.ERROR:
        return []
    q = lb.pointer_dir(ov)
    if q is None:
        return [(3, f"pointer {p} reaches {v} which outputs {ov}")]
    if g.port(v, p) == u:
        return [(3, f"pointer {p} bounces back from {v}")]
    if q not in POINTER_NEXT[p]:
        return [(3, f"pointer {p} followed by incompatible pointer {q}")]
    return []


def check_bad_tree(g: LabeledGraph, out, marks=None) -> ViolationReport:
    """``marks`` defaults to the nodes whose input is ``"1"``."""
    out = _outputs(out)
    _require_outputs(g, out, "badTree")
    marked = _tree_marks(g) if marks is None else set(marks)
    broken_cache: dict[int, bool] = {}

    def tree_broken(u):
        if u not in broken_cache:
            broken_cache[u] = bool(tree_rules_at(g, u))
        return broken_cache[u]

    entries = []
    for u in g.nodes:
        for rule, msg in bad_tree_rules_at(g, u, out, marked, tree_broken):
            entries.append(Violation(u, f"badTree.{rule}", BAD_TREE_RADIUS[rule], msg))
    return ViolationReport(entries)


# bad-graph

def type_error_at(g: LabeledGraph, u: int) -> bool:
    """Justification for Error: a mismatched edge type or a tree-only node touching the grid."""
    tree_only = lb.bad_graph_input(g.input(u)) == lb.TREE_NODE
    for v, lu, lv in g.neighbors(u):
        tu = lb.label_type(lu)
        if tu != lb.label_type(lv):
            return True
        if tree_only and lb.GRID in tu:
            return True
    return False


class BadGraphFlags:
    """Per-node justifications for the three local error outputs, computed lazily."""

    def __init__(self, g: LabeledGraph):
        self.g = g
        self.tree = project(g, "tree")
        self.grid = project(g, "grid")
        self._bits = {u: node_bit(lab) for u, lab in g.inputs.items()}
        self._memo: dict[tuple[str, int], bool] = {}

    def _get(self, kind, u, fn):
        key = (kind, u)
        if key not in self._memo:
            self._memo[key] = fn(u)
        return self._memo[key]

    def error(self, u: int) -> bool:
        return self._get("e", u, lambda x: type_error_at(self.g, x))

    def tree_error(self, u: int) -> bool:
        return self._get("t", u, lambda x: bool(tree_rules_at(self.tree, x)))

    def grid_error(self, u: int) -> bool:
        def fn(x):
            if not lb.is_grid_node(self.g.input(x)):
                return False
            return bool(grid_rules_at(self.grid, x) or vgrid_rules_at(self.grid, x, self._bits.__getitem__))
        return self._get("g", u, fn)

    def strongest(self, u: int) -> str | None:
        """The highest-priority local error output justified at ``u``, if any."""
        if self.error(u):
            return lb.ERROR
        if self.tree_error(u):
            return lb.TREE_ERROR
        if self.grid_error(u):
            return lb.GRID_ERROR
        return None


_LOCAL_ERRORS = (lb.ERROR, lb.TREE_ERROR, lb.GRID_ERROR)


def derived_bad_tree(out: Mapping[int, str]) -> tuple[dict[int, str], set[int]]:
    """Outputs and marks of the bad-tree instance embedded in a bad-graph output."""
    inner = {}
    marks = set()
    for u, o in out.items():
        if o in _LOCAL_ERRORS:
            inner[u] = lb.ERROR
            marks.add(u)
        else:
            c = lb.column_inner(o)
            inner[u] = c if c is not None else lb.BOT
    return inner, marks


def check_bad_graph(g: LabeledGraph, out, flags: BadGraphFlags | None = None) -> ViolationReport:
    out = _outputs(out)
    _require_outputs(g, out, "badGraph")
    for u in g.nodes:
        lb.bad_graph_input(g.input(u))
    for _, _, lu, lv in g.edges():
        lb.label_type(lu), lb.label_type(lv)
    flags = flags or BadGraphFlags(g)
    tree = flags.tree
    entries = []

    def add(u, rule, msg=""):
        entries.append(Violation(u, f"badGraph.{rule}", BAD_GRAPH_RADIUS[rule], msg))

    for u in g.nodes:
        o = out[u]
        if o == lb.ERROR and not flags.error(u):
            add(u, 2, "Error without a type mismatch")
        elif o == lb.TREE_ERROR and not flags.tree_error(u):
            add(u, 3, "TreeError but the tree projection is locally valid")
        elif o == lb.GRID_ERROR and not flags.grid_error(u):
            add(u, 4, "GridError but the grid projection is locally valid")
        elif o == lb.VERT_ERROR:
            if g.input(u).split("|")[0] == lb.GRID_NODE_1:
                add(u, 6, "VertError at a node carrying a diagonal 1")
            for v, _, _ in tree.neighbors(u):
                if out[v] != lb.VERT_ERROR:
                    add(u, 6, f"tree neighbor {v} does not output VertError")
                    break

    inner, marks = derived_bad_tree(out)
    for u in g.nodes:
        if inner[u] == lb.BOT:
            continue
        for rule, msg in bad_tree_rules_at(tree, u, inner, marks, flags.tree_error):
            add(u, 5, f"column certificate: badTree.{rule} {msg}")
    return ViolationReport(entries)


# pi

def check_pi(g: LabeledGraph, out, flags: BadGraphFlags | None = None) -> ViolationReport:
    out = _outputs(out)
    _require_outputs(g, out, "pi")
    bg_out = {u: (o if lb.is_bad_graph_output(o) else lb.BOT) for u, o in out.items()}
    entries = [Violation(v.node, "pi.1", PI_RADIUS[1], f"{v.rule} {v.msg}".strip())
               for v in check_bad_graph(g, bg_out, flags)]

    def add(u, rule, msg=""):
        entries.append(Violation(u, f"pi.{rule}", PI_RADIUS[rule], msg))

    for u in g.nodes:
        o = out[u]
        if lb.is_bad_graph_output(o):
            continue
        inp = g.input(u)
        grid_node = lb.is_grid_node(inp)
        pr = lb.parse_pair(o)
        if grid_node and pr is None:
            add(u, 2, "grid node must output a (bit, yes/no) pair")
        if not grid_node and pr is not None:
            add(u, 5, "tree node must output yes or no")
        if pr is not None:
            b, x = pr
            v = g.port(u, "gridEdge:R")
            if v is not None:
                ov = out[v]
                pv = lb.parse_pair(ov)
                if not lb.is_bad_graph_output(ov) and (pv is None or pv[0] != b):
                    add(u, 3, f"right neighbor {v} outputs {ov}")
            else:
                if (x == lb.YES) != (lb.pi_bit(inp) == b):
                    add(u, 4, "row end: yes must mean the bit matches the input")
        else:
            x = o
            kids = [g.port(u, "treeEdge:ChL"), g.port(u, "treeEdge:ChR")]
            xs = []
            for k in kids:
                if k is None:
                    break
                ok = out[k]
                pk = lb.parse_pair(ok)
                if pk is not None:
                    xs.append(pk[1])
                elif ok in (lb.YES, lb.NO):
                    xs.append(ok)
                else:
                    break
            if len(xs) != 2:
                add(u, 6, "children missing or not carrying yes/no")
            elif (x == lb.YES) != (lb.YES in xs):
                add(u, 6, "yes must equal the OR of the children")
            if g.port(u, "treeEdge:P") is None and x != lb.YES:
                add(u, 7, "a root must output yes")
    return ViolationReport(entries)


def check(problem: str, g: LabeledGraph, out) -> ViolationReport:
    if problem == "badTree":
        return check_bad_tree(g, out)
    if problem == "badGraph":
        return check_bad_graph(g, out)
    if problem == "pi":
        return check_pi(g, out)
    raise ValueError(f"unknown problem {problem!r}")


def componentwise_validity(problem: str, g: LabeledGraph, out) -> bool:
    """Whether validity on ``g`` equals validity on every connected component checked alone."""
    out = _outputs(out)
    whole = not check(problem, g, out)
    parts = True
    for comp in components(g):
        sub = g.induced(comp)
        if check(problem, sub, {u: out[u] for u in comp}):
            parts = False
    return whole == parts
