"""Label universes and the extractors on composite half-edge labels.

All labels are plain strings so that graphs serialize to JSON without a
translation table.  Composite labels of the bad-graph universe are spelled
``"treeEdge:L"``, ``"gridEdge:R"``, ``"gridEdge:D+treeEdge:L"`` and
``"gridEdge:U+treeEdge:R"``.
"""

from __future__ import annotations

BOT = "bot"

# half-edge labels
TREE_LABELS = ("L", "R", "P", "ChL", "ChR")
GRID_LABELS = ("L", "R", "U", "D")

TREE = "treeEdge"
GRID = "gridEdge"

BAD_GRAPH_LABELS = (
    tuple(f"{TREE}:{t}" for t in TREE_LABELS)
    + (f"{GRID}:L", f"{GRID}:R")
    + (f"{GRID}:D+{TREE}:L", f"{GRID}:U+{TREE}:R")
)

_TYPE: dict[str, frozenset] = {}
_VAL_T: dict[str, str] = {}
_VAL_G: dict[str, str] = {}
for _lab in BAD_GRAPH_LABELS:
    _parts = dict(p.split(":") for p in _lab.split("+"))
    _TYPE[_lab] = frozenset(_parts)
    if TREE in _parts:
        _VAL_T[_lab] = _parts[TREE]
    if GRID in _parts:
        _VAL_G[_lab] = _parts[GRID]


def label_type(label: str) -> frozenset:
    """The type t(label): the set of structures a bad-graph label belongs to."""
    try:
        return _TYPE[label]
    except KeyError:
        raise ValueError(f"not a bad-graph half-edge label: {label!r}") from None


def val_tree(label: str) -> str | None:
    return _VAL_T.get(label)


def val_grid(label: str) -> str | None:
    return _VAL_G.get(label)


def is_bad_graph_label(label: str) -> bool:
    return label in _TYPE


# node inputs
TREE_NODE = "treeNode"
GRID_NODE_0 = "treeNode,gridNode,0"
GRID_NODE_1 = "treeNode,gridNode,1"
BAD_GRAPH_INPUTS = (TREE_NODE, GRID_NODE_0, GRID_NODE_1)
PI_INPUTS = tuple(f"{x}|{b}" for x in BAD_GRAPH_INPUTS for b in (0, 1))


def bad_graph_input(node_input: str) -> str:
    """Strip the extra bit of a Pi input; bad-graph inputs pass through."""
    base = node_input.split("|", 1)[0]
    if base not in BAD_GRAPH_INPUTS:
        raise ValueError(f"not a bad-graph node input: {node_input!r}")
    return base


def pi_bit(node_input: str) -> int:
    base, _, bit = node_input.partition("|")
    if base not in BAD_GRAPH_INPUTS or bit not in ("0", "1"):
        raise ValueError(f"not a Pi node input: {node_input!r}")
    return int(bit)


def pi_input(base: str, bit: int) -> str:
    return f"{base}|{int(bit)}"


def is_grid_node(node_input: str) -> bool:
    return bad_graph_input(node_input) != TREE_NODE


def vgrid_bit(node_input: str) -> int:
    """The vertical-grid certificate bit carried by a grid node (0 for tree nodes)."""
    return 1 if bad_graph_input(node_input) == GRID_NODE_1 else 0


# outputs
ERROR = "Error"
TREE_ERROR = "TreeError"
GRID_ERROR = "GridError"
VERT_ERROR = "VertError"
POINTER_DIRS = ("L", "R", "P", "ChR")

BAD_TREE_OUTPUTS = (BOT, ERROR) + tuple(f"pointer:{p}" for p in POINTER_DIRS)
# (ColumnError, bot) is identified with bot
COLUMN_ERRORS = tuple(f"ColumnError:{x}" for x in BAD_TREE_OUTPUTS if x != BOT)
BAD_GRAPH_OUTPUTS = (BOT, ERROR, TREE_ERROR, GRID_ERROR, VERT_ERROR) + COLUMN_ERRORS
BAD_GRAPH_NONBOT = BAD_GRAPH_OUTPUTS[1:]

YES, NO = "yes", "no"
PAIR_OUTPUTS = tuple(f"{b},{x}" for b in (0, 1) for x in (NO, YES))
PI_OUTPUTS = BAD_GRAPH_NONBOT + PAIR_OUTPUTS + (NO, YES)

_BAD_GRAPH_SET = frozenset(BAD_GRAPH_OUTPUTS)
_PAIRS = {p: (int(p[0]), p[2:]) for p in PAIR_OUTPUTS}


def pointer(p: str) -> str:
    return f"pointer:{p}"


def pointer_dir(label: str) -> str | None:
    if label.startswith("pointer:"):
        return label[8:]
    return None


def column_error(inner: str) -> str:
    return BOT if inner == BOT else f"ColumnError:{inner}"


def column_inner(label: str) -> str | None:
    if label.startswith("ColumnError:"):
        return label[12:]
    return None


def is_bad_graph_output(label: str) -> bool:
    return label in _BAD_GRAPH_SET


def pair(bit: int, x: str) -> str:
    return f"{int(bit)},{x}"


def parse_pair(label: str) -> tuple[int, str] | None:
    return _PAIRS.get(label)
