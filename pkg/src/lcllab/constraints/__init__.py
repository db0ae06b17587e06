"""Certificate checkers and problem validity checkers."""

from .problems import (
    BadGraphFlags,
    OutputAssignment,
    check,
    check_bad_graph,
    check_bad_tree,
    check_pi,
    componentwise_validity,
)
from .report import Violation, ViolationReport
from .structure import check_grid, check_tree, check_vgrid

__all__ = [
    "BadGraphFlags", "OutputAssignment", "Violation", "ViolationReport",
    "check", "check_bad_graph", "check_bad_tree", "check_grid", "check_pi",
    "check_tree", "check_vgrid", "componentwise_validity",
]
