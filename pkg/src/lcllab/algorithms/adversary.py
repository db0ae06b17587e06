"""Input and order adversaries against randomized and sequential row solvers.

All of them work on family instances and exploit one fact: when the
locality is at most w/3, what the left end of a row outputs cannot depend
on the input at the right end.  So the adversary can learn (or predict) the
left output first and then pick the right input that disagrees with it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..generators import FamilyLayout, set_input_bits
from ..graph import LabeledGraph
from ..simulator.engine import Model, run_local, run_online_local, run_slocal
from ..simulator.randomness import derive_seed
from ..simulator.stats import independence_pvalue, wilson
from .sequential import committed_bit


class GateError(ValueError):
    """The algorithm sees too far for the adversary's independence argument."""


@dataclass
class AdversaryPlan:
    inputBits: dict[int, int]
    estimatedP: dict[int, float]
    trialsUsed: int
    localityUsed: int = 0
    intervals: dict[int, tuple[float, float]] = field(default_factory=dict)

    def apply(self, g: LabeledGraph) -> LabeledGraph:
        return set_input_bits(g, self.inputBits)


def _layout(g: LabeledGraph, square: bool) -> FamilyLayout:
    lay = FamilyLayout.of(g)
    if square and lay.w != lay.h:
        raise ValueError(f"this adversary needs a square grid, got w={lay.w}, h={lay.h}")
    return lay


def _gate(used: int, lay: FamilyLayout, what: str) -> None:
    if 3 * used > lay.w:
        raise GateError(f"{what} uses radius {used} > w/3 = {lay.w / 3:.1f}")


def blank_inputs(g: LabeledGraph) -> LabeledGraph:
    """The same instance with every right-end input set to 0."""
    lay = FamilyLayout.of(g)
    return set_input_bits(g, {u: 0 for u in lay.column(lay.w - 1)})


def local_model_for(alg, seed: int) -> Model:
    return Model("local-shared" if alg.randomness == "shared" else "local-private", seed)


def adversary_inputs(alg, g: LabeledGraph, trials: int, seed: int = 0) -> AdversaryPlan:
    """Estimate how often each row's left end outputs 0, then set the right ends against it.

    A row whose estimate is confidently below 1/2 (Wilson upper bound) gets
    right input 0, every other row gets 1.
    """
    lay = _layout(g, square=False)
    g0 = blank_inputs(g)
    left = lay.column(0)
    zeros = dict.fromkeys(left, 0)
    used = 0
    for i in range(trials):
        res = run_local(alg, g0, local_model_for(alg, derive_seed(seed, i)), check=False)
        used = max(used, res.localityUsed)
        _gate(used, lay, alg.name)
        out = res.outputs
        for u in left:
            zeros[u] += committed_bit(out[u]) == 0
    plan = AdversaryPlan({}, {}, trials, used)
    for y, u in enumerate(left):
        lo, hi = wilson(zeros[u], trials)
        plan.estimatedP[u] = zeros[u] / trials
        plan.intervals[u] = (lo, hi)
        plan.inputBits[lay.grid(lay.w - 1, y)] = 0 if hi < 0.5 else 1
    return plan


def adversary_order(model: str, g: LabeledGraph) -> list[int]:
    """Left column, right column (top to bottom), the other grid nodes, then tree nodes bottom-up."""
    if model not in ("slocal", "online-local"):
        raise ValueError(f"unknown sequential model {model!r}")
    lay = _layout(g, square=True)
    top_down = range(lay.h - 1, -1, -1)
    order = [lay.grid(0, y) for y in top_down]
    if lay.w > 1:
        order += [lay.grid(lay.w - 1, y) for y in top_down]
    order += [lay.grid(x, y) for x in range(1, lay.w - 1) for y in top_down]
    for l in range(lay.ell - 1, -1, -1):
        order += [lay.tree(x, l, k) for x in range(lay.w) for k in range(2 ** l)]
    return order


def _online_inputs(alg, g: LabeledGraph):
    lay = _layout(g, square=True)
    g0 = blank_inputs(g)
    res = run_online_local(alg, g0, adversary_order("online-local", g0), check=False)
    _gate(res.localityUsed, lay, alg.name)
    bits = {}
    for y in range(lay.h):
        o = committed_bit(res.outputs[lay.grid(0, y)])
        bits[lay.grid(lay.w - 1, y)] = 1 - (0 if o is None else o)
    return bits, res, g0


def adversary_online_inputs(alg, g: LabeledGraph) -> dict[int, int]:
    """Right-end inputs that contradict what the deterministic ``alg`` commits on the left column."""
    return _online_inputs(alg, g)[0]


@dataclass
class OnlineAttack:
    valid: bool
    left_unchanged: bool
    localityUsed: int


def online_attack(alg, g: LabeledGraph) -> OnlineAttack:
    """Run ``alg`` on the instance rigged by ``adversary_online_inputs`` in the adversary order."""
    lay = _layout(g, square=True)
    bits, first, g0 = _online_inputs(alg, g)
    rigged = set_input_bits(g0, bits)
    res = run_online_local(alg, rigged, adversary_order("online-local", rigged))
    same = all(first.outputs[u] == res.outputs[u] for u in lay.column(0))
    return OnlineAttack(bool(res.valid), same, res.localityUsed)


@dataclass
class IndependenceReport:
    tables: dict[int, np.ndarray]
    pvalues: dict[int, float]
    trials: int
    localityUsed: int

    def rejected(self, alpha: float = 0.01) -> list[int]:
        return [y for y, p in self.pvalues.items() if p <= alpha]


def slocal_independence(alg, g: LabeledGraph, trials: int, seed: int = 0, rows=None) -> IndependenceReport:
    """Per-row contingency tables of (left bit, right bit) under the adversary order.

    Only the two outer columns are processed (they come first in the order),
    which is all the left/right outputs can depend on.
    """
    lay = _layout(g, square=True)
    order = adversary_order("slocal", g)
    rows = list(range(lay.h)) if rows is None else list(rows)
    tables = {y: np.zeros((2, 2), dtype=np.int64) for y in rows}
    used = 0
    for i in range(trials):
        res = run_slocal(alg, g, order, Model("slocal-private", derive_seed(seed, i)), limit=2 * lay.h)
        used = max(used, res.localityUsed)
        _gate(used, lay, alg.name)
        for y in rows:
            a = committed_bit(res.outputs[lay.grid(0, y)])
            b = committed_bit(res.outputs[lay.grid(lay.w - 1, y)])
            if a is not None and b is not None:
                tables[y][a, b] += 1
    pv = {y: independence_pvalue(t) for y, t in tables.items()}
    return IndependenceReport(tables, pv, trials, used)


def row_output_bits(outputs, lay: FamilyLayout, x: int) -> list[int | None]:
    return [committed_bit(outputs[lay.grid(x, y)]) for y in range(lay.h)]


__all__ = ["AdversaryPlan", "GateError", "IndependenceReport", "OnlineAttack", "adversary_inputs",
           "adversary_online_inputs", "adversary_order", "blank_inputs", "local_model_for", "online_attack",
           "row_output_bits", "slocal_independence"]
