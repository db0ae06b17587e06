"""Array form of a Pi instance for checking many output vectors quickly.

Outputs are integer codes over the node order of ``LabeledGraph.csr()``:
0 is bot (never a valid Pi output), 1..9 the non-bot bad-graph outputs,
10 + 2b + x the pairs (b, x) with x = 1 for yes, 14 = no and 15 = yes.
Rules 2 to 7 are evaluated by the ``pi_rule_masks`` kernel; rule 1 only
depends on the bad-graph part of the output, so its verdict is memoized.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from . import labels as lb
from .constraints.problems import BadGraphFlags, check_bad_graph
from .graph import LabeledGraph

CODES = {lb.BOT: 0}
for _i, _o in enumerate(lb.BAD_GRAPH_NONBOT):
    CODES[_o] = 1 + _i
for _b in (0, 1):
    for _x, _name in ((0, lb.NO), (1, lb.YES)):
        CODES[lb.pair(_b, _name)] = 10 + 2 * _b + _x
CODES[lb.NO] = 14
CODES[lb.YES] = 15
LABELS = {c: o for o, c in CODES.items()}

RULE_BITS = {2: 2, 3: 3, 4: 4, 5: 5, 6: 6, 7: 7}


def pair_code(bit, yes):
    return 10 + 2 * np.asarray(bit, dtype=np.int64) + np.asarray(yes, dtype=np.int64)


class CompiledInstance:
    def __init__(self, g: LabeledGraph):
        self.g = g
        ids, index, _, _ = g.csr()
        self.ids = ids
        self.index = index
        n = len(ids)
        self.is_grid = np.zeros(n, dtype=np.int8)
        self.bit_in = np.zeros(n, dtype=np.int8)
        self.right = np.full(n, -1, dtype=np.int64)
        self.chl = np.full(n, -1, dtype=np.int64)
        self.chr_ = np.full(n, -1, dtype=np.int64)
        self.par = np.full(n, -1, dtype=np.int64)
        for i, u in enumerate(ids.tolist()):
            inp = g.input(u)
            self.is_grid[i] = lb.is_grid_node(inp)
            self.bit_in[i] = lb.pi_bit(inp)
            for arr, lab in ((self.right, "gridEdge:R"), (self.chl, "treeEdge:ChL"),
                             (self.chr_, "treeEdge:ChR"), (self.par, "treeEdge:P")):
                v = g.port(u, lab)
                if v is not None:
                    arr[i] = index[v]
        self._rule1: dict[bytes, bool] = {}
        self._flags = None

    @classmethod
    def of(cls, g: LabeledGraph) -> "CompiledInstance":
        key = ("compiled-pi",)
        if key not in g.cache:
            g.cache[key] = cls(g)
        return g.cache[key]

    @property
    def flags(self) -> BadGraphFlags:
        if self._flags is None:
            self._flags = BadGraphFlags(self.g)
        return self._flags

    def encode(self, outputs) -> np.ndarray:
        try:
            return np.array([CODES[outputs[int(u)]] for u in self.ids], dtype=np.int8)
        except KeyError as e:
            raise ValueError(f"output outside the Pi universe: {e}") from None

    def decode(self, codes) -> dict[int, str]:
        return {int(u): LABELS[int(c)] for u, c in zip(self.ids, codes)}

    def rule1_ok(self, codes: np.ndarray) -> bool:
        bg = np.where((codes >= 1) & (codes <= 9), codes, 0).astype(np.int8)
        key = bg.tobytes()
        if key not in self._rule1:
            out = {int(u): LABELS[int(c)] for u, c in zip(self.ids, bg)}
            self._rule1[key] = not check_bad_graph(self.g, out, self.flags)
        return self._rule1[key]

    def masks(self, codes: np.ndarray) -> np.ndarray:
        return kernels.pi_rule_masks(np.ascontiguousarray(codes, dtype=np.int8), self.is_grid, self.bit_in,
                                     self.right, self.chl, self.chr_, self.par)

    def valid(self, codes: np.ndarray) -> bool:
        codes = np.asarray(codes, dtype=np.int8)
        if codes.min(initial=1) <= 0 or codes.max(initial=0) > 15:
            raise ValueError("output outside the Pi universe")
        if self.masks(codes).any():
            return False
        return self.rule1_ok(codes)


def fast_valid(g: LabeledGraph, outputs) -> bool:
    ci = CompiledInstance.of(g)
    codes = outputs if isinstance(outputs, np.ndarray) else ci.encode(outputs)
    return ci.valid(codes)
