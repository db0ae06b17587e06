"""Compiled kernels against their pure-Python twins.

    python benchmarks/bench_kernels.py --ell 6 --w 64 --repeat 3

Times each kernel on one family instance, then one end-to-end pi-shared run
(fresh graph, so no cached analysis) with each backend swapped in.
"""

import argparse
import time
import timeit

import numpy as np

from lcllab import _kernels_py, kernels
from lcllab.algorithms import get
from lcllab.fastpi import CompiledInstance
from lcllab.generators import family_graph
from lcllab.graph import components
from lcllab.simulator import Model, run_local

try:
    from lcllab import _kernels
except ImportError:
    _kernels = None

NAMES = ("bfs_ball", "component_reach", "pi_rule_masks")


def kernel_inputs(g, radius):
    ids, index, indptr, indices = g.csr()
    blocks = components(g)
    comp = np.empty(len(ids), dtype=np.int64)
    for c, block in enumerate(blocks):
        for u in block:
            comp[index[u]] = c
    sizes = np.array([len(b) for b in blocks], dtype=np.int64)
    sources = np.arange(0, len(ids), max(1, len(ids) // 200), dtype=np.int64)
    ci = CompiledInstance.of(g)
    codes = np.random.default_rng(0).integers(10, 16, len(ids)).astype(np.int8)
    return {
        "bfs_ball": lambda impl: [impl.bfs_ball(indptr, indices, int(s), radius) for s in sources],
        "component_reach": lambda impl: impl.component_reach(indptr, indices, comp, sizes, sources),
        "pi_rule_masks": lambda impl: impl.pi_rule_masks(codes, ci.is_grid, ci.bit_in, ci.right, ci.chl, ci.chr_,
                                                         ci.par),
    }


def end_to_end(impl, ell, w):
    saved = {name: getattr(kernels, name) for name in NAMES}
    for name in NAMES:
        setattr(kernels, name, getattr(impl, name))
    try:
        g = family_graph(ell, w, {0: 1}, 0)
        t0 = time.perf_counter()
        run_local(get("pi-shared"), g, Model("local-shared", 1))
        return time.perf_counter() - t0
    finally:
        for name, fn in saved.items():
            setattr(kernels, name, fn)


def main():
    p = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    p.add_argument("--ell", type=int, default=6)
    p.add_argument("--w", type=int, default=64)
    p.add_argument("--radius", type=int, default=20)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    if _kernels is None:
        raise SystemExit("compiled extension not built; run `pip install --no-build-isolation -e .` first")
    g = family_graph(args.ell, args.w, {0: 1}, 0)
    print(f"instance ell={args.ell} w={args.w} n={g.n}")
    print(f"{'kernel':<18}{'compiled s':>12}{'python s':>12}{'speedup':>10}")
    for name, call in kernel_inputs(g, args.radius).items():
        fast = min(timeit.repeat(lambda: call(_kernels), number=1, repeat=args.repeat))
        slow = min(timeit.repeat(lambda: call(_kernels_py), number=1, repeat=args.repeat))
        print(f"{name:<18}{fast:>12.4f}{slow:>12.4f}{slow / fast:>9.1f}x")
    fast = min(end_to_end(_kernels, args.ell, args.w) for _ in range(args.repeat))
    slow = min(end_to_end(_kernels_py, args.ell, args.w) for _ in range(args.repeat))
    print(f"{'pi-shared run':<18}{fast:>12.4f}{slow:>12.4f}{slow / fast:>9.1f}x")


if __name__ == "__main__":
    main()
