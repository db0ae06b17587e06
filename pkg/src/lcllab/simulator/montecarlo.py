from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable

from ..graph import LabeledGraph
from .engine import Model, NodeAlgorithm, run_local
from .randomness import derive_seed
from .stats import wilson


@dataclass
class SuccessEstimate:
    successes: int
    trials: int
    locality_used: int

    @property
    def rate(self) -> float:
        return self.successes / self.trials

    @property
    def interval(self) -> tuple[float, float]:
        return wilson(self.successes, self.trials)

    def __iter__(self):
        yield self.rate
        yield self.interval


def _trial_block(args):
    alg, factory, model, seeds = args
    ok = 0
    loc = 0
    for i, s in seeds:
        g = factory(i) if callable(factory) else factory
        res = run_local(alg, g, Model(model.kind, s, model.idSeed, model.know_n))
        ok += bool(res.valid)
        loc = max(loc, res.localityUsed)
    return ok, loc


def estimate_success(alg: NodeAlgorithm, instance: LabeledGraph | Callable[[int], LabeledGraph],
                     model: Model, trials: int, jobs: int = 1) -> SuccessEstimate:
    """Run ``trials`` independent executions with fresh seeds derived from ``model.seed``.

    ``instance`` is a fixed graph or a factory called with the trial index.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    seeds = [(i, derive_seed(model.seed, i)) for i in range(trials)]
    if jobs <= 1:
        ok, loc = _trial_block((alg, instance, model, seeds))
        return SuccessEstimate(ok, trials, loc)
    chunks = [seeds[k::jobs] for k in range(jobs)]
    with ProcessPoolExecutor(jobs) as pool:
        parts = list(pool.map(_trial_block, [(alg, instance, model, c) for c in chunks if c]))
    return SuccessEstimate(sum(p[0] for p in parts), trials, max(p[1] for p in parts))
