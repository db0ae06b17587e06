"""LOCAL, SLOCAL and online-LOCAL execution engines.

An algorithm only ever sees what a ``Context`` hands it: balls requested
through ``ctx.view(r)`` (metered, and capped at the declared locality),
the model's randomness, committed outputs (sequential models) and the
revealed transcript (online model).  Algorithms may also provide a
``batch`` route that computes all outputs and per-node radii at once; the
test-suite checks it against the per-node route.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from ..constraints.problems import BadGraphFlags, check_bad_graph, check_bad_tree
from ..graph import LabeledGraph, View, bfs_distances, relabel_ids
from .randomness import PrivateRandomness, ReadOnceStream, SharedRandomness

MODEL_KINDS = ("local-det", "local-private", "local-shared", "slocal-private", "online-local-det")


class LocalityViolation(RuntimeError):
    pass


@dataclass
class Model:
    kind: str
    seed: int = 0
    idSeed: int | None = None
    know_n: bool = True

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"unknown model {self.kind!r}")


class ConstantPrivate:
    """Private strings fixed to all zeros; what a deterministic model offers."""

    class _Zero:
        def bit(self, i=0):
            return 0

        def bits(self, k):
            return [0] * k

        def uniform(self, i=0):
            return 0.0

    seed = None

    def stream(self, node):
        return self._Zero()

    def bit(self, node, i=0):
        return 0

    def bits_for(self, nodes, i=0):
        import numpy as np

        return np.zeros(len(nodes), dtype=np.int8)


@dataclass
class Env:
    """What a batch route may use: the same information as the union of all views."""
    n: int | None
    cap: int
    shared: object = None
    private: object = None


class Context:
    def __init__(self, g: LabeledGraph, node: int, cap: int, env: Env, outputs=None, stream=None):
        self._g = g
        self.node = node
        self.cap = cap
        self._env = env
        self._outputs = outputs
        self._stream = stream
        self._views: dict[int, View] = {}
        self.used = 0

    @property
    def n(self):
        return self._env.n

    @property
    def shared(self):
        return self._env.shared

    def view(self, r: int) -> View:
        if r > self.cap:
            raise LocalityViolation(f"node {self.node} asked for radius {r} > T = {self.cap}")
        self.used = max(self.used, r)
        if r not in self._views:
            priv = None
            if self._env.private is not None:
                priv = self._env.private.stream
            self._views[r] = View(self._g, self.node, r, n=self._env.n, shared=self._env.shared,
                                  private=priv, outputs=self._outputs)
        return self._views[r]

    def memo(self, key, fn, table=None):
        """``fn(self)`` cached per (graph, cap, node, key), with its radius re-metered on reuse.

        Only for functions of the ball that use neither randomness nor
        committed outputs, so repeated runs on one graph can share them.
        ``table(g, cap)``, if given, fills the cache for every node at once
        with ``{node: (value, radius)}``; it must agree with ``fn``.
        """
        store = self._g.cache.setdefault(("memo", self.cap), {})
        k = (self.node, key)
        if k not in store and table is not None:
            for v, hit in table(self._g, self.cap).items():
                store[(v, key)] = hit
        if k in store:
            val, r = store[k]
        else:
            before, self.used = self.used, 0
            val = fn(self)
            r = self.used
            self.used = before
            store[k] = (val, r)
        self.view(r)
        return val

    def read_bit(self) -> int:
        """Next bit of the global read-once stream (sequential models only)."""
        if self._stream is None:
            raise LookupError("no read-once stream in this model")
        return self._stream.next_bit()


class NodeAlgorithm:
    """Base class: subclasses set ``name``/``problem`` and implement ``compute``."""

    name = "algorithm"
    problem = "pi"
    randomness = "none"  # none | private | shared

    def locality(self, n: int) -> int:
        raise NotImplementedError

    def compute(self, ctx: Context) -> str:
        raise NotImplementedError

    batch = None  # optional: batch(g, env) -> (outputs, radii)

    def validate(self, g: LabeledGraph, outputs) -> bool:
        return validate(self.problem, g, outputs)


class FunctionAlgorithm(NodeAlgorithm):
    """Wrap a plain ``View -> output`` function with a fixed radius."""

    def __init__(self, fn: Callable[[View], str], radius: int, problem: str = "pi", name: str = "function",
                 randomness: str = "none"):
        self.fn, self.radius, self.problem, self.name = fn, radius, problem, name
        self.randomness = randomness

    def locality(self, n):
        return self.radius

    def compute(self, ctx):
        return self.fn(ctx.view(self.radius))


def validate(problem: str, g: LabeledGraph, outputs) -> bool:
    if problem == "pi":
        from ..fastpi import fast_valid

        return fast_valid(g, outputs)
    if problem == "badGraph":
        key = ("flags",)
        if key not in g.cache:
            g.cache[key] = BadGraphFlags(g)
        return not check_bad_graph(g, outputs, g.cache[key])
    if problem == "badTree":
        return not check_bad_tree(g, outputs)
    raise ValueError(f"no checker for problem {problem!r}")


class RunResult:
    """Outputs, per-node radii and validity of one execution.

    ``outputs`` may be given as a dict or as a code vector of a compiled Pi
    instance; the dict is then built on first access.
    """

    def __init__(self, outputs, radii: dict, valid, order: Sequence[int] | None = None, decoder=None):
        self._outputs = outputs
        self._decoder = decoder
        self.radii = radii
        self.valid = valid
        self.order = list(order) if order is not None else None

    @property
    def outputs(self) -> dict:
        if self._decoder is not None:
            self._outputs = self._decoder(self._outputs)
            self._decoder = None
        return self._outputs

    @property
    def raw(self):
        return self._outputs

    @property
    def localityUsed(self) -> int:
        return max(self.radii.values(), default=0)

    @property
    def transcript(self) -> list[tuple[int, int, str]]:
        order = self.order if self.order is not None else sorted(self.radii)
        out = self.outputs
        return [(u, self.radii[u], out[u]) for u in order if u in out]

    def to_dict(self) -> dict:
        return {"valid": self.valid, "localityUsed": self.localityUsed,
                "outputs": {str(u): o for u, o in sorted(self.outputs.items())},
                "transcript": self.transcript}


def _env(model: Model, g: LabeledGraph, cap: int, alg: NodeAlgorithm) -> Env:
    n = g.n if model.know_n else None
    shared = private = None
    if model.kind == "local-shared":
        shared = SharedRandomness(model.seed)
    elif model.kind in ("local-private", "slocal-private"):
        private = PrivateRandomness(model.seed)
    else:
        private = ConstantPrivate()
    return Env(n=n, cap=cap, shared=shared, private=private)


def _relabel(g: LabeledGraph, id_seed: int):
    new = random.Random(id_seed).sample(range(1, g.n * g.n + 1), g.n)
    fwd = dict(zip(g.nodes, new))
    return relabel_ids(g, fwd), fwd


def run_local(alg: NodeAlgorithm, g: LabeledGraph, model: Model, engine: str = "auto",
              check: bool = True, nodes: Iterable[int] | None = None) -> RunResult:
    if model.kind not in ("local-det", "local-private", "local-shared"):
        raise ValueError(f"run_local needs a LOCAL model, got {model.kind!r}")
    if model.idSeed is not None:
        h, fwd = _relabel(g, model.idSeed)
        inner = run_local(alg, h, Model(model.kind, model.seed, None, model.know_n), engine, check=False,
                          nodes=None if nodes is None else [fwd[u] for u in nodes])
        back = {v: u for u, v in fwd.items()}
        outs = {back[v]: o for v, o in inner.outputs.items()}
        radii = {back[v]: r for v, r in inner.radii.items()}
        valid = alg.validate(g, outs) if check and nodes is None else None
        return RunResult(outs, radii, valid)
    if alg.randomness == "private" and model.kind == "local-shared":
        raise ValueError(f"{alg.name} needs private randomness, which local-shared does not provide")
    cap = alg.locality(g.n)
    env = _env(model, g, cap, alg)
    use_batch = engine in ("auto", "batch") and alg.batch is not None and nodes is None
    if engine == "batch" and alg.batch is None:
        raise ValueError(f"{alg.name} has no batch route")
    decoder = None
    if use_batch:
        outs, radii = alg.batch(g, env)
        worst = max(radii.values(), default=0)
        if worst > cap:
            raise LocalityViolation(f"{alg.name} used radius {worst} > T = {cap}")
        if not isinstance(outs, dict):
            from ..fastpi import CompiledInstance

            decoder = CompiledInstance.of(g).decode
    else:
        outs, radii = {}, {}
        for u in (g.nodes if nodes is None else nodes):
            ctx = Context(g, u, cap, env)
            outs[u] = alg.compute(ctx)
            radii[u] = ctx.used
    valid = None
    if check and nodes is None:
        valid = alg.validate(g, outs)
    return RunResult(outs, radii, valid, decoder=decoder)


def run_slocal(alg: NodeAlgorithm, g: LabeledGraph, order: Sequence[int], model: Model,
               check: bool = True, limit: int | None = None) -> RunResult:
    """Process nodes one at a time; each sees committed outputs inside its ball.

    ``limit`` stops after that many nodes (a prefix run; validity is then None).
    """
    if model.kind != "slocal-private":
        raise ValueError(f"run_slocal needs the slocal-private model, got {model.kind!r}")
    order = list(order)
    if sorted(order) != list(g.nodes):
        raise ValueError("order must be a permutation of the node ids")
    steps = order if limit is None else order[:limit]
    if not hasattr(alg, "sequential"):
        local = run_local(alg, g, Model("local-private", model.seed, model.idSeed, model.know_n), check=False)
        outs = {u: local.outputs[u] for u in steps}
        radii = {u: local.radii[u] for u in steps}
    else:
        cap = alg.locality(g.n)
        env = _env(model, g, cap, alg)
        stream = ReadOnceStream(model.seed)
        outs, radii = {}, {}
        for u in steps:
            ctx = Context(g, u, cap, env, outputs=outs, stream=stream)
            outs[u] = alg.sequential(ctx)
            radii[u] = ctx.used
    valid = alg.validate(g, outs) if check and limit is None else None
    return RunResult(outs, radii, valid, order=steps)


class Transcript:
    """Everything revealed so far in an online run: nodes, edges and committed outputs."""

    def __init__(self, g: LabeledGraph):
        self._g = g
        self.known: set[int] = set()
        self._complete: set[int] = set()
        self._adj: dict[int, dict[int, tuple]] = {}
        self.outputs: dict[int, str] = {}
        self.order: list[int] = []

    def reveal(self, center: int, radius: int) -> None:
        dist = bfs_distances(self._g, center, radius)
        fresh = dist.keys() - self._complete
        self.known.update(fresh)
        for v in fresh:
            d = dist[v]
            row = self._adj.setdefault(v, {})
            if d < radius:
                for e in self._g.neighbors(v):
                    row[e[0]] = e
                self._complete.add(v)
            else:
                for e in self._g.neighbors(v):
                    if e[0] in dist:
                        row[e[0]] = e

    def input(self, v: int) -> str:
        if v not in self.known:
            raise KeyError(f"node {v} has not been revealed")
        return self._g.input(v)

    def neighbors(self, v: int) -> list[tuple[int, str, str]]:
        if v not in self.known:
            raise KeyError(f"node {v} has not been revealed")
        return list(self._adj[v].values())

    def port(self, v: int, label: str) -> int | None:
        hits = [w for w, lv, _ in self.neighbors(v) if lv == label]
        return hits[0] if len(hits) == 1 else None


class OnlineContext(Context):
    def __init__(self, g, node, cap, env, transcript: Transcript):
        super().__init__(g, node, cap, env, outputs=transcript.outputs)
        self.transcript = transcript


def run_online_local(alg: NodeAlgorithm, g: LabeledGraph, order: Sequence[int],
                     model: Model | None = None, check: bool = True) -> RunResult:
    """Deterministic online-LOCAL: reveal the radius-T ball of each node in turn, commit at once."""
    model = model or Model("online-local-det")
    if model.kind != "online-local-det":
        raise ValueError(f"run_online_local needs the online-local-det model, got {model.kind!r}")
    if alg.randomness == "private":
        raise ValueError(f"{alg.name} is randomized; the online engine is deterministic")
    order = list(order)
    if sorted(order) != list(g.nodes):
        raise ValueError("order must be a permutation of the node ids")
    cap = alg.locality(g.n)
    if not hasattr(alg, "online"):
        local = run_local(alg, g, Model("local-det", model.seed, model.idSeed, model.know_n), check=False)
        outs = {u: local.outputs[u] for u in order}
        radii = {u: local.radii[u] for u in order}
    else:
        env = _env(Model("local-det", model.seed), g, cap, alg)
        tr = Transcript(g)
        radii = {}
        for u in order:
            tr.reveal(u, cap)
            ctx = OnlineContext(g, u, cap, env, tr)
            tr.outputs[u] = alg.online(ctx)
            tr.order.append(u)
            # the whole revealed ball is visible through the transcript
            radii[u] = cap
        outs = tr.outputs
    valid = alg.validate(g, outs) if check else None
    return RunResult(dict(outs), radii, valid, order=order)
