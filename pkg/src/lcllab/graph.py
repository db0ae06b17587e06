"""Immutable half-edge labeled graphs, the path-follow function, projections and balls."""

from __future__ import annotations

import json
from collections import deque
from types import MappingProxyType
from typing import Callable, Iterable, Iterator, Mapping

import numpy as np

from . import labels as lb

RAW, TREE, GRID = "raw", "tree", "grid"
_PROJECTIONS = {RAW: None, TREE: lb.val_tree, GRID: lb.val_grid}

# a label present on two or more half-edges of the same node
_AMBIGUOUS = -1


class LabeledGraph:
    """Simple undirected graph with a label on every node and on every half-edge.

    ``nodes`` maps node id to its input label; ``edges`` yields
    ``(u, v, label_u, label_v)`` where ``label_u`` sits on the half-edge
    ``(u, {u, v})``.
    """

    __slots__ = ("_inputs", "_adj", "_meta", "_ports", "_csr", "_cache")

    def __init__(self, nodes: Mapping[int, str] | Iterable[tuple[int, str]],
                 edges: Iterable[tuple[int, int, str, str]] = (), meta: Mapping | None = None):
        inputs = dict(nodes.items() if isinstance(nodes, Mapping) else nodes)
        adj: dict[int, list] = {}
        for u, lab in inputs.items():
            if not isinstance(u, (int, np.integer)) or isinstance(u, bool) or u < 1:
                raise ValueError(f"node ids must be positive integers, got {u!r}")
            if not isinstance(lab, str):
                raise ValueError(f"node input must be a string, got {lab!r}")
            adj[int(u)] = []
        inputs = {int(u): lab for u, lab in inputs.items()}
        seen = set()
        for u, v, lu, lv in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if u not in adj or v not in adj:
                raise ValueError(f"edge ({u}, {v}) has an unknown endpoint")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ValueError(f"parallel edge between {u} and {v}")
            seen.add(key)
            adj[u].append((v, lu, lv))
            adj[v].append((u, lv, lu))
        self._inputs = MappingProxyType(inputs)
        self._adj = {u: tuple(nb) for u, nb in adj.items()}
        self._meta = MappingProxyType(dict(meta or {}))
        self._ports = None
        self._csr = None
        self._cache = {}

    # basic accessors
    @property
    def n(self) -> int:
        return len(self._inputs)

    @property
    def nodes(self) -> tuple[int, ...]:
        return tuple(sorted(self._inputs))

    @property
    def inputs(self) -> Mapping[int, str]:
        return self._inputs

    @property
    def meta(self) -> Mapping:
        return self._meta

    @property
    def cache(self) -> dict:
        """Scratch space for values derived from this (immutable) graph."""
        return self._cache

    def input(self, u: int) -> str:
        return self._inputs[u]

    def __contains__(self, u) -> bool:
        return u in self._inputs

    def __len__(self) -> int:
        return len(self._inputs)

    def neighbors(self, u: int) -> tuple[tuple[int, str, str], ...]:
        """``(v, label at u, label at v)`` for every edge at ``u``."""
        return self._adj[u]

    def degree(self, u: int) -> int:
        return len(self._adj[u])

    def edges(self) -> Iterator[tuple[int, int, str, str]]:
        for u in sorted(self._adj):
            for v, lu, lv in self._adj[u]:
                if u < v:
                    yield u, v, lu, lv

    @property
    def m(self) -> int:
        return sum(len(nb) for nb in self._adj.values()) // 2

    def half_edge_labels(self, u: int) -> list[str]:
        return [lu for _, lu, _ in self._adj[u]]

    def has_label(self, u: int, label: str) -> bool:
        return label in self._port_map(u)

    def _port_map(self, u: int) -> dict:
        if self._ports is None:
            self._ports = {}
        pm = self._ports.get(u)
        if pm is None:
            pm = {}
            for v, lu, _ in self._adj[u]:
                pm[lu] = _AMBIGUOUS if lu in pm else v
            self._ports[u] = pm
        return pm

    def port(self, u: int, label: str) -> int | None:
        """The unique neighbor reached over the half-edge of ``u`` labeled ``label``."""
        v = self._port_map(u).get(label)
        return None if v is None or v == _AMBIGUOUS else v

    def label_between(self, u: int, v: int) -> str | None:
        for w, lu, _ in self._adj[u]:
            if w == v:
                return lu
        return None

    # derived graphs
    def with_inputs(self, updates: Mapping[int, str]) -> "LabeledGraph":
        inputs = dict(self._inputs)
        for u, lab in updates.items():
            if u not in inputs:
                raise KeyError(u)
            inputs[u] = lab
        return LabeledGraph(inputs, self.edges(), self._meta)

    def with_meta(self, **meta) -> "LabeledGraph":
        merged = dict(self._meta)
        merged.update(meta)
        return LabeledGraph(self._inputs, self.edges(), merged)

    def induced(self, keep: Iterable[int]) -> "LabeledGraph":
        keep = set(keep)
        nodes = {u: self._inputs[u] for u in sorted(keep)}
        edges = [(u, v, lu, lv) for u, v, lu, lv in self.edges() if u in keep and v in keep]
        return LabeledGraph(nodes, edges, self._meta)

    def csr(self):
        """``(ids, index, indptr, indices)`` arrays for the compiled kernels."""
        if self._csr is None:
            ids = np.array(self.nodes, dtype=np.int64)
            index = {int(u): i for i, u in enumerate(ids)}
            indptr = np.zeros(len(ids) + 1, dtype=np.int64)
            for i, u in enumerate(ids):
                indptr[i + 1] = indptr[i] + len(self._adj[int(u)])
            indices = np.empty(indptr[-1], dtype=np.int64)
            pos = 0
            for u in ids:
                for v, _, _ in self._adj[int(u)]:
                    indices[pos] = index[v]
                    pos += 1
            self._csr = (ids, index, indptr, indices)
        return self._csr

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return (dict(self._inputs) == dict(other._inputs)
                and _edge_key_set(self) == _edge_key_set(other))

    def __hash__(self):
        return hash((frozenset(self._inputs.items()), frozenset(_edge_key_set(self))))

    def __reduce__(self):
        # rebuilt from plain data so worker processes can receive graphs; caches are dropped
        return (LabeledGraph, (dict(self._inputs), list(self.edges()), dict(self._meta)))

    def __repr__(self) -> str:
        return f"LabeledGraph(n={self.n}, m={self.m})"


def _edge_key_set(g: LabeledGraph) -> set:
    out = set()
    for u, v, lu, lv in g.edges():
        out.add((u, v, lu, lv))
    return out


def _mapper(projection: str):
    try:
        return _PROJECTIONS[projection]
    except KeyError:
        raise ValueError(f"unknown projection {projection!r}") from None


def step(g: LabeledGraph, u: int, label: str, projection: str = RAW,
         allowed: Callable[[int], bool] | None = None) -> int | None:
    """One step of ``follow``; ``allowed`` restricts the visible neighbors."""
    if projection == RAW and allowed is None:
        return g.port(u, label)
    fmap = _mapper(projection)
    found = None
    for v, lu, _ in g.neighbors(u):
        if allowed is not None and not allowed(v):
            continue
        mapped = lu if fmap is None else fmap(lu)
        if mapped == label:
            if found is not None:
                return None
            found = v
    return found


def follow(g: LabeledGraph, u: int, labels: Iterable[str], projection: str = RAW) -> int | None:
    """Walk from ``u`` along half-edges carrying ``labels`` in order.

    Each step must be unique at the current node; otherwise (or if some
    step has no matching half-edge) the result is ``None``.
    """
    if u not in g:
        raise KeyError(u)
    _mapper(projection)
    cur = u
    for lab in labels:
        cur = step(g, cur, lab, projection)
        if cur is None:
            return None
    return cur


def project(g: LabeledGraph, which: str) -> LabeledGraph:
    """Subgraph of edges whose type contains ``treeEdge`` (or ``gridEdge``), relabeled.

    Every node is kept, including the ones left without edges.
    """
    if which not in (TREE, GRID):
        raise ValueError(f"projection must be 'tree' or 'grid', got {which!r}")
    key = ("project", which)
    if key in g.cache:
        return g.cache[key]
    kind = lb.TREE if which == TREE else lb.GRID
    fmap = _mapper(which)
    edges = []
    for u, v, lu, lv in g.edges():
        tu, tv = lb.label_type(lu), lb.label_type(lv)
        if tu == tv and kind in tu:
            edges.append((u, v, fmap(lu), fmap(lv)))
    out = LabeledGraph(g.inputs, edges, g.meta)
    g.cache[key] = out
    return out


def edge_type(g: LabeledGraph, u: int, v: int) -> frozenset:
    lu = g.label_between(u, v)
    lv = g.label_between(v, u)
    if lu is None:
        raise KeyError(f"no edge between {u} and {v}")
    tu, tv = lb.label_type(lu), lb.label_type(lv)
    return tu if tu == tv else frozenset()


def bfs_distances(g: LabeledGraph, u: int, r: int | None = None) -> dict[int, int]:
    """Hop distances from ``u`` to every node within ``r`` (all reachable nodes if None)."""
    from . import kernels

    if u not in g:
        raise KeyError(u)
    ids, index, indptr, indices = g.csr()
    maxr = -1 if r is None else int(r)
    found, dist = kernels.bfs_ball(indptr, indices, index[u], maxr)
    return dict(zip(np.asarray(ids)[found].tolist(), np.asarray(dist).tolist()))


class View:
    """The radius-``radius`` ball around ``center`` as seen by a LOCAL algorithm.

    Holds every node within ``radius`` hops and every edge with both ends in
    the ball.  Distances are computed lazily; walks that start at the center
    and use at most ``radius`` steps never need them.  Randomness and
    committed outputs are attached by the simulator.
    """

    def __init__(self, graph: LabeledGraph, center: int, radius: int, *, n: int | None = None,
                 shared=None, private=None, outputs: Mapping | None = None):
        if center not in graph:
            raise KeyError(center)
        if radius < 0:
            raise ValueError("radius must be non-negative")
        self._g = graph
        self.center = center
        self.radius = radius
        self.n = n
        self.shared = shared
        self._private = private
        self._outputs = outputs
        self._dist = None
        self._sub = None

    @property
    def distances(self) -> dict[int, int]:
        if self._dist is None:
            self._dist = bfs_distances(self._g, self.center, self.radius)
        return self._dist

    @property
    def nodes(self) -> frozenset:
        return frozenset(self.distances)

    def __contains__(self, v) -> bool:
        return v in self.distances

    def dist(self, v: int) -> int:
        return self.distances[v]

    @property
    def subgraph(self) -> LabeledGraph:
        if self._sub is None:
            self._sub = self._g.induced(self.distances)
        return self._sub

    def _check(self, v: int):
        if v != self.center and v not in self.distances:
            raise KeyError(f"node {v} is outside the view of {self.center}")

    def input(self, v: int) -> str:
        self._check(v)
        return self._g.input(v)

    def neighbors(self, v: int) -> list[tuple[int, str, str]]:
        self._check(v)
        d = self.distances
        if d.get(v, self.radius) < self.radius:
            return list(self._g.neighbors(v))
        return [e for e in self._g.neighbors(v) if e[0] in d]

    def follow(self, v: int, labels: Iterable[str], projection: str = RAW) -> int | None:
        """``follow`` restricted to the edges visible in this view."""
        self._check(v)
        labels = list(labels)
        bound = 0 if v == self.center else None
        cur = v
        for lab in labels:
            if bound is not None and bound < self.radius:
                cur = step(self._g, cur, lab, projection)
                bound += 1
            else:
                d = self.distances
                if cur not in d:
                    return None
                cur = step(self._g, cur, lab, projection, allowed=d.__contains__)
                bound = None
            if cur is None:
                return None
        return cur

    def private(self, v: int):
        self._check(v)
        if self._private is None:
            raise LookupError("no private randomness in this model")
        return self._private(v)

    def output(self, v: int):
        """Output already committed at ``v`` (sequential models), or None."""
        self._check(v)
        if self._outputs is None:
            return None
        return self._outputs.get(v)


def ball(g: LabeledGraph, u: int, r: int) -> View:
    if u not in g:
        raise KeyError(u)
    if r < 0:
        raise ValueError("radius must be non-negative")
    v = View(g, u, r, n=g.n)
    v.distances
    return v


def components(g: LabeledGraph, drop: Callable[[int, int, str, str], bool] | None = None) -> list[list[int]]:
    """Connected components after removing edges for which ``drop`` holds.

    Blocks are sorted internally and ordered by their minimum node id.
    """
    parent = {u: u for u in g.inputs}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, lu, lv in g.edges():
        if drop is not None and drop(u, v, lu, lv):
            continue
        ru, rv = find(u), find(v)
        if ru != rv:
            if ru < rv:
                parent[rv] = ru
            else:
                parent[ru] = rv
    blocks: dict[int, list[int]] = {}
    for u in sorted(g.inputs):
        blocks.setdefault(find(u), []).append(u)
    return sorted(blocks.values(), key=lambda b: b[0])


def drop_horizontal(u, v, lu, lv) -> bool:
    """Edge predicate for columns: drop edges carrying a horizontal grid value."""
    return lb.val_grid(lu) in ("L", "R") or lb.val_grid(lv) in ("L", "R")


def drop_non_tree(u, v, lu, lv) -> bool:
    """Edge predicate keeping only edges whose type contains treeEdge."""
    tu, tv = lb.label_type(lu), lb.label_type(lv)
    return not (tu == tv and lb.TREE in tu)


def disjoint_union(g1: LabeledGraph, g2: LabeledGraph) -> LabeledGraph:
    """Union with the ids of ``g2`` shifted past the largest id of ``g1``."""
    shift = max(g1.inputs, default=0)
    nodes = dict(g1.inputs)
    for u, lab in g2.inputs.items():
        nodes[u + shift] = lab
    edges = list(g1.edges()) + [(u + shift, v + shift, lu, lv) for u, v, lu, lv in g2.edges()]
    return LabeledGraph(nodes, edges)


def relabel_ids(g: LabeledGraph, mapping: Mapping[int, int]) -> LabeledGraph:
    nodes = {mapping[u]: lab for u, lab in g.inputs.items()}
    edges = [(mapping[u], mapping[v], lu, lv) for u, v, lu, lv in g.edges()]
    return LabeledGraph(nodes, edges, g.meta)


# JSON

def to_dict(g: LabeledGraph, meta: Mapping | None = None) -> dict:
    out = {}
    meta = {k: v for k, v in (meta or {}).items() if not k.startswith("_")}
    if meta:
        out["meta"] = meta
    out["n"] = g.n
    out["nodes"] = [{"id": u, "input": g.input(u)} for u in g.nodes]
    out["edges"] = [{"u": u, "v": v, "label_u": lu, "label_v": lv} for u, v, lu, lv in g.edges()]
    return out


def from_dict(data: Mapping) -> LabeledGraph:
    try:
        nodes = [(int(rec["id"]), rec["input"]) for rec in data["nodes"]]
        edges = [(int(e["u"]), int(e["v"]), e["label_u"], e["label_v"]) for e in data["edges"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed graph record: {exc}") from exc
    g = LabeledGraph(nodes, edges, data.get("meta"))
    if "n" in data and int(data["n"]) != g.n:
        raise ValueError(f"header says n={data['n']} but {g.n} nodes are listed")
    return g


def dumps(g: LabeledGraph, meta: Mapping | None = None) -> str:
    return json.dumps(to_dict(g, meta if meta is not None else dict(g.meta) or None))


def loads(text: str) -> LabeledGraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return from_dict(data)


def read_graph(path) -> LabeledGraph:
    with open(path) as fh:
        return loads(fh.read())


def write_graph(g: LabeledGraph, path, meta: Mapping | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(g, meta))


def reference_bfs(g: LabeledGraph, u: int, r: int) -> dict[int, int]:
    """Plain deque BFS on the adjacency lists, independent of the kernels."""
    dist = {u: 0}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        if dist[x] == r:
            continue
        for y, _, _ in g.neighbors(x):
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist
