"""The enumerator itself: canonical rooting and pruning must not lose any isomorphism class."""

import networkx as nx
import pytest

from enumeration import grid_graphs, tree_graphs
from lcllab.constraints import check_grid, check_tree
from lcllab.oracles import _digraph, isomorphic

CASES = [(tree_graphs, check_tree, 4), (grid_graphs, check_grid, 4)]


def classes(enum, keep=lambda g: True):
    buckets: dict[str, list] = {}
    for pg in enum:
        g = pg.to_graph()
        if not keep(g):
            continue
        key = nx.weisfeiler_lehman_graph_hash(_digraph(g), edge_attr="label") + f"/{g.n}"
        bucket = buckets.setdefault(key, [])
        if not any(isomorphic(g, h) for h in bucket):
            bucket.append(g)
    return [g for b in buckets.values() for g in b]


@pytest.mark.parametrize("family,checker,n", CASES, ids=["tree", "grid"])
def test_canonical_roots_keep_every_class(family, checker, n):
    assert len(classes(family(n, prune=False, canonical_root=True))) == \
        len(classes(family(n, prune=False, canonical_root=False)))


@pytest.mark.parametrize("family,checker,n", CASES, ids=["tree", "grid"])
def test_pruning_keeps_every_valid_class(family, checker, n):
    ok = lambda g: checker(g).ok
    pruned = classes(family(n), ok)
    full = classes(family(n, prune=False, canonical_root=False), ok)
    assert len(pruned) == len(full) > 0


@pytest.mark.parametrize("family", (tree_graphs, grid_graphs))
def test_generated_graphs_are_connected_and_port_consistent(family):
    for pg in family(4, prune=False, canonical_root=False):
        g = pg.to_graph()
        assert nx.is_connected(nx.Graph(_digraph(g)))
        for u in g.nodes:
            labels = [lab for _, lab, _ in g.neighbors(u)]
            assert len(labels) == len(set(labels))
