import itertools
import math

import pytest

from lcllab import algorithms as A
from lcllab import labels as lb
from lcllab.algorithms.common import default_locality
from lcllab.constraints import check_bad_tree, check_pi
from lcllab.generators import Corruption, FamilyLayout, corrupt, family_graph, gen_tree
from lcllab.simulator import Model, run_local, run_online_local, run_slocal
from matrix import corruption_matrix

SMALL = [(1, 1), (1, 2), (2, 2), (2, 3), (3, 4)]


def small_instances():
    out = [(f"family {ell}x{w}", family_graph(ell, w, {0: 1}, ell + w)) for ell, w in SMALL]
    # a cut-off grid leaf leaves a bot region outside the family
    out.append(("detached leaf", corrupt(family_graph(2, 1, {0: 1}, 5), Corruption("delete-edge", seed=5))[0]))
    return out + [(name, g) for name, g in corruption_matrix(27) if g.n <= 130]


INSTANCES = small_instances()


@pytest.mark.parametrize("name,g", INSTANCES, ids=[n for n, _ in INSTANCES])
def test_batch_and_view_routes_agree(name, g):
    for alg_name, kind in [("bad-graph", "local-det"), ("pi-shared", "local-shared"),
                           ("pi-private-zero", "local-det"), ("pi-private-rowrand", "local-private")]:
        alg = A.get(alg_name)
        for seed in range(2):
            m = Model(kind, seed)
            a = run_local(alg, g, m, engine="batch")
            b = run_local(alg, g, m, engine="view")
            assert a.outputs == b.outputs, alg_name
            assert a.radii == b.radii, alg_name
            assert a.valid == b.valid


@pytest.mark.parametrize("kind", ("delete-edge", "relabel-half-edge", "mark-node"))
def test_bad_tree_routes_agree(kind):
    for seed in range(4):
        g, _ = corrupt(gen_tree(4, seed=seed), Corruption(kind, seed=seed))
        a = run_local(A.get("bad-tree"), g, Model("local-det"), engine="batch")
        b = run_local(A.get("bad-tree"), g, Model("local-det"), engine="view")
        assert a.outputs == b.outputs and a.radii == b.radii
        assert a.valid and check_bad_tree(g, a.outputs).ok


@pytest.mark.parametrize("ell,w", [(2, 4), (3, 8)])
def test_sequential_solvers_prefilled_marking_matches_views(ell, w):
    g = family_graph(ell, w, {1: 1, 2: 1}, 5)
    order = A.adversary_order("slocal", g)
    a = run_slocal(A.SlocalRowGreedy(batch=True), g, order, Model("slocal-private", 3))
    b = run_slocal(A.SlocalRowGreedy(batch=False), family_graph(ell, w, {1: 1, 2: 1}, 5), order,
                   Model("slocal-private", 3))
    assert a.outputs == b.outputs and a.radii == b.radii
    c = run_online_local(A.OnlineRowCopy(batch=True), g, order)
    d = run_online_local(A.OnlineRowCopy(batch=False), family_graph(ell, w, {1: 1, 2: 1}, 5), order)
    assert c.outputs == d.outputs


def test_sequential_solvers_succeed_on_friendly_orders():
    g = family_graph(3, 8, {y: y % 2 for y in range(8)}, 0)
    lay = FamilyLayout.of(g)
    # right ends first, then the rest of each row, then the trees
    order = lay.column(lay.w - 1) + [u for x in range(lay.w - 2, -1, -1) for u in lay.column(x)]
    order += [u for u in g.nodes if u not in set(order)]
    assert run_slocal(A.SlocalRowGreedy(), g, order, Model("slocal-private", 1)).valid
    g0 = family_graph(3, 8, {}, 0)
    assert run_online_local(A.OnlineRowCopy(), g0, A.adversary_order("online-local", g0)).valid


@pytest.mark.parametrize("ell,w", [(1, 1), (1, 2), (2, 1), (2, 3)])
def test_shared_solver_fails_only_when_every_row_misses(ell, w):
    h = 2 ** ell
    for inputs in itertools.product((0, 1), repeat=h):
        g = family_graph(ell, w, dict(enumerate(inputs)), 0)
        for bits in itertools.product((0, 1), repeat=h):
            alg = A.PiShared(c_log=0, fixed_bits=bits)
            out = run_local(alg, g, Model("local-det")).outputs
            rules = check_pi(g, out).rules()
            assert rules <= {"pi.7"}
            assert bool(rules) == all(b != i for b, i in zip(bits, inputs))


def test_shared_solver_small_branch_is_deterministic():
    g = family_graph(2, 3, {0: 1, 3: 1}, 0)
    assert A.PiShared().small(g.n, 4)
    for seed in range(10):
        assert run_local(A.get("pi-shared"), g, Model("local-shared", seed)).valid


def test_all_zero_baseline_against_all_ones():
    g = family_graph(2, 3, {y: 1 for y in range(4)}, 0)
    assert not run_local(A.get("pi-private-zero"), g, Model("local-det")).valid
    assert run_local(A.get("pi-private-zero"), family_graph(2, 3, {}, 0), Model("local-det")).valid


def test_row_random_baseline_breaks_rows():
    g = family_graph(3, 8, {}, 0)
    fails = sum(not run_local(A.get("pi-private-rowrand"), g, Model("local-private", s)).valid for s in range(20))
    assert fails == 20


def test_registry():
    assert set(A.REGISTRY) >= {"pi-shared", "pi-private-zero", "pi-private-rowrand", "bad-graph", "bad-tree"}
    with pytest.raises(KeyError):
        A.get("nope")
    with pytest.raises(ValueError):
        A.PiPrivate("sometimes")


def test_locality_stays_logarithmic_on_the_matrix():
    worst = 0.0
    for name, g in corruption_matrix(50):
        res = run_local(A.get("bad-graph"), g, Model("local-det"))
        assert res.valid, name
        assert res.localityUsed < default_locality(g.n), name
        worst = max(worst, res.localityUsed / math.log2(g.n))
    assert worst <= 4
