import random

import pytest
from hypothesis import given, strategies as st

from lcllab import labels as lb
from lcllab.algorithms import solve_bad_graph, solve_bad_tree
from lcllab.constraints import check_bad_graph, check_bad_tree, check_grid, check_tree, check_vgrid
from lcllab.constraints.structure import GRID_RADIUS, TREE_RADIUS
from lcllab.generators import (CORRUPTIONS, Corruption, FamilyParams, corrupt, family_graph, gen_family_instance,
                               gen_grid, gen_tree, label_vertical)
from lcllab.graph import GRID, TREE, LabeledGraph, project
from matrix import COMPLETENESS


def all_bot(g):
    return {u: lb.BOT for u in g.nodes}


# generators

def test_tree_counts():
    assert gen_tree(1).n == 1 and gen_tree(1).m == 0
    assert gen_tree(3).m == 10
    for ell in range(1, 9):
        assert gen_tree(ell).n == 2 ** ell - 1


def test_grid_counts():
    assert gen_grid(1, 1).n == 1
    for h, w in [(2, 2), (3, 5), (8, 4)]:
        g = gen_grid(h, w)
        assert g.m == h * (w - 1) + w * (h - 1)


def test_vertical_labeling_is_the_diagonal():
    g = label_vertical(gen_grid(4, 2))
    assert sum(lab == "1" for lab in g.inputs.values()) == 2
    with pytest.raises(ValueError):
        label_vertical(gen_grid(2, 4))


def test_family_counts_and_params():
    g = gen_family_instance(FamilyParams(2, 2))
    assert g.n == 14
    with pytest.raises(ValueError):
        gen_family_instance(FamilyParams(3, 9))
    with pytest.raises(ValueError):
        gen_family_instance(FamilyParams(0, 1))


def test_generators_are_deterministic():
    assert gen_tree(4, seed=3) == gen_tree(4, seed=3)
    assert family_graph(3, 5, {1: 1}, 7) == family_graph(3, 5, {1: 1}, 7)
    assert family_graph(3, 5, {}, 7) != family_graph(3, 5, {}, 8)


def test_input_bits_land_on_the_right_column():
    g = gen_family_instance(FamilyParams(2, 3, {0: 1, 3: 1}, 0))
    ones = [u for u in g.nodes if lb.pi_bit(g.input(u)) == 1]
    assert len(ones) == 2
    assert all(g.port(u, "gridEdge:R") is None and lb.is_grid_node(g.input(u)) for u in ones)


# completeness

@pytest.mark.parametrize("ell", range(1, 13))
def test_canonical_trees_pass(ell):
    assert check_tree(gen_tree(ell)).ok


@pytest.mark.parametrize("ell,w", COMPLETENESS)
def test_canonical_grids_and_family_pass(ell, w):
    h = 2 ** ell
    assert check_grid(gen_grid(h, w)).ok
    assert check_vgrid(label_vertical(gen_grid(h, w))).ok
    g = family_graph(ell, w, {}, ell)
    assert check_bad_graph(g, all_bot(g)).ok
    assert check_vgrid(project(g, GRID)).ok
    assert check_tree(project(g, TREE)).ok


# checker behaviour on small hand-built graphs

def test_tree_rules_catch_a_missing_child():
    g = gen_tree(2)
    root = next(u for u in g.nodes if g.port(u, "P") is None)
    child = g.port(root, "ChR")
    h = LabeledGraph(g.inputs, [e for e in g.edges() if {e[0], e[1]} != {root, child}])
    assert not check_tree(h).ok


def test_unpaired_grid_labels_fail():
    g = LabeledGraph({1: "0", 2: "0"}, [(1, 2, "R", "R")])
    assert not check_grid(g).ok


def test_violations_record_their_rule_radius():
    g, _ = corrupt(gen_tree(4, seed=1), Corruption("delete-edge", seed=2))
    rep = check_tree(g)
    assert rep
    for v in rep:
        assert v.radius == TREE_RADIUS[int(v.rule.split(".")[1])]
    g, _ = corrupt(gen_grid(4, 4), Corruption("delete-edge", seed=2))
    for v in check_grid(g):
        assert v.radius == GRID_RADIUS[int(v.rule.split(".")[1])]


def test_foreign_labels_are_rejected():
    with pytest.raises(ValueError):
        check_tree(LabeledGraph({1: "0", 2: "0"}, [(1, 2, "U", "D")]))


@given(st.integers(1, 5), st.integers(0, 10 ** 6), st.sampled_from(("delete-edge", "relabel-half-edge")))
def test_checkers_are_pure(ell, seed, kind):
    g = gen_tree(ell, seed=seed)
    if g.m:
        g, _ = corrupt(g, Corruption(kind, seed=seed))
    assert check_tree(g) == check_tree(g)


# corruptions

FAMILY_BASES = [(2, 3), (2, 4), (3, 4), (3, 8)]


def broken(g: LabeledGraph) -> bool:
    """Nonempty all-bot report or a certified non-bot output."""
    if not check_bad_graph(g, all_bot(g)).ok:
        return True
    out = solve_bad_graph(g)
    return check_bad_graph(g, out).ok and any(o != lb.BOT for o in out.values())


@pytest.mark.parametrize("kind", CORRUPTIONS)
@pytest.mark.parametrize("ell,w", FAMILY_BASES)
def test_every_corruption_breaks_a_family_instance(kind, ell, w):
    for seed in range(3):
        g, record = corrupt(family_graph(ell, w, {}, seed), Corruption(kind, seed=seed))
        assert record["kind"] == kind
        assert broken(g), record


@pytest.mark.parametrize("kind", ("delete-edge", "relabel-half-edge", "mark-node"))
def test_every_tree_corruption_breaks_the_tree(kind):
    for seed in range(10):
        g, record = corrupt(gen_tree(4, seed=seed), Corruption(kind, seed=seed))
        out = solve_bad_tree(g)
        assert check_bad_tree(g, out).ok
        assert not check_tree(g).ok or any(o != lb.BOT for o in out.values()), record


def test_inapplicable_corruptions_raise():
    with pytest.raises(ValueError):
        corrupt(gen_tree(3), Corruption("drop-vertical-ones"))
    with pytest.raises(ValueError):
        corrupt(family_graph(1, 1, {}, 0), Corruption("torus-wrap-horizontal"))
    with pytest.raises(ValueError):
        Corruption("no-such-kind")


def test_torus_wrap_keeps_grid_rules_but_breaks_the_family():
    g, _ = corrupt(family_graph(2, 4, {}, 0), Corruption("torus-wrap-horizontal"))
    assert not check_tree(project(g, TREE)).ok
    out = solve_bad_graph(g)
    assert check_bad_graph(g, out).ok
    assert all(o != lb.BOT for o in out.values())


def test_drop_vertical_ones_marks_whole_columns():
    g, _ = corrupt(family_graph(2, 3, {}, 0), Corruption("drop-vertical-ones"))
    out = solve_bad_graph(g)
    assert set(out.values()) == {lb.VERT_ERROR}


def test_horizontal_grid_never_keeps_all_bot():
    rng = random.Random(0)
    for ell in (1, 2, 3):
        g, _ = corrupt(family_graph(ell, 2, {}, rng.randrange(100)), Corruption("horizontal-grid", seed=1))
        out = solve_bad_graph(g)
        assert check_bad_graph(g, out).ok
        assert any(o != lb.BOT for o in out.values())
