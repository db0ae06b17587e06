"""Acceptance suite: one test per criterion, each recording a PASS/FAIL verdict line.

Run with ``pytest tests/test_acceptance.py -v``; the verdicts are repeated in
an "acceptance criteria" section at the end of the pytest output.
"""

import itertools
import math
import random
import time

import numpy as np

from enumeration import grid_graphs, tree_graphs
from lcllab import algorithms as A
from lcllab import experiments as ex
from lcllab import labels as lb
from lcllab.algorithms.adversary import slocal_independence
from lcllab.algorithms.common import default_locality
from lcllab.constraints import (check, check_bad_graph, check_bad_tree, check_grid, check_pi, check_tree, check_vgrid,
                                componentwise_validity)
from lcllab.generators import FamilyLayout, family_graph, gen_grid, gen_tree, label_vertical
from lcllab.graph import components
from lcllab.oracles import grid_shape, is_family_member, is_tree_like, is_vertical_grid
from lcllab.simulator import Model, run_local
from matrix import COMPLETENESS, corruption_matrix, multi_component

# every width for the small heights, the shared sample for the large ones
COMPLETENESS_FULL = sorted(set(COMPLETENESS) | {(ell, w) for ell in range(1, 5) for w in range(1, 2 ** ell + 1)})


def test_certificate_completeness(criterion):
    t0 = time.time()
    bad = []
    for ell in range(1, 11):
        if not check_tree(gen_tree(ell, seed=ell)).ok:
            bad.append(("tree", ell))
    for ell, w in COMPLETENESS_FULL:
        h = 2 ** ell
        grid = gen_grid(h, w, seed=w)
        if not check_grid(grid).ok:
            bad.append(("grid", ell, w))
        if not check_vgrid(label_vertical(grid)).ok:
            bad.append(("vgrid", ell, w))
        g = family_graph(ell, w, {}, seed=ell + w)
        if not check_bad_graph(g, {u: lb.BOT for u in g.nodes}).ok:
            bad.append(("badGraph", ell, w))
    secs = time.time() - t0
    ok = not bad and secs < 60
    criterion(1, ok, f"{len(COMPLETENESS_FULL)} (ell, w) sizes up to ell=10, failures={bad[:5]}, {secs:.1f}s")
    assert ok


def _has_boundaries(g):
    """At least one node lacks D or U, and at least one node lacks L or R."""
    lacks = lambda labs: any(not all(g.has_label(u, x) for x in labs) for u in g.nodes)
    return lacks(("D", "U")) and lacks(("L", "R"))


def test_certificate_soundness(criterion):
    t0 = time.time()
    counter = []
    trees = set()
    for pg in tree_graphs(8):
        g = pg.to_graph()
        if check_tree(g).ok:
            if not is_tree_like(g):
                counter.append(("tree", g))
            trees.add(g.n)
    shapes, vshapes = set(), set()
    excluded = labelings = 0
    for pg in grid_graphs(9):
        g = pg.to_graph()
        if not check_grid(g).ok:
            continue
        if not _has_boundaries(g):
            excluded += 1
            continue
        shape = grid_shape(g)
        if shape is None:
            counter.append(("grid", g))
            continue
        shapes.add(shape)
        nodes = list(g.nodes)
        for bits in itertools.product("01", repeat=g.n):
            if "1" not in bits:
                continue
            labelings += 1
            vg = g.with_inputs(dict(zip(nodes, bits)))
            if check_vgrid(vg).ok:
                if not is_vertical_grid(vg):
                    counter.append(("vgrid", vg))
                vshapes.add(shape)
    secs = time.time() - t0
    want_shapes = {(h, w) for h in range(1, 10) for w in range(1, 10) if h * w <= 9}
    want_v = {s for s in want_shapes if s[0] >= s[1]}
    ok = not counter and trees == {1, 3, 7} and shapes == want_shapes and vshapes == want_v and secs < 600
    criterion(2, ok, f"{len(counter)} counterexamples; tree sizes {sorted(trees)}, {len(shapes)} grid shapes, "
                     f"{len(vshapes)} vertical shapes from {labelings} bit labelings; "
                     f"{excluded} boundary-free grids excluded; {secs:.0f}s")
    assert ok


def _pi_expected(g, lay, inputs):
    """Valid Pi outputs predicted from row-constant bits with at least one matching row."""
    h, w = lay.h, lay.w
    out = set()
    for bits in itertools.product((0, 1), repeat=h):
        if not any(b == inputs[y] for y, b in enumerate(bits)):
            continue
        # the right column's yes/no is forced; every other column just needs one yes to feed its root
        free = [x for x in range(w - 1)]
        for flags in itertools.product(itertools.product((lb.NO, lb.YES), repeat=h), repeat=len(free)):
            if any(lb.YES not in col for col in flags):
                continue
            sol = {}
            for y, b in enumerate(bits):
                sol[lay.grid(w - 1, y)] = lb.pair(b, lb.YES if b == inputs[y] else lb.NO)
                for x, col in zip(free, flags):
                    sol[lay.grid(x, y)] = lb.pair(b, col[y])
            # tree nodes say yes iff some grid leaf below says yes
            for x in range(w):
                for l in range(lay.ell - 1, -1, -1):
                    for k in range(2 ** l):
                        kids = [lay.grid(x, 2 * k + j) if l == lay.ell - 1 else lay.tree(x, l + 1, 2 * k + j)
                                for j in (0, 1)]
                        yes = any(sol[c].endswith(lb.YES) for c in kids)
                        sol[lay.tree(x, l, k)] = lb.YES if yes else lb.NO
            out.add(tuple(sorted(sol.items())))
    return out


def _valid_set(g, universe_at, checker):
    nodes = list(g.nodes)
    found = set()
    for combo in itertools.product(*(universe_at(u) for u in nodes)):
        out = dict(zip(nodes, combo))
        if checker(g, out).ok:
            found.add(tuple(sorted(out.items())))
    return found


def test_forced_bot_uniqueness(criterion):
    deviations = []
    tree = gen_tree(2)
    valid = _valid_set(tree, lambda u: lb.BAD_TREE_OUTPUTS, check_bad_tree)
    if valid != {tuple((u, lb.BOT) for u in sorted(tree.nodes))}:
        deviations.append(("badTree", valid))
    fam = family_graph(1, 1, {}, 0)
    valid = _valid_set(fam, lambda u: lb.BAD_GRAPH_OUTPUTS, check_bad_graph)
    if valid != {tuple((u, lb.BOT) for u in sorted(fam.nodes))}:
        deviations.append(("badGraph", valid))
    checked = 0
    # the (1, 1) instance over the whole output universe
    for inputs in itertools.product((0, 1), repeat=2):
        g = family_graph(1, 1, dict(enumerate(inputs)), 0)
        valid = _valid_set(g, lambda u: lb.PI_OUTPUTS, check_pi)
        checked += len(lb.PI_OUTPUTS) ** g.n
        if valid != _pi_expected(g, FamilyLayout.of(g), inputs):
            deviations.append(("pi 1x1", inputs))
    # a two-column instance, so the row-constant bit is exercised, over pair and yes/no outputs
    for inputs in itertools.product((0, 1), repeat=2):
        g = family_graph(1, 2, dict(enumerate(inputs)), 0)
        lay = FamilyLayout.of(g)
        at = lambda u: lb.PAIR_OUTPUTS if lay.is_grid(u) else (lb.NO, lb.YES)
        valid = _valid_set(g, at, check_pi)
        checked += 4 ** 4 * 2 ** 2
        if valid != _pi_expected(g, lay, inputs):
            deviations.append(("pi 1x2", inputs))
    ok = not deviations
    criterion(3, ok, f"{len(deviations)} deviations; all-bot forced for badTree and badGraph, "
                     f"{checked} Pi assignments compared with the row characterization")
    assert ok


def test_shared_randomness_upper_bound(criterion):
    t0 = time.time()
    rows = ex.shared_upper(ex.ExperimentSpec("shared-upper", trials=2000))
    a, b = ex.locality_fit(rows)
    ns = [r["n"] for r in rows]
    ok = all(r["passed"] for r in rows) and a <= 4 and min(ns) <= 200 and max(ns) >= 40000
    rates = ", ".join(f"n={r['n']}: {r['rate']:.4f}" for r in rows)
    criterion(4, ok, f"2000 trials per size, {rates}; locality fit a={a:.2f} b={b:.2f}; {time.time() - t0:.0f}s")
    assert ok


def test_private_baselines_collapse(criterion):
    t0 = time.time()
    rows = ex.private_lower(ex.ExperimentSpec("private-lower", trials=300, estimate_trials=100))
    judged = [r for r in rows if r["alg"] in ex.BASELINES and r["passed"] != ""]
    sizes = {(r["ell"], r["w"]) for r in judged}
    ok = (all(r["passed"] for r in judged) and {(6, 64), (7, 128)} <= sizes
          and all(r["n"] >= 200 for r in judged))
    rates = ", ".join(f"{r['alg']}@n={r['n']}: {r['rate']:.3f}" for r in judged)
    gated = sorted({(r["ell"], r["w"]) for r in rows if r["passed"] == ""})
    criterion(5, ok, f"{rates}; gated sizes {gated}; {time.time() - t0:.0f}s")
    assert ok


def test_sequential_adversaries(criterion):
    t0 = time.time()
    g = family_graph(6, 64, ex.random_inputs(6, 3), 0)
    fixture_rows = list(range(0, 64, 8))
    rep = slocal_independence(A.get("slocal-row-greedy"), g, 400, seed=11, rows=fixture_rows)
    rejected = rep.rejected(0.01)
    online = ex.online_lower(ex.ExperimentSpec("online-lower", trials=3))
    judged = [r for r in online if r["passed"] != ""]
    ok = not rejected and judged and all(r["rate"] == 0 for r in judged)
    pmin = min(rep.pvalues.values())
    names = ", ".join(f"{r['alg']}={r['rate']}" for r in judged)
    gated = [r["alg"] for r in online if r["passed"] == ""]
    criterion(6, ok, f"chi-square over {len(fixture_rows)} rows x 400 runs, min p={pmin:.3f}, rejected {rejected}; "
                     f"online validity {names}; gated {gated}; {time.time() - t0:.0f}s")
    assert ok


def test_bad_graph_pipeline(criterion):
    failures = []
    xs, ys = [], []
    for name, g in corruption_matrix(50):
        res = run_local(A.get("bad-graph"), g, Model("local-det"))
        if not check_bad_graph(g, res.outputs).ok:
            failures.append((name, "invalid"))
        bot = [u for u in g.nodes if res.outputs[u] == lb.BOT]
        for comp in components(g.induced(bot)) if bot else []:
            if not is_family_member(g.induced(comp)):
                failures.append((name, "bot component outside the family"))
        if res.localityUsed > default_locality(g.n):
            failures.append((name, f"locality {res.localityUsed}"))
        xs.append(math.log2(g.n))
        ys.append(res.localityUsed)
    a, b = np.polyfit(xs, ys, 1)
    ok = not failures
    criterion(7, ok, f"50 corrupted instances, failures={failures[:3]}; locality <= 4*ceil(log2 n)+8 everywhere, "
                     f"max {max(ys)}, fit a={a:.2f} b={b:.2f}")
    assert ok


def test_padding_invariance(criterion):
    rows = ex.union_demo(ex.ExperimentSpec("union-demo", trials=1000, paddings=(1, 10, 100)))
    withheld = [r for r in rows if r["note"] == "know_n=False"]
    ok = len(withheld) == 3 and all(r["passed"] for r in withheld)
    rates = ", ".join(f"padding {r['padding']}: {1 - r['rate']:.3f}" for r in withheld)
    criterion(8, ok, f"failure rates with n withheld over 1000 trials, {rates}")
    assert ok


def _perturb(rng, out, universe):
    out = dict(out)
    for u in rng.sample(sorted(out), k=min(2, len(out))):
        out[u] = rng.choice(universe)
    return out


def _same_violations(problem, g, out):
    whole = set(check(problem, g, out))
    parts = set()
    for comp in components(g):
        parts |= set(check(problem, g.induced(comp), {u: out[u] for u in comp}))
    return whole == parts


def test_componentwise_checkability(criterion):
    rng = random.Random(2024)
    bad = []
    instances = mixed = 0
    for i in range(100):
        trees = multi_component(rng, rng.randint(2, 4), "tree")
        fams = multi_component(rng, rng.randint(2, 4), "family")
        instances += 1
        cases = [
            ("badTree", trees, A.solve_bad_tree(trees), lb.BAD_TREE_OUTPUTS),
            ("badGraph", fams, A.solve_bad_graph(fams), lb.BAD_GRAPH_OUTPUTS),
            ("pi", fams, run_local(A.get("pi-shared"), fams, Model("local-shared", i), check=False).outputs,
             lb.PI_OUTPUTS),
        ]
        for problem, g, out, universe in cases:
            for o in (out, _perturb(rng, out, universe)):
                if not (componentwise_validity(problem, g, o) and _same_violations(problem, g, o)):
                    bad.append((problem, i))
                whole_ok = check(problem, g, o).ok
                mixed += (not whole_ok) and any(
                    check(problem, g.induced(c), {u: o[u] for u in c}).ok for c in components(g))
    ok = not bad
    criterion(9, ok, f"{instances} multi-component instances x 3 problems (solver and perturbed outputs), "
                     f"{len(bad)} mismatches, {mixed} cases mixing valid and invalid components")
    assert ok


if __name__ == "__main__":
    import sys

    import pytest

    sys.exit(pytest.main([__file__, "-v"]))
