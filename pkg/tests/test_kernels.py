"""Compiled kernels against their pure-Python twins, and the fast Pi validator against the checker."""

import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lcllab import _kernels_py as py
from lcllab import kernels
from lcllab import labels as lb
from lcllab.constraints import check_pi
from lcllab.fastpi import fast_valid
from lcllab.generators import family_graph

compiled = kernels.compiled_impl
needs_compiled = pytest.mark.skipif(compiled is None, reason="extension not built")


@st.composite
def csr_graphs(draw):
    n = draw(st.integers(1, 30))
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=3 * n))
    adj = [set() for _ in range(n)]
    for a, b in pairs:
        if a != b:
            adj[a].add(b)
            adj[b].add(a)
    indptr = np.zeros(n + 1, dtype=np.int64)
    for i in range(n):
        indptr[i + 1] = indptr[i] + len(adj[i])
    indices = np.array([y for i in range(n) for y in sorted(adj[i])], dtype=np.int64)
    return indptr, indices


@needs_compiled
@given(csr_graphs(), st.integers(-1, 6), st.data())
def test_bfs_ball_agrees(csr, r, data):
    indptr, indices = csr
    src = data.draw(st.integers(0, len(indptr) - 2))
    f1, d1 = compiled.bfs_ball(indptr, indices, src, r)
    f2, d2 = py.bfs_ball(indptr, indices, src, r)
    assert dict(zip(f1.tolist(), d1.tolist())) == dict(zip(f2.tolist(), d2.tolist()))


@needs_compiled
@given(csr_graphs(), st.data())
def test_component_reach_agrees(csr, data):
    indptr, indices = csr
    n = len(indptr) - 1
    k = data.draw(st.integers(1, n))
    comp = np.array([data.draw(st.integers(0, k - 1)) for _ in range(n)], dtype=np.int64)
    sizes = np.bincount(comp, minlength=k).astype(np.int64)
    src = np.arange(n, dtype=np.int64)
    assert compiled.component_reach(indptr, indices, comp, sizes, src).tolist() == \
        py.component_reach(indptr, indices, comp, sizes, src).tolist()


@needs_compiled
@given(st.integers(1, 40), st.integers(0, 2 ** 32))
def test_pi_rule_masks_agree(n, seed):
    # codes 0..15 are the whole domain: callers reject anything else first
    rng = np.random.default_rng(seed)
    out = rng.integers(0, 16, n).astype(np.int8)
    is_grid = rng.integers(0, 2, n).astype(np.int8)
    bit_in = rng.integers(0, 2, n).astype(np.int8)
    links = [rng.integers(-1, n, n).astype(np.int64) for _ in range(4)]
    a = compiled.pi_rule_masks(out, is_grid, bit_in, *links)
    b = py.pi_rule_masks(out, is_grid, bit_in, *links)
    assert np.asarray(a).tolist() == np.asarray(b).tolist()


def _random_pi_outputs(g, rng):
    out = {}
    for u in g.nodes:
        if rng.random() < 0.1:
            out[u] = rng.choice(lb.PI_OUTPUTS)
        elif lb.is_grid_node(g.input(u)):
            out[u] = rng.choice(lb.PAIR_OUTPUTS)
        else:
            out[u] = rng.choice((lb.YES, lb.NO))
    return out


@pytest.mark.parametrize("ell,w", [(1, 1), (1, 2), (2, 2), (2, 3), (3, 4)])
def test_fast_validator_matches_checker(ell, w):
    rng = random.Random(ell * 10 + w)
    for i in range(150):
        g = family_graph(ell, w, {y: rng.randint(0, 1) for y in range(2 ** ell)}, i)
        out = _random_pi_outputs(g, rng)
        assert fast_valid(g, out) == check_pi(g, out).ok
