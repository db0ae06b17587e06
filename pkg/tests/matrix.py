"""Instance matrices shared by several test modules."""

from __future__ import annotations

import random

from lcllab.generators import CORRUPTIONS, Corruption, corrupt, family_graph, gen_tree, glue
from lcllab.graph import LabeledGraph, disjoint_union

# (ell, w) pairs for completeness sweeps: every height up to 2^10, a few widths per height
COMPLETENESS = [(ell, w) for ell in range(1, 11) for w in sorted({1, 2, 3, min(2 ** ell, 16)}) if w <= 2 ** ell]

CORRUPTION_BASES = [(2, 3), (2, 4), (3, 4), (3, 8), (4, 5)]


def corruption_matrix(size: int = 50) -> list[tuple[str, LabeledGraph]]:
    """``size`` corrupted family instances cycling through every corruption kind, plus glued pairs."""
    out = []
    seed = 0
    while len(out) < size:
        for ell, w in CORRUPTION_BASES:
            for kind in CORRUPTIONS + ("glue",):
                if len(out) >= size:
                    return out
                base = family_graph(ell, w, {}, seed)
                if kind == "glue":
                    other = family_graph(ell, w, {}, seed + 1000)
                    g, _ = glue(base, other, seed)
                    out.append((f"glue {ell}x{w} s{seed}", g))
                    continue
                try:
                    g, _ = corrupt(base, Corruption(kind, seed=seed))
                except ValueError:
                    continue
                out.append((f"{kind} {ell}x{w} s{seed}", g))
        seed += 1
    return out


def multi_component(rng: random.Random, pieces: int, kind: str) -> LabeledGraph:
    """Disjoint union of canonical and corrupted pieces (family instances, or trees for ``kind='tree'``)."""
    g = None
    for _ in range(pieces):
        if kind == "tree":
            piece = gen_tree(rng.randint(1, 4), seed=rng.randrange(10 ** 6))
            if rng.random() < 0.5 and piece.m:
                piece, _ = corrupt(piece, Corruption(rng.choice(("delete-edge", "relabel-half-edge", "mark-node")),
                                                     seed=rng.randrange(10 ** 6)))
        else:
            ell = rng.randint(1, 3)
            w = rng.randint(1, 2 ** ell)
            bits = {y: rng.randint(0, 1) for y in range(2 ** ell)}
            piece = family_graph(ell, w, bits, rng.randrange(10 ** 6))
            if rng.random() < 0.5:
                kinds = [k for k in CORRUPTIONS if k != "torus-wrap-horizontal" or (w >= 3 and ell >= 2)]
                piece, _ = corrupt(piece, Corruption(rng.choice(kinds), seed=rng.randrange(10 ** 6)))
        g = piece if g is None else disjoint_union(g, piece)
    return g
