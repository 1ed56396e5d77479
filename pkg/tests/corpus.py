"""Seeded map corpus shared by the oracle and acceptance tests."""
from itertools import product

import numpy as np

from nexcert.gallery import (
    example_sup_face,
    half,
    midpoint_map,
    min_clip,
    random_affine_contraction,
    random_maxplus,
    random_minmax,
    random_sup_pwa,
    shrink_sqrt,
)
from nexcert.mapexpr import normalize_topical
from nexcert.polynorm import builtin_norm


def disjoint_pairs(n):
    """Every ordered pair (K, L) of disjoint subsets with nonempty union."""
    for labels in product((0, 1, 2), repeat=n):
        K = frozenset(i for i, v in enumerate(labels) if v == 1)
        L = frozenset(i for i, v in enumerate(labels) if v == 2)
        if K | L:
            yield K, L


def oracle_corpus(seed=2024):
    """(name, map, norm) triples mixing surjective and non-surjective cases."""
    rng = np.random.default_rng(seed)
    sup3 = builtin_norm("sup", 3)
    out = [(f"sup-face K={sorted(K)} L={sorted(L)}", example_sup_face(3, K, L), sup3) for K, L in disjoint_pairs(3)]
    out += [
        ("half", half(3), sup3),
        ("shrink-sqrt", shrink_sqrt(1), builtin_norm("sup", 1)),
        ("min-clip", min_clip((1, 1)), builtin_norm("sup", 2)),
        ("midpoint", midpoint_map(2), builtin_norm("sup", 2)),
    ]
    for k in range(15):
        out.append((f"sup-pwa-{k}", random_sup_pwa(3, rng, homogeneous=False), sup3))
    for k in range(10):
        out.append((f"affine-{k}", random_affine_contraction(3, rng), sup3))
    for k in range(10):
        n = 3 + k % 2
        T = random_maxplus(n, rng) if k % 2 == 0 else random_minmax(n, rng)
        out.append((f"topical-{k}", normalize_topical(T), builtin_norm("variation", n)))
    return out
