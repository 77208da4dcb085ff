from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from conftest import tripartite_books
from tistri.graph import GeneratorSpec, count_triangles_tripartite_brute, generate
from tistri.oracle import ContractError
from tistri.sparsify import (ColoringAssignment, color_triple, color_vertices, general_sparsify,
                             is_properly_colored, tripartite_sparsify)


def test_color_triple_wraps():
    assert color_triple(1, 1) == {1, 2, 3}
    assert color_triple(2, 2) == {2, 4, 6}
    assert color_triple(5, 2) == {5, 1, 3}
    with pytest.raises(ContractError):
        color_triple(0, 2)


def test_base_colors_of_one_class_give_one_triple():
    k = 3
    for i in range(1, k + 1):
        assert color_triple(i, k) == color_triple(i + k, k) == color_triple(i + 2 * k, k)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_proper_coloring_probability_is_exact(k):
    hits = sum(is_properly_colored((0, 1, 2), ColoringAssignment(k, dict(enumerate(cols))))
               for cols in product(range(1, 3 * k + 1), repeat=3))
    assert Fraction(hits, (3 * k) ** 3) == Fraction(2, 9 * k * k)


def test_color_vertices_range(rng):
    ca = color_vertices(range(200), 2, rng)
    assert set(ca.colors.values()) <= set(range(1, 7))
    assert len(ca.colors) == 200


@pytest.mark.parametrize("k", [1, 2, 3])
def test_general_sparsify_keeps_exactly_proper_triangles(k):
    g = generate(GeneratorSpec("gnp", n=40, p=0.4), k)
    for seed in range(5):
        res = general_sparsify(range(g.n), k, np.random.default_rng(seed))
        colors = {}
        for i, (x, y, z) in enumerate(res.parts):
            colors.update({v: i + 1 for v in x})
            colors.update({v: k + i + 1 for v in y})
            colors.update({v: 2 * k + i + 1 for v in z})
        ca = ColoringAssignment(k, colors)
        kept = sum(count_triangles_tripartite_brute(g, *p) for p in res.parts)
        proper = sum(is_properly_colored(tri, ca) for tri in g.triangles.tolist())
        assert kept == proper
        assert res.scale == Fraction(9 * k * k, 2)


def test_general_sparsify_k1_covers_all_vertices(rng):
    res = general_sparsify(range(9), 1, rng)
    assert len(res.parts) == 1
    assert sorted(v for part in res.parts[0] for v in part) == list(range(9))
    assert res.scale == Fraction(9, 2)


def test_tripartite_sparsify_partitions_each_side(rng):
    g, a, b, c = tripartite_books(30, 2)
    res = tripartite_sparsify(a, b, c, 3, rng)
    assert res.scale == 9 and len(res.parts) == 3
    for side, orig in enumerate((a, b, c)):
        assert sorted(v for part in res.parts for v in part[side]) == sorted(orig)


def test_tripartite_sparsify_rejects_overlap(rng):
    with pytest.raises(ContractError):
        tripartite_sparsify([1, 2], [2], [3], 3, rng)
    with pytest.raises(ContractError):
        tripartite_sparsify([1], [2], [3], 0, rng)


def test_tripartite_sparsify_mean_is_close():
    g, a, b, c = tripartite_books(60, 2)
    rng = np.random.default_rng(2)
    vals = [9 * sum(count_triangles_tripartite_brute(g, *p) for p in tripartite_sparsify(a, b, c, 3, rng).parts)
            for _ in range(600)]
    assert abs(np.mean(vals) - 120) <= 0.1 * 120
