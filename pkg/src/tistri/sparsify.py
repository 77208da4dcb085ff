"""Random-coloring sparsification of a vertex set or of a tripartite triple."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .oracle import ContractError

VertexSet = tuple[int, ...]


@dataclass(frozen=True)
class ColoringAssignment:
    k: int
    colors: Mapping[int, int]  # vertex -> color in 1..3k


def color_triple(i: int, k: int) -> frozenset[int]:
    """The three colors ``{i, i+k, i+2k}`` (cyclically, 1-based) a proper triangle must use."""
    m = 3 * k
    if not 1 <= i <= m:
        raise ContractError(f"base color must be in [1, {m}], got {i}")
    return frozenset((i, 1 + (i + k - 1) % m, 1 + (i + 2 * k - 1) % m))


def color_vertices(vs: Iterable[int], k: int, rng: np.random.Generator) -> ColoringAssignment:
    if k < 1:
        raise ContractError(f"k must be >= 1, got {k}")
    vs = list(vs)
    draws = rng.integers(1, 3 * k + 1, size=len(vs)).tolist()
    return ColoringAssignment(k, dict(zip(vs, draws)))


def is_properly_colored(tri: Sequence[int], ca: ColoringAssignment) -> bool:
    cols = {ca.colors[v] for v in tri}
    if len(cols) != 3:
        return False
    # the triple {i, i+k, i+2k} is determined by any of its members
    return cols == color_triple(min(cols), ca.k)


@dataclass(frozen=True)
class SparsifyResult:
    parts: tuple[tuple[VertexSet, VertexSet, VertexSet], ...]
    scale: Fraction


def _classes(vs: Sequence[int], labels: np.ndarray, count: int) -> list[VertexSet]:
    buckets: list[list[int]] = [[] for _ in range(count)]
    for v, lab in zip(vs, labels.tolist()):
        buckets[lab].append(v)
    return [tuple(sorted(b)) for b in buckets]


def general_sparsify(vertices: Iterable[int], k: int, rng: np.random.Generator) -> SparsifyResult:
    """Color with [3k] and keep the k triples (V_i, V_{k+i}, V_{2k+i}); scale is 9k^2/2."""
    ca = color_vertices(sorted(set(vertices)), k, rng)
    vs = list(ca.colors)
    classes = _classes(vs, np.array([ca.colors[v] - 1 for v in vs], dtype=np.int64), 3 * k)
    parts = tuple((classes[i], classes[k + i], classes[2 * k + i]) for i in range(k))
    return SparsifyResult(parts, Fraction(9 * k * k, 2))


def tripartite_sparsify(a: Iterable[int], b: Iterable[int], c: Iterable[int], k: int,
                        rng: np.random.Generator) -> SparsifyResult:
    """Split each side into k uniform random groups; child i is (A_i, B_i, C_i), scale k^2."""
    if k < 1:
        raise ContractError(f"k must be >= 1, got {k}")
    sides = [sorted(set(s)) for s in (a, b, c)]
    if len(set().union(*sides)) != sum(len(s) for s in sides):
        raise ContractError("vertex sets must be pairwise disjoint")
    split = [_classes(s, rng.integers(0, k, size=len(s)), k) for s in sides]
    parts = tuple((split[0][i], split[1][i], split[2][i]) for i in range(k))
    return SparsifyResult(parts, Fraction(k * k))
