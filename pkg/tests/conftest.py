from itertools import combinations

import numpy as np
import pytest

from tistri.graph import Graph


def naive_triangles(g: Graph) -> int:
    """Independent triangle count straight from the edge set."""
    e = g.edges
    return sum(1 for a, b, c in combinations(range(g.n), 3)
               if (a, b) in e and (a, c) in e and (b, c) in e)


def naive_tripartite(g: Graph, a, b, c) -> int:
    e = g.edges
    norm = lambda u, v: (u, v) if u < v else (v, u)
    return sum(1 for x in a for y in b for z in c
               if norm(x, y) in e and norm(x, z) in e and norm(y, z) in e)


def complete_tripartite(sizes, n):
    """K_{a,b,c} on the first a+b+c vertices, remaining vertices isolated and
    spread round-robin over the parts. Returns (graph, A, B, C)."""
    parts, base = [], 0
    for s in sizes:
        parts.append(list(range(base, base + s)))
        base += s
    edges = [(u, v) for i in range(3) for j in range(i + 1, 3) for u in parts[i] for v in parts[j]]
    rest = list(range(base, n))
    a, b, c = (parts[i] + rest[i::3] for i in range(3))
    return Graph.from_edges(n, edges), a, b, c


def tripartite_books(books: int, pages: int):
    """Books with spine (a_i, b_i) and pages c_ij; t(A, B, C) = books * pages."""
    a = list(range(books))
    b = list(range(books, 2 * books))
    c = list(range(2 * books, 2 * books + books * pages))
    edges = []
    for i in range(books):
        edges.append((a[i], b[i]))
        for j in range(pages):
            apex = c[i * pages + j]
            edges += [(a[i], apex), (b[i], apex)]
    return Graph.from_edges(2 * books + books * pages, edges), a, b, c


def random_disjoint_triple(rng: np.random.Generator, n: int):
    """Three non-empty disjoint subsets of range(n) (n >= 3), not necessarily covering."""
    labels = rng.integers(0, 4, size=n)
    labels[rng.choice(n, 3, replace=False)] = [0, 1, 2]
    return tuple([int(v) for v in np.flatnonzero(labels == i)] for i in range(3))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
