"""Undirected simple graphs, brute-force triangle statistics and test-family generators.

The brute-force routines here are the ground truth every estimator is checked
against; they see the whole graph, unlike anything that goes through the oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

Edge = tuple[int, int]


class GraphError(ValueError):
    """Invalid graph data or generator parameters."""


class EdgeListParseError(GraphError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``."""

    n: int
    edges: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise GraphError(f"vertex count must be non-negative, got {self.n}")
        normed = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={self.n}")
            normed.add(_norm(u, v))
        object.__setattr__(self, "edges", frozenset(normed))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        return cls(n, frozenset((int(u), int(v)) for u, v in edges))

    @cached_property
    def adj(self) -> tuple[frozenset[int], ...]:
        nbrs: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    @cached_property
    def sorted_adj(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(sorted(s)) for s in self.adj)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def triangles(self) -> np.ndarray:
        """All triangles as an ``(t, 3)`` int array with rows ``u < v < w``."""
        adj = self.adj
        out = []
        for u, v in sorted(self.edges):
            for w in adj[u] & adj[v]:
                if w > v:
                    out.append((u, v, w))
        out.sort()
        return np.array(out, dtype=np.int64).reshape(-1, 3)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))


@dataclass(frozen=True)
class TriangleStats:
    t: int
    delta_per_vertex: tuple[int, ...]
    delta_per_edge: dict[Edge, int]
    delta_E: int


def count_triangles_brute(g: Graph) -> TriangleStats:
    """Enumerate every triangle of ``g`` and tabulate per-vertex and per-edge counts."""
    per_vertex = [0] * g.n
    per_edge = dict.fromkeys(g.edges, 0)
    tris = g.triangles
    for u, v, w in tris.tolist():
        per_vertex[u] += 1
        per_vertex[v] += 1
        per_vertex[w] += 1
        per_edge[(u, v)] += 1
        per_edge[(u, w)] += 1
        per_edge[(v, w)] += 1
    delta_E = max(per_edge.values(), default=0)
    return TriangleStats(len(tris), tuple(per_vertex), per_edge, delta_E)


def _check_disjoint(*parts: Iterable[int]) -> list[frozenset[int]]:
    sets = [frozenset(p) for p in parts]
    total = sum(len(s) for s in sets)
    if len(frozenset().union(*sets)) != total:
        raise GraphError("vertex sets must be pairwise disjoint")
    return sets


def count_triangles_tripartite_brute(g: Graph, a: Iterable[int], b: Iterable[int],
                                     c: Iterable[int]) -> int:
    """Number of triangles with one corner in each of ``a``, ``b``, ``c``.

    Edges inside a single part never matter, since a counted triangle uses
    exactly one vertex per part.
    """
    a, b, c = _check_disjoint(a, b, c)
    adj = g.adj
    count = 0
    for x in a:
        nx = adj[x]
        for y in nx & b:
            count += len(nx & adj[y] & c)
    return count


# --------------------------------------------------------------------------
# edge-list I/O


def save_edge_list(g: Graph, path) -> None:
    lines = [str(g.n)]
    lines.extend(f"{u} {v}" for u, v in sorted(g.edges))
    Path(path).write_text("\n".join(lines) + "\n")


def parse_edge_list(text: str) -> Graph:
    """Parse the ``n`` header + ``u v`` lines format. Blank lines and ``#`` comments are skipped."""
    n = None
    edges: set[Edge] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if n is None:
            if len(fields) != 1:
                raise EdgeListParseError(lineno, f"expected vertex count, got {raw!r}")
            try:
                n = int(fields[0])
            except ValueError:
                raise EdgeListParseError(lineno, f"bad vertex count {fields[0]!r}") from None
            if n < 0:
                raise EdgeListParseError(lineno, "vertex count must be non-negative")
            continue
        if len(fields) != 2:
            raise EdgeListParseError(lineno, f"expected 'u v', got {raw!r}")
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise EdgeListParseError(lineno, f"non-integer vertex in {raw!r}") from None
        if u == v:
            raise EdgeListParseError(lineno, f"self-loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise EdgeListParseError(lineno, f"vertex id out of range [0, {n})")
        e = _norm(u, v)
        if e in edges:
            raise EdgeListParseError(lineno, f"duplicate edge {e}")
        edges.add(e)
    if n is None:
        raise EdgeListParseError(1, "missing vertex count")
    return Graph(n, frozenset(edges))


def load_edge_list(path) -> Graph:
    return parse_edge_list(Path(path).read_text())


# --------------------------------------------------------------------------
# generators

UNIT_DISTANCE_TOL = 1e-9


@dataclass(frozen=True)
class GeneratorSpec:
    """Family name plus parameters.

    Families:
      ``gnp``          Erdos-Renyi G(n, p)
      ``book``         vertex-disjoint books: one spine edge shared by ``d`` triangles, ``gadgets`` copies
      ``cliques``      disjoint copies of K_d (``copies``, default as many as fit)
      ``unit-distance`` unit-distance graph on ``points``
      ``progression``  tripartite Cayley-type graph on 3 x Z_m with planted AP triangles, Delta_E <= d
    Every family except unit-distance relabels vertices by a seeded random permutation.
    """

    family: str
    n: int = 0
    p: float = 0.0
    d: int = 0
    gadgets: int = 0
    copies: int | None = None
    m: int = 0
    size: int | None = None
    points: tuple[tuple[float, float], ...] = ()


def generate(spec: GeneratorSpec, seed: int = 0) -> Graph:
    rng = np.random.default_rng(seed)
    fam = spec.family
    if fam == "gnp":
        return gnp(spec.n, spec.p, rng)
    if fam == "book":
        return planted_books(spec.n, spec.d, spec.gadgets, rng)
    if fam == "cliques":
        return clique_union(spec.n, spec.d, spec.copies, rng)
    if fam == "unit-distance":
        return unit_distance(spec.points)
    if fam == "progression":
        return progression_graph(spec.m, spec.d, rng, size=spec.size)
    raise GraphError(f"unknown generator family {fam!r}")


def _relabel(n: int, edges: Iterable[Edge], rng: np.random.Generator) -> Graph:
    perm = rng.permutation(n).tolist()
    return Graph(n, frozenset(_norm(perm[u], perm[v]) for u, v in edges))


def gnp(n: int, p: float, rng: np.random.Generator) -> Graph:
    if n < 1:
        raise GraphError("gnp needs n >= 1")
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"edge probability must lie in [0, 1], got {p}")
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    return Graph(n, frozenset(zip(iu[keep].tolist(), ju[keep].tolist())))


def planted_books(n: int, d: int, gadgets: int, rng: np.random.Generator) -> Graph:
    """``gadgets`` disjoint books of ``d`` pages, so t = d * gadgets and Delta_E = d."""
    if n < 1 or d < 0 or gadgets < 0:
        raise GraphError("book family needs n >= 1, d >= 0, gadgets >= 0")
    if d == 0:
        gadgets = 0
    if (d + 2) * gadgets > n:
        raise GraphError(f"book family needs (d+2)*gadgets <= n, got {(d + 2) * gadgets} > {n}")
    edges = []
    base = 0
    for _ in range(gadgets):
        s, e = base, base + 1
        edges.append((s, e))
        for k in range(d):
            apex = base + 2 + k
            edges.append((s, apex))
            edges.append((e, apex))
        base += d + 2
    return _relabel(n, edges, rng)


def clique_union(n: int, d: int, copies: int | None, rng: np.random.Generator) -> Graph:
    """Disjoint copies of K_d; t = copies * C(d, 3), Delta_E = d - 2."""
    if n < 1 or d < 1:
        raise GraphError("clique family needs n >= 1 and d >= 1")
    if copies is None:
        copies = n // d
    if copies * d > n:
        raise GraphError(f"clique family needs copies*d <= n, got {copies * d} > {n}")
    edges = []
    for k in range(copies):
        edges.extend(combinations(range(k * d, (k + 1) * d), 2))
    return _relabel(n, edges, rng)


def unit_distance(points: Sequence[Sequence[float]], tol: float = UNIT_DISTANCE_TOL) -> Graph:
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    n = len(pts)
    if n < 1:
        raise GraphError("unit-distance family needs at least one point")
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt((diff ** 2).sum(axis=-1))
    iu, ju = np.nonzero(np.triu(np.abs(dist - 1.0) <= tol, k=1))
    return Graph(n, frozenset(zip(iu.tolist(), ju.tolist())))


def triangular_lattice(rows: int, cols: int) -> list[tuple[float, float]]:
    """Points of the unit triangular lattice, a convenient unit-distance input."""
    h = math.sqrt(3) / 2
    return [(j + 0.5 * (i % 2), i * h) for i in range(rows) for j in range(cols)]


def _ap_load(diffs: list[int], m: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Triangle counts per edge class for difference set ``diffs`` in Z_m.

    A triangle (0,a),(1,b),(2,c) exists iff b-a = y1, c-b = y2, c-a = 2*y3 with
    y1 + y2 = 2*y3 (mod m). Returns counts indexed by y1, y2 and 2*y3 residues.
    """
    ind = np.zeros(m, dtype=np.int64)
    ind[diffs] = 1
    doubled = np.zeros(m, dtype=np.int64)
    doubled[(2 * np.asarray(diffs, dtype=np.int64)) % m] = 1
    # sums[s] = #{(y1, y2): y1 + y2 = s}
    sums = np.zeros(m, dtype=np.int64)
    for y in diffs:
        sums += np.roll(ind, y)
    by_y1 = np.zeros(m, dtype=np.int64)
    by_y2 = np.zeros(m, dtype=np.int64)
    for y in diffs:
        # y as y1: #{y2 in U: y + y2 in 2U}
        by_y1[y] = int((np.roll(doubled, -y) * ind).sum())
    by_y2[:] = by_y1  # symmetric roles of y1 and y2
    by_w = sums * doubled
    return by_y1, by_y2, by_w


def progression_graph(m: int, d: int, rng: np.random.Generator, size: int | None = None) -> Graph:
    """Tripartite graph on 3*m vertices with Delta_E <= d built from a difference set U in Z_m.

    Part i holds vertices (i, x). Edges: (0,x)-(1,x+u), (1,x)-(2,x+u), (0,x)-(2,x+2u)
    for u in U. Triangles correspond to solutions of y1 + y2 = 2*y3 in U, so
    t = m * #solutions; U is grown greedily in random order while every edge stays
    in at most d triangles, stopping early once |U| reaches ``size``.
    """
    if m < 3 or m % 2 == 0:
        raise GraphError("progression family needs an odd modulus m >= 3")
    if d < 1:
        raise GraphError("progression family needs d >= 1")
    order = rng.permutation(np.arange(1, m)).tolist()
    chosen: list[int] = []
    for y in order:
        if size is not None and len(chosen) >= size:
            break
        trial = chosen + [y]
        by_y1, _, by_w = _ap_load(trial, m)
        if by_y1.max() <= d and by_w.max() <= d:
            chosen = trial
    edges = []
    for x in range(m):
        for y in chosen:
            edges.append((x, m + (x + y) % m))
            edges.append((m + x, 2 * m + (x + y) % m))
            edges.append((x, 2 * m + (x + 2 * y) % m))
    return _relabel(3 * m, edges, rng)
