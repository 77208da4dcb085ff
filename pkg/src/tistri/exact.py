"""Deterministic tripartite counting by recursive halving, and the randomized
threshold estimator built on top of it."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Iterable

import numpy as np

from .oracle import EXACT_COUNT, PHASES, THRESHOLD_DECIDE, THRESHOLD_ESTIMATE, ContractError, TisOracle

NODE_BUDGET_CONSTANT = 16
ROUNDS_CONSTANT = 18

VertexSet = tuple[int, ...]


def log2_ceil(n: int) -> int:
    """``ceil(log2 n)``, at least 1 so that budgets never collapse to zero."""
    return max(1, math.ceil(math.log2(n))) if n > 1 else 1


def as_vertex_set(vs: Iterable[int]) -> VertexSet:
    return tuple(sorted(set(int(v) for v in vs)))


@dataclass(frozen=True)
class ThresholdOutcome:
    """Either ``exceeds_threshold`` is True, or ``value`` holds a count tagged exact/approx."""

    exceeds_threshold: bool = False
    value: float | None = None
    mode: str | None = None

    def __post_init__(self):
        if self.exceeds_threshold == (self.value is not None):
            raise ValueError("exactly one of exceeds_threshold / value must be populated")

    @classmethod
    def exceeded(cls) -> "ThresholdOutcome":
        return cls(exceeds_threshold=True)


def _halves(s: VertexSet) -> tuple[VertexSet, ...]:
    if len(s) == 1:
        return (s,)
    h = (len(s) + 1) // 2
    return s[:h], s[h:]


def _validate(a, b, c) -> tuple[VertexSet, VertexSet, VertexSet]:
    a, b, c = as_vertex_set(a), as_vertex_set(b), as_vertex_set(c)
    if not a or not b or not c:
        raise ContractError("vertex sets must be non-empty")
    if len(set(a) | set(b) | set(c)) != len(a) + len(b) + len(c):
        raise ContractError("vertex sets must be pairwise disjoint")
    return a, b, c


def _count_tree(o: TisOracle, a: VertexSet, b: VertexSet, c: VertexSet,
                budget: int | None, phase: str) -> int | None:
    """Walk the labelled halving tree depth-first.

    Each node is queried once. Returns the number of all-singleton YES nodes,
    or None as soon as the tree would need more than ``budget`` queried nodes.
    """
    if phase not in PHASES:
        raise ContractError(f"unknown phase {phase!r}")
    ask = o.ask_trusted
    found = 0
    queried = 0
    stack = [(a, b, c)]
    while stack:
        if budget is not None and queried >= budget:
            return None
        u, v, w = stack.pop()
        queried += 1
        if not ask(u, v, w, phase):
            continue
        if len(u) == 1 and len(v) == 1 and len(w) == 1:
            found += 1
            continue
        children = list(product(_halves(u), _halves(v), _halves(w)))
        children.reverse()
        stack.extend(children)
    return found


def count_exact_tripartite(o: TisOracle, a, b, c, phase: str = EXACT_COUNT) -> int:
    """Exact t(A, B, C) with at most 16 * max(t, 1) * ceil(log2 n) queries."""
    a, b, c = _validate(a, b, c)
    return _count_tree(o, a, b, c, None, phase)


def decide_threshold_tripartite(o: TisOracle, a, b, c, tau: int,
                                phase: str = THRESHOLD_DECIDE,
                                budget_constant: float = NODE_BUDGET_CONSTANT) -> ThresholdOutcome:
    """Exact t(A, B, C) if the halving tree stays within ``16 * tau * ceil(log2 n)`` nodes.

    Otherwise reports ``exceeds_threshold``; with the default constant that
    implies t(A, B, C) > tau.
    """
    if tau < 1:
        raise ContractError(f"threshold must be >= 1, got {tau}")
    a, b, c = _validate(a, b, c)
    budget = math.ceil(budget_constant * tau * log2_ceil(o.n))
    found = _count_tree(o, a, b, c, budget, phase)
    if found is None:
        return ThresholdOutcome.exceeded()
    return ThresholdOutcome(value=found, mode="exact")


def random_tripartition(n: int, rng: np.random.Generator) -> tuple[VertexSet, VertexSet, VertexSet]:
    """Assign each vertex to one of three parts uniformly; redraw until no part is empty."""
    if n < 3:
        raise ContractError("a tripartition with non-empty parts needs n >= 3")
    while True:
        labels = rng.integers(0, 3, size=n)
        parts = tuple(tuple(np.flatnonzero(labels == i).tolist()) for i in range(3))
        if all(parts):
            return parts


def threshold_rounds(n: int, eps: float, constant: float = ROUNDS_CONSTANT) -> int:
    return math.ceil(constant * log2_ceil(n) / eps ** 2)


def threshold_approx_estimate(o: TisOracle, tau: int, eps: float, rng: np.random.Generator,
                              rounds: int | None = None,
                              budget_constant: float = NODE_BUDGET_CONSTANT) -> ThresholdOutcome:
    """Either report t(G) > tau, or average ``9/2 * t(A_i, B_i, C_i)`` over random tripartitions.

    ``rounds`` defaults to ``ceil(18 * ceil(log2 n) / eps^2)``. The run stops at
    the first round whose tripartite count exceeds the threshold.
    """
    if not 0 < eps < 1:
        raise ContractError(f"eps must lie in (0, 1), got {eps}")
    if tau < 1:
        raise ContractError(f"threshold must be >= 1, got {tau}")
    n = o.n
    if n < 2:
        raise ContractError("graph needs at least two vertices")
    if rounds is None:
        rounds = threshold_rounds(n, eps)
    if n < 3:
        # no triangle fits; nothing to query
        return ThresholdOutcome(value=0.0, mode="approx")
    total = 0
    for _ in range(rounds):
        a, b, c = random_tripartition(n, rng)
        out = decide_threshold_tripartite(o, a, b, c, tau, phase=THRESHOLD_ESTIMATE,
                                          budget_constant=budget_constant)
        if out.exceeds_threshold:
            return out
        total += out.value
    return ThresholdOutcome(value=9 * total / (2 * rounds), mode="approx")
