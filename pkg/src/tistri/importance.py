"""Importance sampling of weighted tuples by coarse mass estimates."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .oracle import ContractError


@dataclass(frozen=True)
class WeightedTuple:
    a: tuple[int, ...]
    b: tuple[int, ...]
    c: tuple[int, ...]
    weight: float
    coarse: float | None = None  # estimate e of t(a, b, c), filled in before sampling

    @property
    def sides(self) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
        return self.a, self.b, self.c


@dataclass(frozen=True)
class SamplerParams:
    lam: float      # target relative error
    rho: float      # coarse estimates are within a factor rho of the truth
    delta: float    # failure probability
    mass_bound: float  # upper bound M on the weighted mass
    size_constant: float = 1.0

    def __post_init__(self):
        if not 0 < self.lam < 1:
            raise ContractError(f"lam must lie in (0, 1), got {self.lam}")
        if self.rho < 1:
            raise ContractError(f"rho must be >= 1, got {self.rho}")
        if not 0 < self.delta < 1:
            raise ContractError(f"delta must lie in (0, 1), got {self.delta}")
        if self.mass_bound < 2:
            raise ContractError(f"mass bound must be >= 2, got {self.mass_bound}")


def sample_size(params: SamplerParams) -> int:
    """``c * lam^-2 * rho^4 * log M * (log log M + log 1/delta)``, logs base 2, rounded up."""
    log_m = math.log2(params.mass_bound)
    inner = math.log2(max(log_m, 2.0)) + math.log2(1.0 / params.delta)
    return max(1, math.ceil(params.size_constant * params.rho ** 4 * log_m * inner / params.lam ** 2))


def _clamp_weights(w: np.ndarray, e: np.ndarray, target: float) -> np.ndarray:
    """Raise weights below 1 to 1, then shrink the free weights so that
    ``sum(w * e)`` returns to ``target``; repeat until stable."""
    w = w.copy()
    pinned = np.zeros(len(w), dtype=bool)
    while True:
        low = (w < 1.0) & ~pinned
        if not low.any():
            return w
        w[low] = 1.0
        pinned |= low
        free = ~pinned
        fixed_mass = float(np.dot(w[pinned], e[pinned]))
        free_mass = float(np.dot(w[free], e[free]))
        if free_mass <= 0 or fixed_mass >= target:
            return w
        w[free] *= (target - fixed_mass) / free_mass


def importance_sample(tuples: Sequence[WeightedTuple], params: SamplerParams,
                      rng: np.random.Generator, s: int | None = None) -> list[WeightedTuple]:
    """Draw ``s`` tuples with replacement, proportional to weight * estimate.

    Each draw of tuple i carries ``sum_j w_j e_j / (s * e_i)``; repeated draws
    are merged. When ``s`` (default :func:`sample_size`) is at least the number
    of tuples, the input is returned unchanged.
    """
    if s is None:
        s = sample_size(params)
    if s < 1:
        raise ContractError(f"sample size must be >= 1, got {s}")
    if len(tuples) <= s:
        return list(tuples)
    for t in tuples:
        if t.coarse is None or t.coarse < 1 or t.weight < 1:
            raise ContractError("every tuple needs weight >= 1 and a coarse estimate >= 1")
    w = np.array([t.weight for t in tuples], dtype=float)
    e = np.array([t.coarse for t in tuples], dtype=float)
    mass = w * e
    total = float(mass.sum())
    counts = rng.multinomial(s, mass / total)
    keep = np.flatnonzero(counts)
    new_w = counts[keep] * total / (s * e[keep])
    new_w = _clamp_weights(new_w, e[keep], total)
    return [replace(tuples[i], weight=float(nw)) for i, nw in zip(keep.tolist(), new_w.tolist())]
