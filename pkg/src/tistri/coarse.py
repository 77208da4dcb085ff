"""Coarse (polylog-factor) estimation of t(A, B, C) from accept/reject sampling probes."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exact import as_vertex_set, log2_ceil
from .oracle import COARSE, ContractError, TisOracle

THEORETICAL_GAMMA_CONSTANT = 2000
ACCEPT_FRACTION = 0.1


@dataclass(frozen=True)
class CoarseResult:
    """``t_tilde`` is None when no grid value was accepted (a statistical failure)."""

    t_tilde: float | None
    accepted_at: float | None
    bracket: float
    verify_calls: int = 0

    @property
    def ok(self) -> bool:
        return self.t_tilde is not None


def probe_probabilities(t_hat: float, i: int, j: int, log_n: int) -> tuple[float, float, float]:
    """Keep probabilities for A, B and C in probe (i, j)."""
    return (min(2.0 ** i / t_hat, 1.0),
            min(2.0 ** j / 2.0 ** i * log_n, 1.0),
            1.0 / 2.0 ** j)


def probe_schedule(log_n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(2 * log_n, -1, -1) for j in range(log_n, -1, -1)]


def _sample_all(side: np.ndarray, probs: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    return rng.random((len(probs), len(side))) < probs[:, None]


def verify_estimate(o: TisOracle, a, b, c, t_hat: float, rng: np.random.Generator,
                    phase: str = COARSE) -> bool:
    """Accept iff some probe's sampled triple contains a triangle.

    Probes whose sample leaves a side empty are skipped without a query.
    """
    if t_hat < 1:
        raise ContractError(f"candidate estimate must be >= 1, got {t_hat}")
    a, b, c = (np.asarray(as_vertex_set(s), dtype=np.int64) for s in (a, b, c))
    if not len(a) or not len(b) or not len(c):
        raise ContractError("vertex sets must be non-empty")
    if len(np.union1d(np.union1d(a, b), c)) != len(a) + len(b) + len(c):
        raise ContractError("vertex sets must be pairwise disjoint")
    return _verify(o, a, b, c, t_hat, log2_ceil(o.n), rng, phase)


def _verify(o, a, b, c, t_hat, log_n, rng, phase) -> bool:
    sched = probe_schedule(log_n)
    probs = np.array([probe_probabilities(t_hat, i, j, log_n) for i, j in sched])
    ma = _sample_all(a, probs[:, 0], rng)
    mb = _sample_all(b, probs[:, 1], rng)
    mc = _sample_all(c, probs[:, 2], rng)
    live = np.flatnonzero(ma.any(axis=1) & mb.any(axis=1) & mc.any(axis=1))
    ask = o.ask_trusted
    for p in live.tolist():
        if ask(a[ma[p]].tolist(), b[mb[p]].tolist(), c[mc[p]].tolist(), phase):
            return True
    return False


def coarse_grid(n: int) -> list[float]:
    """Candidate estimates n^3, n^3/2, ... (3 * ceil(log2 n) + 1 values)."""
    top = float(n) ** 3
    return [top / 2 ** k for k in range(3 * log2_ceil(n) + 1)]


def coarse_estimate(o: TisOracle, a, b, c, rng: np.random.Generator, gamma: int | None = None,
                    accept_fraction: float = ACCEPT_FRACTION, phase: str = COARSE) -> CoarseResult:
    """Walk the halving grid; the first candidate accepted by at least ``accept_fraction``
    of ``gamma`` verification runs yields ``t_tilde = candidate / ceil(log2 n)``.

    ``gamma`` defaults to ``2000 * ceil(log2 n)``. The repetitions for a
    candidate stop as soon as the accept/reject decision is settled.
    """
    sa, sb, sc = (np.asarray(as_vertex_set(s), dtype=np.int64) for s in (a, b, c))
    if not len(sa) or not len(sb) or not len(sc):
        raise ContractError("vertex sets must be non-empty")
    if len(np.union1d(np.union1d(sa, sb), sc)) != len(sa) + len(sb) + len(sc):
        raise ContractError("vertex sets must be pairwise disjoint")
    log_n = log2_ceil(o.n)
    if gamma is None:
        gamma = THEORETICAL_GAMMA_CONSTANT * log_n
    need = math.ceil(accept_fraction * gamma)
    bracket = 64.0 * log_n ** 2
    calls = 0
    for t_hat in coarse_grid(o.n):
        accepts = 0
        for rep in range(gamma):
            if accepts >= need or accepts + (gamma - rep) < need:
                break
            calls += 1
            accepts += _verify(o, sa, sb, sc, max(t_hat, 1.0), log_n, rng, phase)
        if accepts >= need:
            return CoarseResult(t_hat / log_n, t_hat, bracket, calls)
    return CoarseResult(None, None, bracket, calls)
