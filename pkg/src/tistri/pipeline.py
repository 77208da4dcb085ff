"""End-to-end triangle estimation: threshold estimation, then sparsify / decide /
resample rounds over a list of weighted tuples."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from itertools import combinations
from typing import Callable, Optional

import numpy as np

from .coarse import THEORETICAL_GAMMA_CONSTANT, coarse_estimate
from .exact import (NODE_BUDGET_CONSTANT, ROUNDS_CONSTANT, count_exact_tripartite,
                    decide_threshold_tripartite, log2_ceil, threshold_approx_estimate)
from .importance import SamplerParams, WeightedTuple, importance_sample, sample_size
from .oracle import COARSE, EXACT_COUNT, PIPELINE_MISC, THRESHOLD_DECIDE, ContractError, QueryLedger, TisOracle
from .sparsify import general_sparsify, tripartite_sparsify

THEORETICAL = "theoretical"
PRACTICAL = "practical"
PRESETS = (THEORETICAL, PRACTICAL)

MODE_EXHAUSTIVE = "exhaustive"
MODE_THRESHOLD = "threshold"
MODE_PIPELINE = "full-pipeline"

CHILDREN_PER_SPLIT = 3
PRACTICAL_KAPPA = 2 / 9
PRACTICAL_ROUNDS_CONSTANT = 0.04
PRACTICAL_N_CAP = 64
PRACTICAL_GAMMA = 200


class RunFailure(RuntimeError):
    """Coarse estimation found no estimate twice in a row for some tuple."""

    def __init__(self, msg: str, partial: "EstimateReport | None" = None):
        super().__init__(msg)
        self.partial = partial


@dataclass(frozen=True)
class EstimatorConfig:
    eps: float
    d: int = 1
    preset: str = PRACTICAL
    kappa1: float = 2.0
    kappa2: float = 2.0
    kappa3: float = 1.0
    seed: Optional[int] = None
    max_iterations: Optional[int] = None
    gamma_override: Optional[int] = None
    n_cap_override: Optional[int] = None
    tau_override: Optional[int] = None
    rounds_override: Optional[int] = None
    rounds_constant: float = ROUNDS_CONSTANT
    resample_factor: int = 10
    sample_constant: float = 1.0

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise ContractError(f"eps must lie in (0, 1), got {self.eps}")
        if self.d < 1:
            raise ContractError(f"d must be >= 1, got {self.d}")
        if min(self.kappa1, self.kappa2, self.kappa3) <= 0:
            raise ContractError("all kappa constants must be positive")
        if self.preset not in PRESETS:
            raise ContractError(f"unknown preset {self.preset!r}")
        for name in ("max_iterations", "gamma_override", "n_cap_override", "tau_override",
                     "rounds_override"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ContractError(f"{name} must be >= 1, got {v}")

    @classmethod
    def theoretical(cls, eps: float, d: int = 1, **kw) -> "EstimatorConfig":
        kw.setdefault("kappa1", 271.0)
        kw.setdefault("kappa2", 271.0)
        return cls(eps=eps, d=d, preset=THEORETICAL, **kw)

    @classmethod
    def practical(cls, eps: float, d: int = 1, **kw) -> "EstimatorConfig":
        kw.setdefault("kappa1", PRACTICAL_KAPPA)
        kw.setdefault("kappa2", PRACTICAL_KAPPA)
        kw.setdefault("rounds_constant", PRACTICAL_ROUNDS_CONSTANT)
        return cls(eps=eps, d=d, preset=PRACTICAL, **kw)

    # derived quantities; all depend on n through L = ceil(log2 n)

    def tau_exact(self, n: int) -> Fraction:
        """max(36 k1^2, 324 k2^2) * d^2 * L^4 / eps^2; the practical preset drops
        the L^4 factor and uses d in place of d^2."""
        k2 = max(36 * Fraction(self.kappa1) ** 2, 324 * Fraction(self.kappa2) ** 2)
        if self.preset == PRACTICAL:
            return k2 * self.d / Fraction(self.eps) ** 2
        return k2 * self.d ** 2 * log2_ceil(n) ** 4 / Fraction(self.eps) ** 2

    def tau(self, n: int) -> int:
        if self.tau_override is not None:
            return self.tau_override
        return math.ceil(self.tau_exact(n))

    def n_cap_exact(self, n: int) -> Fraction:
        return Fraction(self.kappa3) * log2_ceil(n) ** 12 / Fraction(self.eps) ** 2

    def n_cap(self, n: int) -> int:
        if self.n_cap_override is not None:
            return self.n_cap_override
        cap = math.ceil(self.n_cap_exact(n))
        return min(cap, PRACTICAL_N_CAP) if self.preset == PRACTICAL else cap

    def gamma(self, n: int) -> int:
        if self.gamma_override is not None:
            return self.gamma_override
        if self.preset == THEORETICAL:
            return THEORETICAL_GAMMA_CONSTANT * log2_ceil(n)
        return PRACTICAL_GAMMA

    def rounds(self, n: int) -> int:
        if self.rounds_override is not None:
            return self.rounds_override
        return math.ceil(self.rounds_constant * log2_ceil(n) / self.eps ** 2)

    def iterations(self, n: int) -> int:
        if self.max_iterations is not None:
            return self.max_iterations
        return 3 * log2_ceil(n) + 2

    def sampler_params(self, n: int, max_weight: float) -> SamplerParams:
        lg = log2_ceil(n)
        return SamplerParams(lam=self.eps / (6 * lg), rho=64.0 * lg ** 2, delta=float(n) ** -10,
                             mass_bound=max(float(n) ** 3 * max_weight, 2.0),
                             size_constant=self.sample_constant)

    def exhaustive_cutoff(self, n: int) -> float:
        return math.sqrt(self.d) * log2_ceil(n) ** 4.5 / n ** 0.75

    def uses_exhaustive(self, n: int) -> bool:
        return self.preset == THEORETICAL and self.eps <= self.exhaustive_cutoff(n)


@dataclass
class PipelineState:
    psi: float = 0.0
    tuples: list[WeightedTuple] = field(default_factory=list)
    iteration: int = 0

    def add(self, amount: float) -> None:
        if amount < 0:
            raise ValueError("accumulator only grows")
        self.psi += amount


@dataclass
class EstimateReport:
    t_hat: float
    mode: str
    iterations: int
    ledger: dict
    steps: dict
    tau: int
    n_cap: int

    def as_dict(self) -> dict:
        return asdict(self)


Observer = Callable[[str, PipelineState], None]


def exhaustive_singleton_count(o: TisOracle, phase: str = PIPELINE_MISC) -> int:
    """Query every singleton triple; exactly C(n, 3) queries."""
    ask = o.ask_trusted
    return sum(ask((a,), (b,), (c,), phase) for a, b, c in combinations(range(o.n), 3))


class _StepMeter:
    def __init__(self, o: TisOracle):
        self.o = o
        self.steps: dict[str, int] = {}
        self._mark = o.ledger.total

    def close(self, step: str) -> None:
        now = self.o.ledger.total
        self.steps[step] = self.steps.get(step, 0) + now - self._mark
        self._mark = now


def _nonempty(t: WeightedTuple) -> bool:
    return bool(t.a) and bool(t.b) and bool(t.c)


def _coarse_all(o, tuples, cfg, rng, n) -> list[WeightedTuple]:
    out = []
    gamma = cfg.gamma(n)
    for t in tuples:
        res = coarse_estimate(o, t.a, t.b, t.c, rng, gamma=gamma, phase=COARSE)
        if not res.ok:
            retry = np.random.default_rng(rng.integers(2 ** 63))
            res = coarse_estimate(o, t.a, t.b, t.c, retry, gamma=gamma, phase=COARSE)
        if not res.ok:
            raise RunFailure("coarse estimation found no estimate after one reseeded retry")
        out.append(replace(t, coarse=max(res.t_tilde, 1.0)))
    return out


def estimate_triangles(o: TisOracle, cfg: EstimatorConfig,
                       observer: Observer | None = None) -> EstimateReport:
    """Estimate t(G) to within a factor 1 +- eps using only oracle queries.

    ``observer`` (if given) is called as ``observer(event, state)`` with events
    ``"start"``, ``"resolved"``, ``"split"`` and ``"resampled"``; tests use it to
    audit the tuple list against ground truth.
    """
    n = o.n
    rng = np.random.default_rng(cfg.seed)
    tau = cfg.tau(n)
    cap = cfg.n_cap(n)
    meter = _StepMeter(o)
    start_ledger = o.snapshot_ledger()

    def report(t_hat, mode, iters):
        led = QueryLedger(o.ledger.per_phase - start_ledger.per_phase)
        return EstimateReport(float(t_hat), mode, iters, led.as_dict(), dict(meter.steps), tau, cap)

    if n < 3:
        return report(0.0, MODE_THRESHOLD, 0)

    if cfg.uses_exhaustive(n):
        t = exhaustive_singleton_count(o)
        meter.close("exhaustive")
        return report(t, MODE_EXHAUSTIVE, 0)

    # whole-graph threshold estimate
    first = threshold_approx_estimate(o, tau, cfg.eps, rng, rounds=cfg.rounds(n),
                                      budget_constant=NODE_BUDGET_CONSTANT)
    meter.close("threshold-estimate")
    if not first.exceeds_threshold:
        return report(first.value, MODE_THRESHOLD, 0)

    # sparsify into one weighted tripartite tuple
    sp = general_sparsify(range(n), 1, rng)
    state = PipelineState()
    state.tuples = [WeightedTuple(*part, float(sp.scale)) for part in sp.parts]
    state.tuples = [t for t in state.tuples if _nonempty(t)]
    if observer:
        observer("start", state)

    limit = cfg.iterations(n)
    while state.tuples and state.iteration < limit:
        state.iteration += 1
        # resolve tuples at or below the threshold
        pending = []
        for t in state.tuples:
            out = decide_threshold_tripartite(o, t.a, t.b, t.c, tau, phase=THRESHOLD_DECIDE)
            if out.exceeds_threshold:
                pending.append(t)
            else:
                state.add(t.weight * out.value)
        state.tuples = pending
        meter.close("threshold-decide")
        if observer:
            observer("resolved", state)
        if not state.tuples:
            break
        # too many tuples left: coarse-score and resample
        if len(state.tuples) > cfg.resample_factor * cap:
            scored = _coarse_all(o, state.tuples, cfg, rng, n)
            meter.close("coarse")
            params = cfg.sampler_params(n, max(t.weight for t in scored))
            state.tuples = importance_sample(scored, params, rng, s=cap)
            if observer:
                observer("resampled", state)
        # split every survivor
        children = []
        for t in state.tuples:
            sp = tripartite_sparsify(t.a, t.b, t.c, CHILDREN_PER_SPLIT, rng)
            w = t.weight * float(sp.scale)
            children.extend(WeightedTuple(*part, w) for part in sp.parts)
        state.tuples = [t for t in children if _nonempty(t)]
        if observer:
            observer("split", state)

    # count whatever remains exactly
    for t in state.tuples:
        state.add(t.weight * count_exact_tripartite(o, t.a, t.b, t.c, phase=EXACT_COUNT))
    state.tuples = []
    meter.close("exact-count")
    return report(state.psi, MODE_PIPELINE, state.iteration)


def budget_breakdown(cfg: EstimatorConfig, n: int) -> dict[str, Fraction]:
    """Worst-case query budget per step, from the configured formulas alone.

    Every decision costs at most ``16 * tau * L`` queries and every
    coarse estimate at most ``gamma * (3L + 1) * (2L + 1) * (L + 1)``. A round
    starts with at most ``3 * resample_factor * N`` tuples. Exact arithmetic.
    """
    lg = log2_ceil(n)
    if cfg.uses_exhaustive(n):
        return {"exhaustive": Fraction(math.comb(n, 3))}
    decide = NODE_BUDGET_CONSTANT * Fraction(cfg.tau(n)) * lg
    per_round = CHILDREN_PER_SPLIT * cfg.resample_factor * cfg.n_cap(n)
    coarse = cfg.gamma(n) * (3 * lg + 1) * (2 * lg + 1) * (lg + 1)
    iters = cfg.iterations(n)
    return {
        "threshold-estimate": cfg.rounds(n) * decide,
        "threshold-decide": Fraction(iters * per_round) * decide,
        "coarse": Fraction(iters * per_round * coarse),
        "exact-count": per_round * decide,
    }


def budget_curve(cfg: EstimatorConfig, n: int, constant: Fraction | int = 1) -> Fraction:
    """``constant * d^2 * L^18 / eps^4``."""
    return Fraction(constant) * cfg.d ** 2 * log2_ceil(n) ** 18 / Fraction(cfg.eps) ** 4


def budget_within(cfg: EstimatorConfig, n: int, constant: Fraction | int) -> bool:
    return sum(budget_breakdown(cfg, n).values()) <= budget_curve(cfg, n, constant)
