import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tistri.importance import SamplerParams, WeightedTuple, _clamp_weights, importance_sample, sample_size
from tistri.oracle import ContractError


def make_tuples(rng, r, rho):
    truth = rng.integers(1, 200, size=r).astype(float)
    weights = rng.choice([4.5, 40.5, 364.5], size=r)
    coarse = truth * np.exp(rng.uniform(-math.log(rho), math.log(rho), size=r))
    coarse = np.maximum(coarse, 1.0)
    tuples = [WeightedTuple((3 * i,), (3 * i + 1,), (3 * i + 2,), float(w), float(e))
              for i, (w, e) in enumerate(zip(weights, coarse))]
    return tuples, {tp.a: t for tp, t in zip(tuples, truth)}


def test_sample_size_formula():
    p = SamplerParams(lam=0.5, rho=2, delta=0.25, mass_bound=2 ** 16)
    # 16 * 16 * (log2 16 + log2 4) / 0.25
    assert sample_size(p) == math.ceil(16 * 16 * (4 + 2) / 0.25)


@pytest.mark.parametrize("kw", [dict(lam=0), dict(lam=1.2), dict(rho=0.5), dict(delta=1), dict(mass_bound=1)])
def test_params_validate(kw):
    base = dict(lam=0.2, rho=2, delta=0.1, mass_bound=100)
    base.update(kw)
    with pytest.raises(ContractError):
        SamplerParams(**base)


def test_short_list_is_returned_unchanged(rng):
    tuples, _ = make_tuples(rng, 5, 2)
    p = SamplerParams(lam=0.2, rho=2, delta=0.1, mass_bound=1e9)
    assert importance_sample(tuples, p, rng) == tuples


def test_requires_coarse_estimates(rng):
    tuples = [WeightedTuple((0,), (1,), (2,), 4.5)] * 3
    p = SamplerParams(lam=0.2, rho=2, delta=0.1, mass_bound=1e9)
    with pytest.raises(ContractError):
        importance_sample(tuples, p, rng, s=2)


@settings(max_examples=40, deadline=None)
@given(st.integers(10, 120), st.integers(1, 60), st.integers(0, 2 ** 32 - 1))
def test_output_invariants(r, s, seed):
    rng = np.random.default_rng(seed)
    rho = 4.0
    tuples, _ = make_tuples(rng, r, rho)
    p = SamplerParams(lam=0.2, rho=rho, delta=0.05, mass_bound=1e12)
    out = importance_sample(tuples, p, rng, s=s)
    assert len(out) <= min(r, s)
    assert len({t.a for t in out}) == len(out)  # repeats were merged
    assert all(t.weight >= 1 and t.coarse >= 1 for t in out)
    originals = {t.a: t for t in tuples}
    assert all(originals[t.a].coarse == t.coarse for t in out)


def test_mass_is_unbiased():
    rng = np.random.default_rng(0)
    tuples, truth = make_tuples(rng, 300, 4.0)
    s_true = sum(t.weight * truth[t.a] for t in tuples)
    p = SamplerParams(lam=0.2, rho=4.0, delta=0.05, mass_bound=1e12)
    est = [sum(t.weight * truth[t.a] for t in importance_sample(tuples, p, rng, s=60)) for _ in range(400)]
    assert abs(np.mean(est) - s_true) <= 0.03 * s_true


def test_clamp_restores_mass():
    w = np.array([0.2, 5.0, 10.0])
    e = np.array([10.0, 1.0, 1.0])
    target = float(np.dot(w, e))
    out = _clamp_weights(w, e, target)
    assert out.min() >= 1.0
    assert np.dot(out, e) == pytest.approx(target)


def test_identical_tuples_keep_total_weight(rng):
    tuples = [WeightedTuple((3 * i,), (3 * i + 1,), (3 * i + 2,), 40.5, 7.0) for i in range(50)]
    p = SamplerParams(lam=0.2, rho=2, delta=0.1, mass_bound=1e9)
    out = importance_sample(tuples, p, rng, s=20)
    assert sum(t.weight for t in out) == pytest.approx(50 * 40.5)
