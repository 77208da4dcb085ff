import numpy as np
import pytest

from conftest import complete_tripartite
from tistri.coarse import (coarse_estimate, coarse_grid, probe_probabilities, probe_schedule,
                           verify_estimate)
from tistri.graph import Graph, count_triangles_tripartite_brute
from tistri.oracle import COARSE, ContractError, TisOracle


def test_grid_has_expected_length_and_halves():
    g = coarse_grid(64)
    assert len(g) == 19
    assert g[0] == 64 ** 3 and g[-1] == 1
    assert all(a == 2 * b for a, b in zip(g, g[1:]))
    assert len(coarse_grid(100)) == 3 * 7 + 1


def test_schedule_order():
    s = probe_schedule(2)
    assert s[0] == (4, 2) and s[-1] == (0, 0) and len(s) == 15


def test_probe_probabilities_are_capped():
    pa, pb, pc = probe_probabilities(8.0, 5, 1, 6)
    assert pa == 1.0 and pb == pytest.approx(2 / 32 * 6) and pc == 0.5
    assert probe_probabilities(1e9, 0, 0, 6) == (1e-9, 1.0, 1.0)


def test_probe_hit_rate_is_bounded(rng):
    # one probe can see a triangle only if all three corners survive sampling
    g, a, b, c = complete_tripartite((8, 8, 8), 30)
    t = count_triangles_tripartite_brute(g, a, b, c)
    lg, t_hat = 5, 4096.0
    for i, j in [(6, 2), (10, 4), (8, 0)]:
        pa, pb, pc = probe_probabilities(t_hat, i, j, lg)
        assert pa * pb * pc * t <= t * lg / t_hat


def test_verify_never_accepts_without_triangles(rng):
    o = TisOracle(Graph.from_edges(30, [(0, 10), (10, 20)]))
    assert not any(verify_estimate(o, range(10), range(10, 20), range(20, 30), 1.0, rng) for _ in range(30))


def test_verify_accepts_dense_instance_at_small_estimate(rng):
    g, a, b, c = complete_tripartite((10, 10, 10), 30)
    o = TisOracle(g)
    assert verify_estimate(o, a, b, c, 2.0, rng)
    assert o.ledger.per_phase[COARSE] == o.ledger.total > 0


def test_verify_contract(rng):
    o = TisOracle(Graph.from_edges(6, []))
    with pytest.raises(ContractError):
        verify_estimate(o, [0], [1], [2], 0.5, rng)
    with pytest.raises(ContractError):
        verify_estimate(o, [0], [0], [2], 4.0, rng)


def test_coarse_gives_no_estimate_on_empty_instance(rng):
    o = TisOracle(Graph.from_edges(12, []))
    res = coarse_estimate(o, range(4), range(4, 8), range(8, 12), rng, gamma=20)
    assert not res.ok and res.t_tilde is None


def test_coarse_lands_in_bracket(rng):
    g, a, b, c = complete_tripartite((4, 5, 5), 64)
    t = count_triangles_tripartite_brute(g, a, b, c)
    res = coarse_estimate(TisOracle(g), a, b, c, rng, gamma=100)
    assert res.ok
    assert t / res.bracket <= res.t_tilde <= t * res.bracket
    assert res.t_tilde == res.accepted_at / 6


def test_coarse_is_reproducible():
    g, a, b, c = complete_tripartite((6, 6, 6), 40)
    r1 = coarse_estimate(TisOracle(g), a, b, c, np.random.default_rng(8), gamma=50)
    r2 = coarse_estimate(TisOracle(g), a, b, c, np.random.default_rng(8), gamma=50)
    assert r1 == r2
