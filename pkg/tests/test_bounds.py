import math

import numpy as np
import pytest

from qotbounds import suites
from qotbounds.bounds import (GW_RATIO, GaussianProfile, advantage_depth, anneal_time_lower,
                              approx_threshold, chebyshev_tail, depol_tail, ghz_time_lower,
                              lr_bound, maxcut_depth_bounds, maxcut_noisy_max_n,
                              min_n_for_depth, min_of_m_K, mitigation_concentration,
                              noisy_annealer_tail, regular_graph_threshold, transfer_concentration,
                              transport_variance_bound)
from qotbounds.cli import BETA_P17
from qotbounds.entropy import h_of_T, qaoa_entropy_bound
from qotbounds.errors import PreconditionError, ValidationError
from qotbounds.quantum import InteractionGraphParams

CHAIN = InteractionGraphParams(2, 1, 1.0, 1.0)


def test_chebyshev_tail():
    assert chebyshev_tail(4, 9, 1, 12).value == pytest.approx(0.25)
    assert chebyshev_tail(4, 9, 1, 1e12).value < 1e-20
    small = chebyshev_tail(4, 9, 1, 1)
    assert small.value == 1.0 and small.vacuous
    with pytest.raises(ValidationError):
        chebyshev_tail(4, 9, 1, 0)


def test_transport_variance_bound():
    assert transport_variance_bound(16, 4, 0.0, 0.0) == 0.0
    assert transport_variance_bound(16, 4, 0.5, 0.25) == pytest.approx(8 * 0.75)


def test_transfer_concentration_limits():
    prof = GaussianProfile(2.0, 2.0, 1.0)
    assert transfer_concentration(0.0, 2.0, prof, 100.0, 10).value < 1e-100
    assert transfer_concentration(50.0, 2.0, prof, 0.01, 10).vacuous
    with pytest.raises(ValidationError):
        GaussianProfile(0.0, 1.0, 1.0)


def test_transfer_concentration_monotone_in_alpha():
    prof = GaussianProfile(2.0, 2.0, 1.0)
    vals = [transfer_concentration(0.0, a, prof, 0.5, 20).value for a in (1.5, 2, 4, 10, math.inf)]
    assert all(b <= a for a, b in zip(vals, vals[1:]))


def test_depol_tail():
    eps, n, lip = 0.1, 20, 1.0
    dev, prob = depol_tail(1.0, 3, eps, n, lip)
    assert dev == pytest.approx(math.sqrt(eps) * lip * n)
    assert prob.value == pytest.approx(math.exp(-eps * n / 2))
    with pytest.raises(ValidationError):
        depol_tail(0.1, 5, 1 / 6 - 0.81 ** 5, n, lip)


def test_depol_tail_noisy_maxcut_chain():
    # with ε = 1/6 - (1-p)^{2L} the deviation is ‖H‖_L n / √6
    p, L, n = 0.1, 9, 100
    eps = 1 / 6 - (1 - p) ** (2 * L)
    dev, prob = depol_tail(p, L, eps, n, 1.0)
    assert dev == pytest.approx(n / math.sqrt(6))
    assert prob.value == pytest.approx(math.exp(-eps * n / 2))


def test_advantage_depth():
    assert advantage_depth(1.0, 0.2).L_star == 0
    res = advantage_depth(math.exp(-1), 0.1)
    assert res.L_star == pytest.approx(5.0)
    assert res.L_int == 6
    # first-order depth does not yet give (1-p)^{2L} <= a_c²; the exact depth is larger
    assert not res.squared_ok
    assert 0.9 ** (2 * res.L_squared) <= math.exp(-2)
    assert 0.9 ** (2 * (res.L_squared - 1)) > math.exp(-2)


def test_maxcut_depth_bounds():
    assert maxcut_depth_bounds(576, kind="L") == 0
    assert maxcut_depth_bounds(576, D=3, kind="P") == 0
    assert maxcut_depth_bounds(2304, kind="L") == pytest.approx(1)
    n = min_n_for_depth(1, D=55)
    assert n == 1806336
    assert maxcut_depth_bounds(n, D=55, kind="P") == pytest.approx(1.0, abs=1e-15)
    assert min_n_for_depth(1, kind="L") == 2304
    with pytest.raises(ValidationError):
        maxcut_depth_bounds(1000, D=2, kind="P")


def test_maxcut_noisy_max_n():
    assert maxcut_noisy_max_n(0.1) == pytest.approx(8.05e8, rel=1e-3)
    assert maxcut_noisy_max_n(2) == 1536
    grid = [maxcut_noisy_max_n(p) for p in np.linspace(0.05, 1, 20)]
    assert all(b < a for a, b in zip(grid, grid[1:]))


def test_approx_threshold():
    v, flag = approx_threshold(55)
    assert v == pytest.approx(0.87787, abs=1e-5) and flag
    assert not approx_threshold(54)[1]
    assert approx_threshold(10 ** 12)[0] == pytest.approx(5 / 6, abs=1e-6)
    assert GW_RATIO == 0.878


def test_time_bounds():
    small = anneal_time_lower(100, CHAIN)
    assert small.vacuous
    res = anneal_time_lower(1e6, CHAIN)
    c1 = 64 / 3 / (math.e - 1)
    arg = 1000 / (12 * c1) - 64 / c1
    assert res.argument == pytest.approx(arg)
    assert res.value == pytest.approx(math.log(arg) / CHAIN.v)
    assert not res.vacuous


def test_ghz_time_grows_logarithmically():
    ratios = [ghz_time_lower(n, CHAIN).value * CHAIN.v / math.log(n) for n in (1e6, 1e12, 1e24, 1e48)]
    assert all(b > a for a, b in zip(ratios, ratios[1:]))
    assert 0.8 < ratios[-1] < 1


def test_lr_bound_precondition():
    with pytest.raises(PreconditionError):
        lr_bound(InteractionGraphParams(2, 2, 1.0, 1.0), 2, 0.5)
    assert lr_bound(CHAIN, 3, 0.0) == pytest.approx(2 / 3 * math.exp(-3))


def test_regular_graph_threshold():
    D, n = 4, 10
    assert regular_graph_threshold(0.5, D, n).threshold == pytest.approx((2 / math.pi) ** 2 / (2 * D) * n)
    res = regular_graph_threshold(0.45, 50, 1)
    assert res.threshold == pytest.approx(((0.01 * 25 + 2 / math.pi * math.sqrt(50)) ** 2) / 5000)
    assert res.classical_energy == pytest.approx(-2 / math.pi * math.sqrt(50))
    assert regular_graph_threshold(0.45, 50, 100, eps=0.1).tail == pytest.approx(math.exp(-5))


def _first_crossing(beta, q, thr, grid):
    dens = [qaoa_entropy_bound(beta, q, pa, 1).bound for pa in grid]
    k = next((k for k, d in enumerate(dens) if d < thr), None)
    return k, dens


def test_threshold_crossing_sweep():
    thr = regular_graph_threshold(0.45, 50, 1).threshold
    grid = np.linspace(0, 1, 101)
    k, dens = _first_crossing([0.02] * 5, 0.45, thr, grid)
    assert k is not None and k > 0
    assert dens[k] < thr <= dens[k - 1]
    # the P=17 schedule never crosses: its last mixer penalty alone exceeds the threshold
    k17, dens17 = _first_crossing(BETA_P17, 0.45, thr, grid)
    assert k17 is None
    assert dens17[-1] == pytest.approx(qaoa_entropy_bound(BETA_P17, 0.45, 1.0, 1).penalties[-1])
    assert dens17[-1] > thr


def test_mitigation_single_copy_reduces_to_transfer():
    prof = GaussianProfile(2.0, 2.0, 1.0)
    res = mitigation_concentration(1, 2.0, 1.0, 1.0, 2.0, 0.5, 0.1, 20, [0.3])
    assert res.transferred == pytest.approx(transfer_concentration(0.3, 2.0, prof, 0.5, 20).value)
    assert res.value == pytest.approx(math.exp(-2 * 0.1 * 20))
    assert res.deviation == pytest.approx(10)


def test_mitigation_min_of_m_preset():
    m = 4
    res = mitigation_concentration(m, min_of_m_K, 1.0, 1.0, 2.0, 0.7, 0.2, 10, [0.0] * m)
    assert res.value == pytest.approx(math.exp(-2 * 0.2 * 10))
    assert min_of_m_K(m) == m


def test_mitigation_precondition():
    with pytest.raises(PreconditionError):
        mitigation_concentration(2, 2.0, 1.0, 1.0, 2.0, 0.5, 0.1, 4, [1.0, 1.0])
    with pytest.raises(ValidationError):
        mitigation_concentration(2, 2.0, 1.0, 1.0, 2.0, 0.5, 0.1, 4, [0.0])


def test_noisy_annealer_tail_unital_matches_transfer():
    n, eps, T = 12, 0.3, 4.0
    h = h_of_T(0.5, T)
    level, prob = noisy_annealer_tail(0.5, T, eps, n, 1.0, mean=0.0)
    a = -level / n
    ref = transfer_concentration(h * n, 2.0, GaussianProfile(1.0, 2.0, 1.0), a, n)
    assert prob.value == pytest.approx(ref.value)
    assert prob.value == pytest.approx(math.exp(-eps * n / 2))


def test_noisy_annealer_tail_long_time_limit():
    # h(T) decays like 1/T, so the level approaches its limit slowly
    eps, n = 0.2, 10
    limit = 1.0 - 2 ** -0.5 * math.sqrt(eps) * n
    gaps = [limit - noisy_annealer_tail(0.4, T, eps, n, 1.0, mean=1.0)[0] for T in (1e1, 1e2, 1e4, 1e6)]
    assert all(0 < b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-4


def test_proof_chain_matches_circuit_depth_bound():
    # with μ(A), μ(B) >= 1/4 and C = 4 (2^L)², the concentration radius is 2^{L+3}√n,
    # which meets n/3 exactly at the circuit-depth bound's n = 576·4^L
    for L in (1, 2, 3):
        C = 4 * (2 ** L) ** 2
        n = min_n_for_depth(L, kind="L")
        radius = math.sqrt(C * n) * (2 + 2)
        assert radius == pytest.approx(2 ** (L + 3) * math.sqrt(n))
        assert radius == pytest.approx(n / 3)
        assert maxcut_depth_bounds(n, kind="L") == pytest.approx(L)


def test_dominance_suites_small():
    assert suites.chebyshev_dominance(circuits=2, n=4, observables=4).passed
    assert suites.depol_tail_dominance(n=4, depths=(1, 2), per_depth=2).passed
    assert suites.transfer_concentration_dominance(trials=10).passed
    assert suites.noisy_annealer_dominance(Ts=(2.0,), dt=0.01).passed
