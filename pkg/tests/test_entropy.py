import math

import numpy as np
import pytest
from scipy.linalg import expm

from qotbounds.entropy import (annealer_entropy_bound, annealer_purity_threshold, d2_plus_state,
                               generic_decay_bound, h_of_T, max_divergence, mixer_layer_dinf,
                               moments_ordered, purity_bound_from_entropy, purity_decay_unital,
                               qaoa_entropy_bound, r2_rate, renyi_divergence, sdpi_max_p, z_mixer)
from qotbounds.errors import DomainError, ValidationError
from qotbounds.maxcut import Graph
from qotbounds.numerics import PAULI
from qotbounds.quantum import (NoiseModel, QAOAConfig, basis_state, build_qaoa_circuit,
                               generalized_amplitude_damping, maximally_mixed, plus_state,
                               product_state_tau, random_brickwork, random_state, simulate_circuit,
                               tau)
from qotbounds.suites import product_state_counterexample

from test_numerics import random_channel

LN2 = math.log(2)


def test_divergence_of_equal_states():
    rho = random_state(2, np.random.default_rng(0))
    assert abs(renyi_divergence(rho, rho, 2)) < 1e-12
    assert abs(max_divergence(rho, rho)) < 1e-12


def test_d2_pure_vs_maximally_mixed():
    for n in (1, 2, 3):
        rho = basis_state(0, n)
        assert renyi_divergence(rho, maximally_mixed(n), 2) == pytest.approx(n * LN2, abs=1e-12)


def test_support_violation_is_infinite():
    assert renyi_divergence(basis_state(1, 1), basis_state(0, 1), 2) == math.inf
    assert max_divergence(basis_state(1, 1), basis_state(0, 1)) == math.inf
    with pytest.raises(ValidationError):
        renyi_divergence(basis_state(0, 1), maximally_mixed(1), 1.0)


def test_dinf_of_tau_vs_identity():
    for q in (0.1, 0.3, 0.5):
        for n in (1, 3):
            got = max_divergence(product_state_tau(q, n), maximally_mixed(n))
            assert got == pytest.approx(n * math.log(2 * (1 - q)), abs=1e-12)


def test_monotone_in_alpha():
    rng = np.random.default_rng(1)
    for _ in range(10):
        rho, sigma = random_state(2, rng), random_state(2, rng)
        vals = [renyi_divergence(rho, sigma, a) for a in (1.5, 2, 3, 4, 8)]
        vals.append(max_divergence(rho, sigma))
        assert all(b >= a - 1e-10 for a, b in zip(vals, vals[1:]))


def test_additivity():
    rng = np.random.default_rng(2)
    for alpha in (1.5, 2, 4, np.inf):
        r1, s1 = random_state(1, rng), random_state(1, rng)
        r2, s2 = random_state(2, rng), random_state(2, rng)
        joint = renyi_divergence(np.kron(r1.matrix, r2.matrix), np.kron(s1.matrix, s2.matrix), alpha)
        parts = renyi_divergence(r1, s1, alpha) + renyi_divergence(r2, s2, alpha)
        assert abs(joint - parts) < 1e-9


def test_data_processing():
    rng = np.random.default_rng(3)
    for alpha in (1.5, 2, 4):
        for _ in range(10):
            rho, sigma = random_state(2, rng).matrix, random_state(2, rng).matrix
            K = random_channel(4, rng)

            def N(X):
                return np.einsum("kab,bc,kdc->ad", K, X, K.conj())

            assert renyi_divergence(N(rho), N(sigma), alpha) <= renyi_divergence(rho, sigma, alpha) + 1e-9


def test_mixer_trivial_cases():
    assert z_mixer(0.0, 0.3) == pytest.approx(2)
    assert mixer_layer_dinf(0.0, 0.3, 5) == 0.0
    for b in (0.1, 0.7, 2.0):
        assert z_mixer(b, 0.5) == pytest.approx(2)
        assert mixer_layer_dinf(b, 0.5, 4) == pytest.approx(0, abs=1e-7)
    with pytest.raises(DomainError):
        z_mixer(0.1, 1.0)


def test_mixer_matches_direct_computation():
    beta, q = 0.1, 0.4
    U = expm(1j * beta * PAULI["X"])
    t = tau(q)
    direct = max_divergence(U @ t @ U.conj().T, t)
    assert mixer_layer_dinf(beta, q, 1) == pytest.approx(direct, abs=1e-12)
    assert mixer_layer_dinf(beta, q, 3) == pytest.approx(3 * direct, abs=1e-12)


def test_z_at_least_two():
    for b in np.linspace(0, np.pi, 21):
        for q in np.linspace(0.05, 0.95, 19):
            assert z_mixer(b, q) >= 2 - 1e-12


def test_d2_plus_state():
    assert d2_plus_state(0.5, 3) == pytest.approx(3 * LN2, abs=1e-14)
    direct = renyi_divergence(plus_state(1), product_state_tau(0.3, 1), 2)
    assert d2_plus_state(0.3, 1) == pytest.approx(direct, abs=1e-12)
    assert d2_plus_state(0.3, 4) == pytest.approx(4 * d2_plus_state(0.3, 1), abs=1e-12)
    with pytest.raises(DomainError):
        d2_plus_state(0.0, 1)


def test_generic_ledger_geometric():
    n = 5
    led = generic_decay_bound(n * LN2, 0.19, [0.0] * 6)
    np.testing.assert_allclose(led.running, [n * LN2 * 0.81 ** L for L in range(7)], rtol=1e-14)
    assert [e["layer"] for e in led.entries] == list(range(1, 7))


def test_generic_ledger_last_penalty():
    led = generic_decay_bound(2.0, 0.3, [0.0, 0.0, 0.5])
    assert led.bound == pytest.approx(0.7 ** 3 * 2.0 + 0.5, abs=1e-15)


def test_generic_ledger_double_sum():
    rng = np.random.default_rng(4)
    for _ in range(20):
        m = int(rng.integers(1, 12))
        qa = rng.uniform(0.01, 1)
        D0 = rng.uniform(0, 5)
        pens = rng.uniform(0, 1, m)
        direct = (1 - qa) ** m * D0 + sum((1 - qa) ** (m - t) * pens[t - 1] for t in range(1, m + 1))
        assert generic_decay_bound(D0, qa, pens).bound == pytest.approx(direct, rel=1e-12)


def test_generic_ledger_validation():
    with pytest.raises(ValidationError):
        generic_decay_bound(1.0, 1.2, [])
    with pytest.raises(ValidationError):
        generic_decay_bound(1.0, 0.2, [-0.1])


def test_qaoa_ledger_unital():
    beta = (0.3, 0.8, 1.2)
    led = qaoa_entropy_bound(beta, 0.5, 0.2, 6)
    assert led.bound == pytest.approx(0.8 ** 6 * 6 * LN2, rel=1e-12)
    assert len(led.penalties) == 6


def test_qaoa_ledger_accepts_config():
    cfg = QAOAConfig(2, (0.1, 0.2), (0.3, 0.4), Graph.cycle(4))
    assert qaoa_entropy_bound(cfg, 0.4, 0.1, 4) == qaoa_entropy_bound((0.3, 0.4), 0.4, 0.1, 4)


def test_qaoa_ledger_dominates_simulation():
    q = 0.4
    G = Graph.cycle(4)
    rng = np.random.default_rng(5)
    sigma = product_state_tau(q, 4)
    for p in (0.05, 0.1, 0.3):
        nm = NoiseModel.generalized_depolarizing(p, q)
        for _ in range(5):
            beta, gamma = rng.uniform(0, np.pi, 2), rng.uniform(0, np.pi, 2)
            c = build_qaoa_circuit(QAOAConfig(2, tuple(gamma), tuple(beta), G))
            out = simulate_circuit(c, plus_state(4), nm, noise_before_first=True).final
            exact = renyi_divergence(out, sigma, 2)
            assert exact <= qaoa_entropy_bound(beta, q, nm.contraction["q_alpha"], 4).bound


def test_annealer_zero_schedule():
    r = 0.7
    D0 = 1.3
    zero = ((0.0, 1.0), (0.0, 0.0))
    assert annealer_entropy_bound(0.3, 4.0, r, zero, 2, D0) == pytest.approx(math.exp(-4 * r) * D0)
    assert annealer_entropy_bound(0.3, 4.0, r, lambda s: 0.0, 2, D0) == pytest.approx(
        math.exp(-4 * r) * D0)


def test_annealer_unital_no_penalty():
    assert annealer_entropy_bound(0.5, 3.0, 1.0, ((0, 1), (1, 0)), 3) == pytest.approx(
        math.exp(-3.0) * 3 * LN2)
    with pytest.raises(DomainError):
        annealer_entropy_bound(0.6, 3.0, 1.0, ((0, 1), (1, 0)), 3)


def test_h_of_T_matches_general_form():
    q, T = 0.4, 10.0
    r = 2 * (1 - q) / math.log(1 / q)
    for f in (((0.0, 1.0), (1.0, 0.0)), lambda s: 1 - s):
        general = annealer_entropy_bound(q, T, r, f, 1)
        assert general == pytest.approx(h_of_T(q, T), abs=1e-9)
    assert annealer_entropy_bound(q, T, r, lambda s: 1 - s, 3) == pytest.approx(3 * h_of_T(q, T),
                                                                                abs=1e-9)


def test_h_of_T_literal_sign():
    # the literal prefactor is negative for q < 1/2 and undercuts the decayed initial term
    q, T = 0.4, 2.0
    assert h_of_T(q, T, literal=True) < h_of_T(q, T)
    assert h_of_T(q, 0.0) == pytest.approx(d2_plus_state(q, 1), abs=1e-12)


def test_r2_rate():
    assert r2_rate(np.eye(2) / 2).value == pytest.approx(1 / LN2, abs=1e-12)
    for q in (0.1, 0.3):
        assert r2_rate(tau(q)).value == pytest.approx(2 * (1 - q) / math.log(1 / q), abs=1e-12)
    vals = [r2_rate(tau(q)).value for q in (0.3, 0.1, 0.01, 1e-4)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    with pytest.raises(DomainError):
        r2_rate(np.diag([1.0, 0.0]))


def _gen_depol_kraus(p, q):
    return NoiseModel.generalized_depolarizing(p, q).kraus


def test_sdpi_self_inverse():
    res = sdpi_max_p(_gen_depol_kraus(0.25, 0.3), tau(0.3))
    assert res.p_star >= 0.25 - 1e-6
    assert res.monotone


def test_sdpi_depolarizing():
    res = sdpi_max_p(NoiseModel.depolarizing(0.2).kraus, np.eye(2) / 2)
    assert res.p_star >= 0.2 - 1e-6
    assert res.monotone
    assert res.factor == pytest.approx((1 - res.p_star) ** (1 / (2 * LN2)))


def test_sdpi_amplitude_damping_bracket():
    res = sdpi_max_p(generalized_amplitude_damping(0.4, 0.3), tau(0.3))
    assert 0 < res.p_star < 1
    assert res.norm_at_p <= 1 + 1e-8
    assert res.norm_above > 1


def test_sdpi_rejects_wrong_fixed_point():
    with pytest.raises(DomainError):
        sdpi_max_p(generalized_amplitude_damping(0.4, 0.3), tau(0.2))


def test_purity_full_depolarization():
    for n in (1, 4):
        assert purity_decay_unital(n, 1, r2=1.0) == pytest.approx(2.0 ** -n)
        assert purity_decay_unital(n, 1, p=1.0) == pytest.approx(
            float(np.trace(maximally_mixed(n).matrix @ maximally_mixed(n).matrix).real))
    with pytest.raises(ValidationError):
        purity_decay_unital(2, 1)


def test_purity_depolarizing_example():
    assert purity_decay_unital(20, 5, p=0.1) == pytest.approx(math.exp(-LN2 * (1 - 0.9 ** 10) * 20),
                                                              rel=1e-14)


def test_purity_of_simulated_circuit_below_bound():
    rng = np.random.default_rng(6)
    n, p = 6, 0.1
    for L in (1, 2, 3):
        c = random_brickwork(n, L, rng)
        rho = random_state(n, rng, rank=1)
        out = simulate_circuit(c, rho, NoiseModel.depolarizing(p)).final
        assert out.purity() <= purity_decay_unital(n, L, p=p) + 1e-12
        assert moments_ordered(out)


def test_purity_from_entropy_saturation():
    q, eps = 0.3, 0.2
    for n in (5, 10):
        d2_bits = (1 - eps - math.log2(2 * (1 - q))) * n
        assert purity_bound_from_entropy(d2_bits, q, n, base="bits") == pytest.approx(2 ** (-eps * n))
        assert purity_bound_from_entropy(d2_bits * LN2, q, n) == pytest.approx(2 ** (-eps * n))


def test_purity_from_entropy_dominates_tau():
    # τ_q^{⊗n} itself has purity (q²+(1-q)²)^n and D_2 = 0
    q, n = 0.3, 4
    assert (q * q + (1 - q) ** 2) ** n <= purity_bound_from_entropy(0.0, q, n)


def test_annealer_purity_threshold():
    assert annealer_purity_threshold(0.5, 0.25).threshold_bits == pytest.approx(0.75)
    q, eps = 0.4, 0.1
    grid = np.arange(0.5, 40.0, 0.5)
    res = annealer_purity_threshold(q, eps, grid)
    assert res.monotone
    k = list(grid).index(res.first_T)
    assert h_of_T(q, grid[k]) / LN2 <= res.threshold_bits
    assert k == 0 or h_of_T(q, grid[k - 1]) / LN2 > res.threshold_bits
    with pytest.raises(DomainError):
        annealer_purity_threshold(0.3, 1 - math.log2(1.4))


def test_depolarizing_decay_counterexample():
    # one layer of depolarizing noise on a pure product state beats the (1-p)^2 factor
    out = product_state_counterexample(0.3, 1)
    assert out["d1"] == pytest.approx(math.log(1.49), abs=1e-12)
    assert out["d1"] > out["bound"]
    # the same input breaks the purity form: tr ρ² = 2^{-n} e^{D_2}
    assert math.exp(out["d1"]) / 2 > purity_decay_unital(1, 1, p=0.3)
