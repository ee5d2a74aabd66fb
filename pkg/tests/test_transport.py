import math

import mpmath
import numpy as np
import pytest

from qotbounds.errors import DomainError, SizeError, ValidationError
from qotbounds.maxcut import Graph, maxcut_hamiltonian, random_regular_bipartite
from qotbounds.numerics import PAULI, embed, trace_norm
from qotbounds.quantum import (InteractionGraphParams, MeasuredDistribution, Observable,
                               QAOAConfig, build_qaoa_circuit, ghz_state, maximally_mixed,
                               measure_distribution, random_brickwork, random_state,
                               simulate_circuit)
from qotbounds.transport import (continuous_constants, distance_table, kms_norm, light_cone,
                                 lipschitz_classical, lipschitz_quantum_bound, poincare_constant,
                                 polylog_neg, spectral_tail, symmetric_concentration_check,
                                 variance, w1_classical, w1_quantum_bounds)


def random_hermitian(d, rng):
    A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (A + A.conj().T) / 2


def random_dist(n, rng, support=None):
    p = rng.random(2 ** n)
    if support is not None:
        p[rng.permutation(2 ** n)[support:]] = 0
    return p / p.sum()


def test_lipschitz_classical_examples():
    n = 5
    weight = np.array([bin(x).count("1") for x in range(2 ** n)], dtype=float)
    assert lipschitz_classical(weight).value == 1.0
    for D, N in ((2, 6), (3, 8)):
        G = random_regular_bipartite(N, D, seed=1)
        assert lipschitz_classical(maxcut_hamiltonian(G)).value == pytest.approx(D)


def test_lipschitz_classical_rejects_nondiagonal():
    with pytest.raises(ValidationError):
        lipschitz_classical(Observable.from_matrix(PAULI["X"]))


def test_lipschitz_per_vertex_consistent():
    f = np.random.default_rng(0).normal(size=16)
    est = lipschitz_classical(f)
    assert est.value == est.per_vertex.max()
    brute = max(abs(f[x] - f[x ^ (1 << k)]) for x in range(16) for k in range(4))
    assert est.value == pytest.approx(brute)


def test_lipschitz_quantum_single_site():
    est = lipschitz_quantum_bound(embed(PAULI["Z"], [0], (2, 2)))
    np.testing.assert_allclose(est.per_vertex, [2, 0], atol=1e-14)
    assert est.value == pytest.approx(2)
    assert est.mode == "surrogate_quantum"


def test_lipschitz_quantum_sum_of_z():
    n = 4
    O = sum(embed(PAULI["Z"], [v], (2,) * n) for v in range(n))
    assert lipschitz_quantum_bound(O).value == pytest.approx(2)


def test_surrogate_dominates_classical():
    rng = np.random.default_rng(1)
    for _ in range(10):
        f = rng.normal(size=16)
        exact = lipschitz_classical(f).value
        sur = lipschitz_quantum_bound(np.diag(f)).value
        assert exact - 1e-12 <= sur <= 2 * exact + 1e-12


def test_certified_brackets():
    rng = np.random.default_rng(2)
    O = random_hermitian(8, rng)
    est = lipschitz_quantum_bound(O, certified=True)
    sur = lipschitz_quantum_bound(O).per_vertex
    lo, hi = est.brackets[:, 0], est.brackets[:, 1]
    assert np.all(lo <= hi + 1e-9)
    # exact ∂_v lies in [∂̃_v / 2, ∂̃_v]
    assert np.all(hi <= sur + 1e-9)
    assert np.all(hi >= sur / 2 - 1e-9)


def test_variance_examples():
    rho = random_state(2, np.random.default_rng(3))
    assert variance(rho, np.eye(4)) == pytest.approx(0, abs=1e-14)
    assert variance(maximally_mixed(1), PAULI["Z"]) == pytest.approx(1)


def test_kms_below_variance():
    rng = np.random.default_rng(4)
    for _ in range(20):
        sigma = random_state(3, rng).matrix
        H = random_hermitian(8, rng)
        centered = H - np.real(np.trace(sigma @ H)) * np.eye(8)
        assert kms_norm(sigma, centered) ** 2 <= variance(sigma, H) + 1e-9


def test_spectral_tail():
    # Z on |+>: outcomes ±1 around mean 0
    plus = np.full((2, 2), 0.5)
    assert spectral_tail(plus, PAULI["Z"], 1.0) == pytest.approx(1)
    assert spectral_tail(plus, PAULI["Z"], 1.5) == 0.0


def test_w1_classical_trivial():
    rng = np.random.default_rng(5)
    mu = random_dist(4, rng)
    assert w1_classical(mu, mu).value == pytest.approx(0, abs=1e-12)
    for n in (1, 3, 6):
        a = MeasuredDistribution(n, np.array([0], dtype=np.uint64), np.array([1.0]))
        b = MeasuredDistribution(n, np.array([2 ** n - 1], dtype=np.uint64), np.array([1.0]))
        assert w1_classical(a, b).value == pytest.approx(n)


def test_w1_classical_duality_certificate():
    rng = np.random.default_rng(6)
    for _ in range(10):
        mu, nu = random_dist(6, rng, support=20), random_dist(6, rng, support=30)
        res = w1_classical(mu, nu)
        assert abs(res.value - res.dual_value) <= 1e-8
        assert res.slackness <= 1e-8
        f = res.potential_at(np.arange(64))
        assert lipschitz_classical(f).value <= 1 + 1e-9
        assert np.dot(f, mu - nu) == pytest.approx(res.value, abs=1e-8)
        np.testing.assert_allclose(res.coupling.sum(axis=1), mu[res.source], atol=1e-9)


def test_w1_methods_agree():
    rng = np.random.default_rng(7)
    mu, nu = random_dist(5, rng), random_dist(5, rng)
    a = w1_classical(mu, nu, method="transport").value
    b = w1_classical(mu, nu, method="flow").value
    assert a == pytest.approx(b, abs=1e-8)


def test_w1_classical_metric():
    rng = np.random.default_rng(8)
    for _ in range(10):
        a, b, c = (random_dist(4, rng) for _ in range(3))
        ab, bc, ac = (w1_classical(x, y).value for x, y in ((a, b), (b, c), (a, c)))
        assert ac <= ab + bc + 1e-9
        assert ab == pytest.approx(w1_classical(b, a).value, abs=1e-9)


def test_w1_classical_errors():
    with pytest.raises(ValidationError):
        w1_classical(np.ones(4) / 4, np.ones(8) / 8)
    big = np.ones(2 ** 13) / 2 ** 13
    with pytest.raises(SizeError):
        w1_classical(big, big)


def test_w1_quantum_identical():
    rho = random_state(2, np.random.default_rng(9))
    res = w1_quantum_bounds(rho, rho)
    assert (res.lower, res.upper) == (0.0, 0.0)


def test_w1_quantum_single_qubit_collapse():
    rng = np.random.default_rng(10)
    for _ in range(10):
        r, s = random_state(1, rng).matrix, random_state(1, rng).matrix
        half = trace_norm(r - s) / 2
        res = w1_quantum_bounds(r, s)
        assert res.lower == pytest.approx(half, abs=1e-9)
        assert res.upper == pytest.approx(half, abs=1e-9)


def test_w1_quantum_diagonal_contains_classical():
    rng = np.random.default_rng(11)
    for _ in range(5):
        p, q = random_dist(4, rng), random_dist(4, rng)
        res = w1_quantum_bounds(np.diag(p), np.diag(q), orderings=8)
        exact = w1_classical(p, q).value
        assert res.lower >= exact - 1e-9
        assert res.lower <= res.upper + 1e-9


def test_w1_quantum_interval_random():
    rng = np.random.default_rng(12)
    for _ in range(5):
        res = w1_quantum_bounds(random_state(3, rng), random_state(3, rng), orderings=8)
        assert res.lower <= res.upper + 1e-9
        assert res.gap >= -1e-9


def test_light_cone_single_layer():
    c = random_brickwork(6, 1, np.random.default_rng(13))
    cones = light_cone(c)
    assert all(len(cone) == 2 for cone in cones.cones)
    assert poincare_constant("noiseless", c).value == 16


def test_light_cone_brickwork_growth():
    rng = np.random.default_rng(14)
    for L in range(1, 5):
        assert light_cone(random_brickwork(8, L, rng)).I_max <= 2 ** L


def test_light_cone_qaoa_is_graph_ball():
    for G, D in ((Graph.cycle(8), 2), (random_regular_bipartite(10, 3, seed=0), 3)):
        dist = G.distances()
        for P in (1, 2):
            cfg = QAOAConfig(P, (0.1,) * P, (0.2,) * P, G)
            cones = light_cone(build_qaoa_circuit(cfg))
            assert cones.I_max <= (D + 1) ** P
            for v in range(G.n):
                assert cones.cones[v] == frozenset(np.nonzero(dist[v] <= P)[0].tolist())


def test_noisy_poincare_dominates_noiseless():
    c = random_brickwork(8, 2, np.random.default_rng(15))
    assert poincare_constant("noisy", c).value >= poincare_constant("noiseless", c).value


def test_polylog_closed_forms():
    z = math.exp(-1)
    assert polylog_neg(0, z) == pytest.approx(z / (1 - z), abs=1e-14)
    assert polylog_neg(0, z) == pytest.approx(0.5819767068693265, abs=1e-12)
    assert polylog_neg(1, 0.5) == pytest.approx(2, abs=1e-13)
    assert polylog_neg(2, 0.3) == pytest.approx(0.3 * 1.3 / 0.7 ** 3, abs=1e-12)
    for k in (3, 6):
        assert polylog_neg(k, 0.6) == pytest.approx(float(mpmath.polylog(-k, 0.6)), rel=1e-12)
    with pytest.raises(DomainError):
        polylog_neg(0, 1.0)


def test_continuous_constants():
    c0, c1 = continuous_constants(InteractionGraphParams(2, 1, 1.0, 1.0))
    assert c0 == 64
    assert c1 == pytest.approx(64 / 3 / (math.e - 1), abs=1e-12)
    assert c1 == pytest.approx(12.4155, abs=1e-4)


def test_continuous_poincare_forms():
    G = Graph.path(9)
    params = InteractionGraphParams.from_graph(G)
    d = distance_table(G, root=4)
    assert d[0] == 0 and np.all(np.diff(d) >= 0)
    exact = poincare_constant("continuous", params=params, t=0.3, d_table=d)
    simple = poincare_constant("continuous", params=params, t=0.3, exact=False)
    assert exact.value > 0 and simple.value > 0
    with pytest.raises(ValidationError):
        poincare_constant("continuous", params=params, t=0.3)


def test_product_state_poincare():
    rng = np.random.default_rng(16)
    n = 3
    for _ in range(10):
        rho = random_state(1, rng).matrix
        for _ in range(n - 1):
            rho = np.kron(rho, random_state(1, rng).matrix)
        O = random_hermitian(2 ** n, rng)
        sur = lipschitz_quantum_bound(O)
        assert variance(rho, O) <= np.sum(sur.per_vertex ** 2) + 1e-9


def test_light_cone_contraction_of_surrogates():
    rng = np.random.default_rng(17)
    n = 4
    for L in (1, 2):
        for _ in range(5):
            c = random_brickwork(n, L, rng)
            U = c.unitary()
            O = random_hermitian(2 ** n, rng)
            lhs = lipschitz_quantum_bound(U.conj().T @ O @ U).per_vertex
            rhs = lipschitz_quantum_bound(O).per_vertex
            for v, cone in enumerate(light_cone(c).cones):
                assert lhs[v] <= 2 * sum(rhs[w] for w in cone) + 1e-9


def test_symmetric_concentration_trivial():
    mu = measure_distribution(maximally_mixed(3))
    rep = symmetric_concentration_check(mu, [0, 5], [0, 5], 16)
    assert rep.d_H == 0 and rep.passed
    with pytest.raises(DomainError):
        symmetric_concentration_check(measure_distribution(ghz_state(3)), [0], [1], 16)


def test_ghz_obstruction():
    n = 10
    mu = measure_distribution(ghz_state(n))
    rep = symmetric_concentration_check(mu, [0], [2 ** n - 1], 4.0)
    assert rep.d_H == n
    assert rep.rhs == pytest.approx(math.sqrt(4 * n) * 2 * math.sqrt(2))
    # C = O(1) is too small for large n; at n = 64 the check fails
    big = MeasuredDistribution(64, np.array([0, 2 ** 64 - 1], dtype=np.uint64), np.array([0.5, 0.5]))
    assert not symmetric_concentration_check(big, [0], [2 ** 64 - 1], 4.0).passed


def test_symmetric_concentration_brickwork():
    rng = np.random.default_rng(18)
    n = 8
    c = random_brickwork(n, 2, rng)
    C = poincare_constant("noiseless", c)
    mu = measure_distribution(simulate_circuit(c, random_state(n, rng, rank=1)).final)
    for _ in range(20):
        A = rng.choice(2 ** n, size=int(rng.integers(1, 20)), replace=False)
        B = rng.choice(2 ** n, size=int(rng.integers(1, 20)), replace=False)
        assert symmetric_concentration_check(mu, A, B, C).passed
