"""Brute-force verification suites.

Each suite simulates small instances exactly, evaluates the matching bound
and returns a :class:`SuiteResult`. The CLI ``verify`` command and the test
suite both call these functions.
"""

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from . import bounds, entropy, transport
from .maxcut import Graph, cut_diagonal, symmetry_experiment
from .numerics import PAULI, kron_all, trace_norm
from .quantum import (AnnealSchedule, CircuitArchitecture, DensityMatrix, InteractionGraphParams,
                      MeasuredDistribution, NoiseModel, QAOAConfig, basis_state, build_qaoa_circuit,
                      ghz_circuit, maximally_mixed, measure_distribution, mixer_gate, plus_state,
                      product_state_tau, random_brickwork, random_state, simulate_circuit,
                      simulate_lindblad, tau)

__all__ = ["SuiteResult", "SUITES", "run_suite"]


@dataclass
class SuiteResult:
    """Outcome of a verification suite.

    ``worst_slack`` is the smallest ``bound - measured`` seen (negative on a
    violation); ``details`` holds suite-specific numbers.
    """

    name: str
    checks: int = 0
    violations: int = 0
    worst_slack: float = math.inf
    details: dict = field(default_factory=dict)
    passed: Optional[bool] = None

    def record(self, slack: float, tol: float = 0.0):
        self.checks += 1
        self.worst_slack = min(self.worst_slack, float(slack))
        if slack < -tol:
            self.violations += 1

    def finish(self, extra: bool = True) -> "SuiteResult":
        self.passed = bool(self.violations == 0 and self.checks > 0 and extra)
        return self

    def to_dict(self) -> dict:
        return {"name": self.name, "checks": self.checks, "violations": self.violations,
                "worst_slack": self.worst_slack, "passed": self.passed, "details": self.details}


def _rng(seed):
    return np.random.default_rng(seed)


# --------------------------------------------------------------------------
# entropy decay under depolarizing noise


def depolarizing_decay(circuits: int = 30, ns=(4, 5, 6), depths=(1, 2, 3, 4), ps=(0.1, 0.3),
                       seed: int = 0) -> SuiteResult:
    """``D_2(N_V(ρ)‖I/2^n) <= (1-p)^{2L} D_2(ρ‖I/2^n)`` on Haar brickwork with random inputs."""
    rng = _rng(seed)
    res = SuiteResult("depolarizing")
    rows = []
    for _ in range(circuits):
        n, L, p = int(rng.choice(ns)), int(rng.choice(depths)), float(rng.choice(ps))
        arch = random_brickwork(n, L, rng)
        rho = random_state(n, rng, rank=int(rng.integers(1, 2 ** n + 1)))
        I = maximally_mixed(n)
        d0 = entropy.renyi_divergence(rho, I, 2)
        d1 = entropy.renyi_divergence(simulate_circuit(arch, rho, NoiseModel.depolarizing(p)).final, I, 2)
        bound = (1 - p) ** (2 * L) * d0
        res.record(bound - d1)
        rows.append((n, L, p, d0, d1, bound))
    res.details["rows"] = rows
    return res.finish()


def product_state_counterexample(p: float = 0.3, n: int = 1) -> dict:
    """Noise applied directly to ``|0...0>``: the ``(1-p)^2`` per-layer factor is exceeded."""
    rho = basis_state(0, n)
    I = maximally_mixed(n)
    arch = CircuitArchitecture(n, ())
    out = NoiseModel.depolarizing(p).apply_all(np.array(rho.matrix), n)
    d0 = entropy.renyi_divergence(rho, I, 2)
    d1 = entropy.renyi_divergence(out, I, 2)
    return {"d0": d0, "d1": d1, "bound": (1 - p) ** 2 * d0, "exact": n * math.log(1 + (1 - p) ** 2),
            "depth": arch.depth}


# --------------------------------------------------------------------------
# closed forms


def mixer_closed_form(grid: int = 50, tol: float = 1e-12) -> SuiteResult:
    """Single-qubit ``D_∞(U τ_q U† ‖ τ_q)`` against the closed form on a ``(β, q)`` grid."""
    res = SuiteResult("mixer")
    betas = np.linspace(0, np.pi, grid)
    qs = np.linspace(0.02, 0.98, grid)
    worst = 0.0
    for b in betas:
        U = mixer_gate(b)
        for q in qs:
            t = np.diag([q, 1 - q])
            s = np.diag([q ** -0.5, (1 - q) ** -0.5])
            direct = math.log(np.linalg.eigvalsh(s @ U @ t @ U.conj().T @ s).max())
            err = abs(direct - entropy.mixer_layer_dinf(b, q, 1))
            worst = max(worst, err)
            res.record(tol - err)
    res.details["max_error"] = worst
    return res.finish()


def plus_state_closed_form(qs=(0.1, 0.2, 0.3, 0.4, 0.5), n: int = 3, tol: float = 1e-12) -> SuiteResult:
    """``D_2(|+><+|^{⊗n} ‖ τ_q^{⊗n})`` against the direct matrix computation."""
    res = SuiteResult("plus-state")
    worst = 0.0
    for q in qs:
        for m in (1, n):
            direct = entropy.renyi_divergence(plus_state(m), product_state_tau(q, m), 2)
            err = abs(direct - entropy.d2_plus_state(q, m))
            worst = max(worst, err)
            res.record(tol - err)
    half = entropy.d2_plus_state(0.5, 1)
    res.details.update(max_error=worst, half=half, half_is_ln2=half == math.log(2))
    return res.finish(half == math.log(2))


# --------------------------------------------------------------------------
# transfer of concentration


def _random_projector(dim, rng):
    k = int(rng.integers(1, dim))
    Z = rng.normal(size=(dim, k)) + 1j * rng.normal(size=(dim, k))
    Q, _ = np.linalg.qr(Z)
    return Q @ Q.conj().T


def transfer_inequality(trials: int = 200, n: int = 3, alphas=(1.5, 2.0, 4.0), seed: int = 0
                        ) -> SuiteResult:
    """``tr[Eρ] <= exp(((α-1)/α)(D_α(ρ‖σ) + log tr[Eσ]))`` for random triples."""
    rng = _rng(seed)
    res = SuiteResult("transfer")
    dim = 2 ** n
    for _ in range(trials):
        rho = random_state(n, rng, rank=int(rng.integers(1, dim + 1)))
        sigma = random_state(n, rng)
        E = _random_projector(dim, rng)
        pr = float(np.real(np.vdot(E, rho.matrix)))
        ps = float(np.real(np.vdot(E, sigma.matrix)))
        for a in alphas:
            D = entropy.renyi_divergence(rho, sigma, a)
            res.record(bounds.transfer_rhs(D, a, ps) - pr, 1e-12)
    return res.finish()


def transfer_concentration_dominance(trials: int = 40, n: int = 3, alpha: float = 2.0,
                                     seed: int = 0) -> SuiteResult:
    """Concentration of ρ from a Gaussian profile fitted exactly to σ's spectral tails."""
    rng = _rng(seed)
    res = SuiteResult("transfer-concentration")
    dim = 2 ** n
    a_grid = np.linspace(0.05, 1.0, 20)
    for _ in range(trials):
        sigma = random_state(n, rng)
        rho = random_state(n, rng)
        H = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        O = (H + H.conj().T) / 2
        O = O / np.abs(np.linalg.eigvalsh(O)).max()
        ell = transport.lipschitz_quantum_bound(O).value
        c = 1.0
        mean_s = float(np.real(np.vdot(O, sigma.matrix)))
        w, V = np.linalg.eigh(O)

        def tail(state, a):
            sel = np.abs(w - mean_s) >= a * n
            P = V[:, sel]
            return float(np.real(np.trace(P.conj().T @ state @ P)))

        K = max(max(tail(sigma.matrix, a) * math.exp(c * a * a * n / ell ** 2) for a in a_grid), 1e-300)
        prof = bounds.GaussianProfile(K, c, ell)
        D = entropy.renyi_divergence(rho, sigma, alpha)
        for a in a_grid:
            res.record(bounds.transfer_concentration(D, alpha, prof, a, n, ell).value
                       - tail(rho.matrix, a), 1e-12)
    return res.finish()


# --------------------------------------------------------------------------
# Poincaré and symmetric concentration on shallow circuits


def _corpus(circuits, n, max_depth, seed):
    rng = _rng(seed)
    for _ in range(circuits):
        L = int(rng.integers(1, max_depth + 1))
        arch = random_brickwork(n, L, rng)
        sigma = simulate_circuit(arch, basis_state(0, n)).final
        yield arch, sigma, rng


def _random_observable(n, rng, diagonal):
    dims = (2,) * n
    if diagonal:
        f = rng.normal(size=2 ** n)
        return np.diag(f).astype(complex), transport.lipschitz_classical(f, n).value
    from .numerics import embed
    O = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for _ in range(int(rng.integers(1, 2 * n))):
        if rng.random() < 0.5:
            v = int(rng.integers(n))
            O += rng.normal() * embed(PAULI[str(rng.choice(list("XYZ")))], [v], dims)
        else:
            v, w = (int(x) for x in rng.choice(n, 2, replace=False))
            P = np.kron(PAULI[str(rng.choice(list("XYZ")))], PAULI[str(rng.choice(list("XYZ")))])
            O += rng.normal() * embed(P, [v, w], dims)
    # ∂_v >= ∂̃_v / 2, so half the surrogate is a rigorous lower bound
    return O, transport.lipschitz_quantum_bound(O).value / 2


def poincare(circuits: int = 20, n: int = 8, max_depth: int = 3, observables: int = 50,
             seed: int = 0) -> SuiteResult:
    """``Var_σ(O) <= 4 I_max² n ‖O‖_L²`` for outputs of noiseless brickwork circuits.

    Half the observables are diagonal (exact Lipschitz constant), half are
    random 1- and 2-local Pauli sums measured against a lower bound on
    their Lipschitz constant, so the comparison is never loosened.
    """
    res = SuiteResult("poincare")
    ratios = []
    for arch, sigma, rng in _corpus(circuits, n, max_depth, seed):
        C = transport.poincare_constant("noiseless", arch).value
        for k in range(observables):
            O, lip = _random_observable(n, rng, diagonal=k % 2 == 0)
            var = transport.variance(sigma, O)
            rhs = C * n * lip ** 2
            ratios.append(var / rhs if rhs > 0 else 0.0)
            res.record(rhs - var, 1e-10)
    res.details["max_ratio"] = max(ratios)
    return res.finish()


def chebyshev_dominance(circuits: int = 5, n: int = 6, max_depth: int = 2, observables: int = 10,
                        seed: int = 0) -> SuiteResult:
    """Exact spectral tails of shallow-circuit outputs against the Chebyshev bound."""
    res = SuiteResult("chebyshev")
    for arch, sigma, rng in _corpus(circuits, n, max_depth, seed):
        C = transport.poincare_constant("noiseless", arch).value
        for k in range(observables):
            O, lip = _random_observable(n, rng, diagonal=k % 2 == 0)
            sd = math.sqrt(transport.variance(sigma, O))
            for r in (0.5 * sd, sd, 2 * sd, 4 * sd):
                if r <= 0:
                    continue
                res.record(bounds.chebyshev_tail(C, n, lip, r).value
                           - transport.spectral_tail(sigma, O, r), 1e-12)
    return res.finish()


def symmetric_concentration(circuits: int = 20, n: int = 8, max_depth: int = 3, pairs: int = 100,
                            seed: int = 0, ghz_n: int = 64) -> SuiteResult:
    """Hamming separation of random set pairs against ``√(Cn)(μ(A)^{-1/2} + μ(B)^{-1/2})``.

    Also evaluates the GHZ distribution with ``C = 4``; that case must fail.
    """
    res = SuiteResult("symmetric-concentration")
    for arch, sigma, rng in _corpus(circuits, n, max_depth, seed):
        C = transport.poincare_constant("noiseless", arch).value
        mu = measure_distribution(sigma)
        labels = mu.outcomes
        for _ in range(pairs):
            A = rng.choice(labels, size=int(rng.integers(1, 9)), replace=False)
            B = rng.choice(labels, size=int(rng.integers(1, 9)), replace=False)
            rep = transport.symmetric_concentration_check(mu, A, B, C, n)
            res.record(rep.rhs - rep.d_H)
    ghz = ghz_obstruction(ghz_n)
    res.details["ghz"] = ghz
    return res.finish(not ghz["passed"])


def ghz_obstruction(n: int = 64, C: float = 4.0) -> dict:
    """GHZ outcome distribution: ``d_H = n`` against ``2√2 √(Cn)``."""
    full = np.uint64(2 ** n - 1) if n < 64 else np.uint64(0xFFFFFFFFFFFFFFFF)
    mu = MeasuredDistribution(n, np.array([0, full], dtype=np.uint64), np.array([0.5, 0.5]))
    rep = transport.symmetric_concentration_check(mu, [0], [full], C, n)
    return {"n": n, "C": C, "d_H": int(rep.d_H), "rhs": rep.rhs, "passed": rep.passed}


def ghz_simulated(n: int = 6) -> dict:
    """Simulated GHZ circuit: its own light-cone constant is large enough to pass."""
    arch = ghz_circuit(n)
    sigma = simulate_circuit(arch, basis_state(0, n)).final
    C = transport.poincare_constant("noiseless", arch).value
    rep = transport.symmetric_concentration_check(measure_distribution(sigma), [0], [2 ** n - 1], C, n)
    rep4 = transport.symmetric_concentration_check(measure_distribution(sigma), [0], [2 ** n - 1], 4.0, n)
    return {"n": n, "C": C, "passed": rep.passed, "passed_C4": rep4.passed, "d_H": rep.d_H}


# --------------------------------------------------------------------------
# Wasserstein


def w1(pairs: int = 100, triples: int = 100, n: int = 6, seed: int = 0, tol: float = 1e-8
       ) -> SuiteResult:
    """Primal/dual agreement and triangle inequality for the classical W1."""
    rng = _rng(seed)
    res = SuiteResult("w1")
    N = 2 ** n

    def draw():
        x = rng.dirichlet(np.full(N, 0.5))
        if rng.random() < 0.3:
            x[rng.random(N) < 0.5] = 0
            if x.sum() == 0:
                x[0] = 1
        return x / x.sum()

    gap = 0.0
    for _ in range(pairs):
        r = transport.w1_classical(draw(), draw())
        g = abs(r.value - r.dual_value)
        gap = max(gap, g)
        res.record(tol - g)
    for _ in range(triples):
        a, b, c = draw(), draw(), draw()
        ab = transport.w1_classical(a, b).value
        bc = transport.w1_classical(b, c).value
        ac = transport.w1_classical(a, c).value
        res.record(ab + bc - ac, 1e-9)
    res.details["max_primal_dual_gap"] = gap
    return res.finish()


# --------------------------------------------------------------------------
# annealer


def annealer(q: float = 0.4, Ts=(2.0, 5.0, 10.0), n: int = 3, dt: float = 0.005) -> SuiteResult:
    """Noisy linear-schedule annealer on a triangle started in ``|+>^{⊗n}``.

    Checks ``D_2(ρ_T‖τ_q^{⊗n}) <= n h(T)`` for each total time ``T`` and
    that halving the integrator step moves the final state by less than 1e-6
    in trace norm.
    """
    res = SuiteResult("annealer")
    G = Graph.complete(n) if n == 3 else Graph.cycle(n)
    sig = product_state_tau(q, n)
    rows, halving = [], 0.0
    for T in Ts:
        sched = AnnealSchedule.linear(T, q)
        step = min(dt, T / 100)
        out = simulate_lindblad(sched, G, plus_state(n), step, samples=2).final
        half = simulate_lindblad(sched, G, plus_state(n), step / 2, samples=2).final
        diff = trace_norm(out.matrix - half.matrix)
        halving = max(halving, diff)
        d2 = entropy.renyi_divergence(out, sig, 2)
        b = n * entropy.h_of_T(q, T)
        res.record(b - d2, 1e-12)
        rows.append({"T": T, "D2": d2, "bound": b, "literal": n * entropy.h_of_T(q, T, literal=True),
                     "dt_halving": diff})
    res.details.update(rows=rows, dt_halving=halving)
    return res.finish(halving < 1e-6)


def noisy_annealer_dominance(q: float = 0.4, Ts=(2.0, 5.0), n: int = 3, eps_grid=(0.05, 0.2, 1.0),
                             dt: float = 0.01) -> SuiteResult:
    """Probability that the final energy sits below the concentration level."""
    res = SuiteResult("noisy-annealer")
    G = Graph.complete(n)
    from .quantum import zz_hamiltonian
    H = -zz_hamiltonian(n, sorted(G.edges))
    lip = transport.lipschitz_classical(H, n).value
    mean = float(np.dot(np.real(np.diag(product_state_tau(q, n).matrix)), H))
    for T in Ts:
        st = simulate_lindblad(AnnealSchedule.linear(T, q), G, plus_state(n), min(dt, T / 100),
                               samples=2).final
        p = np.real(np.diag(st.matrix))
        for eps in eps_grid:
            level, prob = bounds.noisy_annealer_tail(q, T, eps, n, lip, mean)
            res.record(prob.value - float(p[H <= level].sum()), 1e-12)
    return res.finish()


# --------------------------------------------------------------------------
# purity


def purity(n: int = 6, p: float = 0.2, depths=(1, 2, 3, 4), per_depth: int = 5, seed: int = 0
           ) -> SuiteResult:
    """``tr ρ² <= exp(-ln2 (1-(1-p)^{2L}) n)`` for noisy brickwork with Haar-random pure inputs."""
    rng = _rng(seed)
    res = SuiteResult("purity")
    rows = []
    for L in depths:
        for _ in range(per_depth):
            arch = random_brickwork(n, L, rng)
            rho = random_state(n, rng, rank=1)
            out = simulate_circuit(arch, rho, NoiseModel.depolarizing(p)).final
            b = entropy.purity_decay_unital(n, L, p=p)
            res.record(b - out.purity(), 1e-12)
            rows.append((L, out.purity(), b))
    res.details["rows"] = rows
    return res.finish()


# --------------------------------------------------------------------------
# depolarizing tail and mitigation


def depol_tail_dominance(n: int = 6, depths=(1, 2, 3), p: float = 0.2, per_depth: int = 3,
                         eps_grid=(0.1, 0.3, 0.6), seed: int = 0) -> SuiteResult:
    """Exact ``P(|H| >= level)`` of a noisy circuit against the depolarizing tail bound."""
    rng = _rng(seed)
    res = SuiteResult("depol-tail")
    from .quantum import zz_hamiltonian
    H = zz_hamiltonian(n, [(i, (i + 1) % n) for i in range(n)])
    lip = transport.lipschitz_classical(H, n).value
    for L in depths:
        for _ in range(per_depth):
            arch = random_brickwork(n, L, rng)
            out = simulate_circuit(arch, random_state(n, rng, rank=1), NoiseModel.depolarizing(p)).final
            pr = np.real(np.diag(out.matrix))
            for eps in eps_grid:
                level, prob = bounds.depol_tail(p, L, eps, n, lip)
                res.record(prob.value - float(pr[np.abs(H) >= level].sum()), 1e-12)
    return res.finish()


def mitigation_dominance(n: int = 4, m: int = 3, p: float = 0.6, rs=(0.35, 0.4, 0.45, 0.5),
                         eps_frac: float = 0.2, seed: int = 0) -> SuiteResult:
    """Min-of-``m`` energy estimator over noisy copies, enumerated over all ``2^{nm}`` outcomes.

    Reference state ``σ = I/2^n`` (``K = c = 1``), observable the cut
    function of the ``n``-cycle, ``f = min`` with ``L_f = 1``.
    """
    rng = _rng(seed)
    res = SuiteResult("mitigation")
    G = Graph.cycle(n)
    cut = cut_diagonal(G).astype(float)
    l0 = transport.lipschitz_classical(cut, n).value
    mean = float(cut.mean())
    I = maximally_mixed(n)
    copies, d2s = [], []
    for _ in range(m):
        arch = random_brickwork(n, 2, rng)
        st = simulate_circuit(arch, random_state(n, rng, rank=1), NoiseModel.depolarizing(p)).final
        copies.append(np.real(np.diag(st.matrix)))
        d2s.append(entropy.renyi_divergence(st, I, 2))
    # distribution of the minimum over independent copies
    vals = np.unique(cut)
    cdf_above = np.ones_like(vals)
    for pr in copies:
        cdf_above = cdf_above * np.array([pr[cut >= v].sum() for v in vals])
    pmf = cdf_above - np.r_[cdf_above[1:], 0.0]
    applicable = 0
    for r in rs:
        eps = eps_frac * r * r
        try:
            mb = bounds.mitigation_concentration(m, bounds.min_of_m_K, 1.0, l0, 1.0, r, eps, n, d2s)
        except Exception as exc:  # precondition fails: record and move on
            res.details.setdefault("not_applicable", []).append((r, str(exc)))
            continue
        applicable += 1
        exact = float(pmf[np.abs(vals - mean) > mb.deviation].sum())
        res.record(mb.value - exact, 1e-12)
        res.record(mb.transferred - exact, 1e-12)
    res.details.update(d2=d2s, applicable=applicable)
    return res.finish(applicable > 0)


# --------------------------------------------------------------------------
# Lieb-Robinson


def lieb_robinson(n: int = 7, ts=(0.25, 0.5, 1.0), k0s=(2, 3)) -> SuiteResult:
    """XX chain started in ``|0...0>``: restricted-evolution discrepancy against the bound."""
    from .quantum import lr_discrepancy

    res = SuiteResult("lieb-robinson")
    G = Graph.path(n)
    params = InteractionGraphParams.from_graph(G)
    XX = 0.5 * np.kron(PAULI["X"], PAULI["X"])
    terms = [((i, i + 1), XX, 1.0) for i in range(n - 1)]
    rho = basis_state(0, n)
    rows = []
    for k0 in k0s:
        if k0 < 2 * params.delta - 1:
            continue
        for t in ts:
            disc = lr_discrepancy(terms, {0}, set(range(k0)), t, rho)
            b = bounds.lr_bound(params, k0, t)
            res.record(b - disc)
            rows.append((k0, t, disc, b))
    res.details.update(rows=rows, v=params.v, M=params.M, D=params.D)
    return res.finish()


# --------------------------------------------------------------------------
# Max-Cut symmetry


def _qaoa_probs(cut, n, gammas, betas):
    psi = np.full(2 ** n, 2 ** (-n / 2), dtype=complex)
    for g, b in zip(gammas, betas):
        psi = psi * np.exp(1j * g * cut)
        c, s = math.cos(b), -1j * math.sin(b)
        t = psi.reshape((2,) * n)
        for v in range(n):
            a0 = np.take(t, 0, axis=v)
            a1 = np.take(t, 1, axis=v)
            t = np.stack([c * a0 + s * a1, s * a0 + c * a1], axis=v)
        psi = t.reshape(-1)
    return np.abs(psi) ** 2


def optimize_qaoa(G: Graph, P: int, grid: int = 11, refine: int = 20, seed: int = 0) -> tuple:
    """Grid search over ``γ ∈ [0, 2π)``, ``β ∈ [0, π)`` followed by BFGS from the best points.

    Returns ``(gammas, betas, refined energy, best grid energy)``.
    """
    n = G.n
    cut = cut_diagonal(G).astype(float)
    gs = np.linspace(0, 2 * np.pi, grid, endpoint=False)
    bs = np.linspace(0, np.pi, grid, endpoint=False)

    def energy(v):
        return float(_qaoa_probs(cut, n, v[:P], v[P:]) @ cut)

    import itertools
    scored = []
    if grid ** (2 * P) <= 200000:
        points = (np.array(c) for c in itertools.product(*([gs] * P + [bs] * P)))
    else:
        # grid too large: seeded random starting points instead
        rng = _rng(seed)
        points = (np.r_[rng.uniform(0, 2 * np.pi, P), rng.uniform(0, np.pi, P)] for _ in range(2000))
    for v in points:
        scored.append((energy(v), v))
    scored.sort(key=lambda x: -x[0])
    grid_best = scored[0][0]
    best_e, best_v = scored[0]
    for e0, v0 in scored[:refine]:
        r = minimize(lambda v: -energy(v), v0, method="BFGS")
        if -r.fun > best_e:
            best_e, best_v = -r.fun, r.x
    return best_v[:P], best_v[P:], best_e, grid_best


def symmetry(P: int = 2, grid: int = 11, refine: int = 20, seed: int = 0) -> SuiteResult:
    """Optimized QAOA on ``K_{3,3}``: ball probabilities around the optimal cut and its complement."""
    res = SuiteResult("symmetry")
    G = Graph.complete_bipartite(3, 3)
    gam, bet, e, e_grid = optimize_qaoa(G, P, grid, refine, seed)
    cfg = QAOAConfig(P, tuple(gam), tuple(bet), G)
    sigma = simulate_circuit(build_qaoa_circuit(cfg), plus_state(G.n)).final
    rep = symmetry_experiment(sigma, G)
    res.checks = 1
    ok = rep.mode == "assert" and rep.equal and rep.quarter
    res.violations = 0 if ok else 1
    res.worst_slack = rep.energy - rep.energy_threshold
    res.details.update(P=P, energy=rep.energy, grid_energy=e_grid, threshold=rep.energy_threshold,
                       p_opt=rep.p_opt, p_opt_bar=rep.p_opt_bar, preconditions=rep.preconditions,
                       mode=rep.mode, gamma=[float(x) for x in gam], beta=[float(x) for x in bet])
    res.passed = ok
    return res


SUITES = {
    "depolarizing": depolarizing_decay,
    "mixer": mixer_closed_form,
    "plus-state": plus_state_closed_form,
    "transfer": transfer_inequality,
    "transfer-concentration": transfer_concentration_dominance,
    "poincare": poincare,
    "chebyshev": chebyshev_dominance,
    "symmetric-concentration": symmetric_concentration,
    "w1": w1,
    "annealer": annealer,
    "noisy-annealer": noisy_annealer_dominance,
    "purity": purity,
    "depol-tail": depol_tail_dominance,
    "mitigation": mitigation_dominance,
    "lieb-robinson": lieb_robinson,
    "symmetry": symmetry,
}


def run_suite(name: str, **kw) -> SuiteResult:
    if name not in SUITES:
        from .errors import ValidationError
        raise ValidationError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](**kw)
