"""Lipschitz constants, Wasserstein-1 distances, light-cones and Poincaré constants."""

import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import coo_matrix

from . import kernels
from .errors import DomainError, SizeError, ValidationError
from .numerics import PAULI, check_hermitian, embed, partial_trace, trace_norm
from .quantum import (CircuitArchitecture, GateLayer, GraphHamiltonianLayer,
                      InteractionGraphParams, MeasuredDistribution, measure_distribution)

__all__ = [
    "LipschitzEstimate", "lipschitz_classical", "lipschitz_quantum_bound", "variance",
    "kms_norm", "W1Classical", "w1_classical", "W1Result", "w1_quantum_bounds",
    "LightCones", "light_cone", "light_cone_of_set", "PoincareConstant", "poincare_constant",
    "distance_table", "continuous_constants", "polylog_neg", "ConcentrationReport",
    "symmetric_concentration_check", "spectral_tail",
]


def _matrix(x):
    return check_hermitian(getattr(x, "matrix", x))


def _nqubits(dim):
    n = int(round(math.log2(dim)))
    if 2 ** n != dim:
        raise ValidationError(f"dimension {dim} is not a power of 2")
    return n


# --------------------------------------------------------------------------
# Lipschitz constants

@dataclass(frozen=True)
class LipschitzEstimate:
    """Lipschitz constant (or upper bound) with per-vertex contributions.

    ``brackets`` is filled in certified mode with ``(lower, upper)`` bounds
    on each exact ``∂_v``.
    """

    value: float
    mode: str
    per_vertex: np.ndarray
    brackets: Optional[np.ndarray] = None


def lipschitz_classical(f, n: Optional[int] = None) -> LipschitzEstimate:
    """Hamming Lipschitz constant of a function on ``{0,1}^n``.

    Parameters
    ----------
    f : array_like or Observable
        Values on all ``2**n`` bitstrings, or a diagonal observable.
    n : int, optional
        Number of bits; inferred from the length of ``f``.
    """
    if hasattr(f, "matrix"):
        m = np.asarray(f.matrix)
        if not getattr(f, "diagonal_flag", True):
            raise ValidationError("observable is not diagonal: use lipschitz_quantum_bound")
        f = np.real(np.diag(m))
    f = np.asarray(f, dtype=float)
    if f.ndim == 2:
        if np.max(np.abs(f - np.diag(np.diag(f)))) >= 1e-14:
            raise ValidationError("observable is not diagonal: use lipschitz_quantum_bound")
        f = np.diag(f)
    n = _nqubits(f.size) if n is None else n
    per = kernels.flip_lipschitz(f, n)
    return LipschitzEstimate(float(per.max()) if n else 0.0, "exact_classical", per)


def _vertex_residual(O, v, dims):
    n = len(dims)
    rest = [k for k in range(n) if k != v]
    if not rest:
        return O - np.trace(O) / dims[v] * np.eye(dims[v])
    red = partial_trace(O, dims, rest)
    return O - embed(red, rest, dims) / dims[v]


def _opnorm(A):
    return float(np.abs(np.linalg.eigvalsh((A + A.conj().T) / 2)).max())


def _certify_vertex(O, v, dims, iters=300):
    """Bracket ``min_Y ‖O - I_v ⊗ Y‖`` by alternating projection and a dual witness."""
    n = len(dims)
    rest = [k for k in range(n) if k != v]

    def project_affine(Z):
        # nearest point of {O - I_v ⊗ Y}
        R = Z - O
        if rest:
            red = embed(partial_trace(R, dims, rest), rest, dims) / dims[v]
        else:
            red = np.trace(R) / dims[v] * np.eye(O.shape[0])
        return O + red

    Z = _vertex_residual(O, v, dims)
    best_Z, hi = Z, _opnorm(Z)
    lo = 0.0
    c_lo, c_hi = 0.0, hi
    for _ in range(30):
        c = (c_lo + c_hi) / 2
        A = best_Z
        found = False
        for _ in range(iters // 30 + 5):
            w, V = np.linalg.eigh(A)
            B = (V * np.clip(w, -c, c)) @ V.conj().T
            A = project_affine(B)
            nA = _opnorm(A)
            if nA < hi:
                hi, best_Z = nA, A
            if nA <= c * (1 + 1e-9):
                found = True
                break
        if found:
            c_hi = min(c, hi)
        else:
            c_lo = c
        if c_hi - c_lo < 1e-9 * max(1.0, c_hi):
            break
    # dual witness: tr_v W = 0 kills every I_v ⊗ Y term
    w, V = np.linalg.eigh(best_Z)
    top = np.abs(w).max()
    for frac in (1.0, 0.99, 0.9, 0.5, 0.0):
        sel = np.abs(w) >= frac * top - 1e-15
        W0 = (V[:, sel] * np.sign(w[sel])) @ V[:, sel].conj().T
        W = _vertex_residual(W0, v, dims)
        nrm = trace_norm(W)
        if nrm > 1e-14:
            lo = max(lo, abs(float(np.real(np.vdot(W, O)))) / nrm)
    return lo, hi


def lipschitz_quantum_bound(O, certified: bool = False) -> LipschitzEstimate:
    """Upper bound on the quantum Lipschitz constant ``‖O‖_L``.

    The surrogate is ``∂̃_v = 2 ‖O - I_v ⊗ tr_v O / 2‖_∞``, which lies in
    ``[∂_v, 2 ∂_v]``. With ``certified=True`` each ``∂_v`` is also
    bracketed by alternating projection (upper) and a dual witness (lower);
    the reported value is then the certified upper bound.
    """
    M = _matrix(O)
    n = _nqubits(M.shape[0])
    dims = (2,) * n
    per = np.array([2 * _opnorm(_vertex_residual(M, v, dims)) for v in range(n)])
    if not certified:
        return LipschitzEstimate(float(per.max()), "surrogate_quantum", per)
    br = np.array([[2 * x for x in _certify_vertex(M, v, dims)] for v in range(n)])
    return LipschitzEstimate(float(br[:, 1].max()), "certified_quantum", br[:, 1], br)


def variance(rho, O) -> float:
    """``tr[ρ O²] - tr[ρ O]²`` for Hermitian ``O``."""
    r, M = _matrix(rho), _matrix(O)
    m1 = float(np.real(np.vdot(M, r)))
    m2 = float(np.real(np.trace(r @ M @ M)))
    return max(0.0, m2 - m1 * m1)


def kms_norm(sigma, H) -> float:
    """``‖H‖_σ = tr[H^† σ^{1/2} H σ^{1/2}]^{1/2}``."""
    from .numerics import matrix_power

    s = matrix_power(_matrix(sigma), 0.5)
    H = np.asarray(getattr(H, "matrix", H), dtype=complex)
    val = np.real(np.trace(H.conj().T @ s @ H @ s))
    return float(math.sqrt(max(val, 0.0)))


def spectral_tail(rho, O, r: float) -> float:
    """``tr[ρ Π]`` with ``Π`` the spectral projector of ``|O - tr[ρO]| >= r``."""
    rm, M = _matrix(rho), _matrix(O)
    mean = float(np.real(np.vdot(M, rm)))
    w, V = np.linalg.eigh(M)
    sel = np.abs(w - mean) >= r
    P = V[:, sel]
    return float(np.real(np.trace(P.conj().T @ rm @ P)))


# --------------------------------------------------------------------------
# Wasserstein distances

@dataclass(frozen=True)
class W1Classical:
    """Exact W1 with its optimality certificate.

    ``coupling[i, j]`` couples ``source[i]`` with ``target[j]`` (``None`` for
    the flow solver). ``potential`` holds a 1-Lipschitz function evaluated
    on ``potential_support``; ``dual_value`` is its Kantorovich value.
    """

    value: float
    dual_value: float
    coupling: Optional[np.ndarray]
    source: np.ndarray
    target: np.ndarray
    potential_support: np.ndarray
    potential: np.ndarray
    slackness: float
    method: str
    target_dual: Optional[np.ndarray] = None

    def potential_at(self, x) -> np.ndarray:
        """Potential at arbitrary bitstrings (integer labels)."""
        x = np.atleast_1d(np.asarray(x, dtype=np.uint64))
        if self.target_dual is not None:
            return (kernels.hamming_matrix(x, self.target) - self.target_dual[None, :]).min(axis=1)
        idx = np.searchsorted(self.potential_support, x)
        return self.potential[idx]


_HIGHS_OPTS = {"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10}


def _as_dist(mu, n=None):
    if isinstance(mu, MeasuredDistribution):
        return mu
    mu = np.asarray(mu, dtype=float)
    n = _nqubits(mu.size) if n is None else n
    idx = np.nonzero(mu > 0)[0]
    return MeasuredDistribution(n, idx.astype(np.uint64), mu[idx] / mu.sum())


def _w1_transport(mu, nu):
    a, b = mu.outcomes, nu.outcomes
    m, k = a.size, b.size
    cost = kernels.hamming_matrix(a, b).astype(float)
    rows = np.repeat(np.arange(m), k)
    cols = np.arange(m * k)
    A_rows = coo_matrix((np.ones(m * k), (rows, cols)), shape=(m, m * k))
    A_cols = coo_matrix((np.ones(m * k), (np.tile(np.arange(k), m), cols)), shape=(k, m * k))
    from scipy.sparse import vstack
    # the last column constraint is implied by the others; keeping it lets
    # rounding in the marginals make presolve declare the LP infeasible
    A_eq = vstack([A_rows, A_cols]).tocsr()[:-1]
    b_eq = np.concatenate([mu.probabilities, nu.probabilities])[:-1]
    res = linprog(cost.ravel(), A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs",
                  options=_HIGHS_OPTS)
    if res.status != 0:
        from .errors import ConvergenceError
        raise ConvergenceError(f"transport LP failed: {res.message}")
    pi = res.x.reshape(m, k)
    v = np.r_[res.eqlin.marginals[m:], 0.0]
    # c-transform of the target potential: 1-Lipschitz on the whole cube
    support = np.union1d(a, b)
    f = (kernels.hamming_matrix(support, b) - v[None, :]).min(axis=1)
    fa = f[np.searchsorted(support, a)]
    fb = f[np.searchsorted(support, b)]
    dual = float(mu.probabilities @ fa - nu.probabilities @ fb)
    used = pi > 1e-12
    slack = float(np.max(np.abs((fa[:, None] - fb[None, :]) - cost)[used])) if used.any() else 0.0
    return W1Classical(float(res.fun), dual, pi, a, b, support, f, slack, "transport", v)


def _w1_flow(mu, nu):
    n = mu.n
    if n > 14:
        raise SizeError("hypercube flow limited to 14 bits")
    N = 2 ** n
    x = np.arange(N)
    src, dst = [], []
    for v in range(n):
        bit = 1 << (n - 1 - v)
        src.append(x)
        dst.append(x ^ bit)
    src, dst = np.concatenate(src), np.concatenate(dst)
    E = src.size
    A = coo_matrix((np.r_[np.ones(E), -np.ones(E)], (np.r_[src, dst], np.r_[np.arange(E), np.arange(E)])),
                   shape=(N, E)).tocsr()
    supply = mu.dense() - nu.dense()
    # node balances sum to zero, so the last row is redundant
    res = linprog(np.ones(E), A_eq=A[:-1], b_eq=supply[:-1], bounds=(0, None), method="highs",
                  options=_HIGHS_OPTS)
    if res.status != 0:
        from .errors import ConvergenceError
        raise ConvergenceError(f"flow LP failed: {res.message}")
    phi = np.r_[res.eqlin.marginals, 0.0]
    dual = float(supply @ phi)
    flow = res.x
    used = flow > 1e-12
    slack = float(np.max(np.abs(phi[src[used]] - phi[dst[used]] - 1))) if used.any() else 0.0
    return W1Classical(float(res.fun), dual, None, mu.outcomes, nu.outcomes,
                       x.astype(np.uint64), phi, slack, "flow")


def w1_classical(mu, nu, method: str = "auto") -> W1Classical:
    """Exact W1 between distributions on ``{0,1}^n`` with Hamming cost.

    Parameters
    ----------
    mu, nu : MeasuredDistribution or array_like
        Distributions over the same number of bits; dense arrays of length
        ``2**n`` are accepted.
    method : {"auto", "transport", "flow"}
        ``transport`` solves the support-restricted transportation LP and
        returns a coupling; ``flow`` solves min-cost flow on the hypercube
        and suits large supports. ``auto`` picks ``transport`` when the
        product of support sizes is at most 250000.
    """
    mu, nu = _as_dist(mu), _as_dist(nu)
    if mu.n != nu.n:
        raise ValidationError("distributions live on different registers")
    if max(mu.outcomes.size, nu.outcomes.size) > 4096:
        raise SizeError("supports larger than 4096 are not supported")
    if method == "auto":
        method = "transport" if mu.outcomes.size * nu.outcomes.size <= 250000 else "flow"
    if method == "transport":
        return _w1_transport(mu, nu)
    if method == "flow":
        return _w1_flow(mu, nu)
    raise ValidationError(f"unknown method {method!r}")


@dataclass(frozen=True)
class W1Result:
    lower: float
    upper: float
    classical_exact: Optional[float] = None
    best_witness: str = ""

    @property
    def gap(self) -> float:
        return self.upper - self.lower


def _sign_matrix(A):
    w, V = np.linalg.eigh((A + A.conj().T) / 2)
    return (V * np.sign(np.where(np.abs(w) > 1e-14, w, 0))) @ V.conj().T


def _telescoping(delta, order):
    n = len(order)
    remaining = list(range(n))  # positions in the current reduced operator
    labels = list(range(n))
    cur = delta
    total = 0.0
    for site in order:
        dims = (2,) * len(labels)
        pos = labels.index(site)
        keep = [k for k in range(len(labels)) if k != pos]
        if keep:
            red = partial_trace(cur, dims, keep)
            total += trace_norm(cur - embed(red, keep, dims) / 2)
        else:
            red = None
            total += trace_norm(cur - np.trace(cur) / 2 * np.eye(2))
        labels.pop(pos)
        cur = red
    return total / 2


def w1_quantum_bounds(rho, sigma, orderings: int = 64, seed: int = 0,
                      two_site: bool = True) -> W1Result:
    """Interval containing the quantum W1 distance.

    Lower bound: best ``tr[(ρ-σ)H] / ‖H‖_L`` over witnesses ``H`` built from
    single- and two-site Paulis, signs of one- and two-site marginal
    differences, their sum, and the optimal classical potential on the
    measured distributions. ``‖H‖_L`` is replaced by its surrogate upper
    bound (or the exact value for diagonal witnesses), so every witness is
    feasible.

    Upper bound: the telescoping decomposition of ``ρ-σ`` along a vertex
    ordering, minimized over the natural order and ``orderings`` random
    permutations.
    """
    R, S = _matrix(rho), _matrix(sigma)
    if R.shape != S.shape:
        raise ValidationError("states live on different registers")
    n = _nqubits(R.shape[0])
    dims = (2,) * n
    delta = R - S
    if np.max(np.abs(delta)) < 1e-15:
        return W1Result(0.0, 0.0, 0.0, "identical")

    rng = np.random.default_rng(seed)
    orders = [list(range(n))] + [list(rng.permutation(n)) for _ in range(orderings)]
    upper = min(_telescoping(delta, o) for o in orders)

    best, best_name = 0.0, ""

    def consider(H, name, L=None):
        nonlocal best, best_name
        if L is None:
            L = lipschitz_quantum_bound(H).value
        if L <= 1e-14:
            return
        val = abs(float(np.real(np.vdot(H, delta)))) / L
        if val > best:
            best, best_name = val, name

    singles = []
    for v in range(n):
        dv = partial_trace(delta, dims, [v])
        sv = embed(_sign_matrix(dv), [v], dims)
        singles.append(sv)
        consider(sv, f"sign site {v}")
        for p in "XYZ":
            consider(embed(PAULI[p], [v], dims), f"{p}{v}")
    consider(sum(singles), "sum of site signs")
    if two_site:
        for v, w in itertools.combinations(range(n), 2):
            dvw = partial_trace(delta, dims, [v, w])
            consider(embed(_sign_matrix(dvw), [v, w], dims), f"sign sites {v},{w}")
            for p, q in itertools.product("XYZ", repeat=2):
                consider(embed(np.kron(PAULI[p], PAULI[q]), [v, w], dims), f"{p}{v}{q}{w}")

    mu, nu = measure_distribution(R), measure_distribution(S)
    cl = w1_classical(mu, nu)
    f_full = cl.potential_at(np.arange(2 ** n))
    lip = lipschitz_classical(f_full, n).value
    consider(np.diag(f_full).astype(complex), "classical potential", L=lip)
    lower = max(best, 0.0)
    return W1Result(lower, max(upper, lower), cl.value, best_name)


# --------------------------------------------------------------------------
# light-cones and Poincaré constants

@dataclass(frozen=True)
class LightCones:
    cones: Tuple[FrozenSet[int], ...]
    layers: Tuple[object, ...]
    n: int

    @property
    def I_max(self) -> int:
        return max(len(c) for c in self.cones)

    def of_set(self, S, m: int) -> FrozenSet[int]:
        """Light-cone of ``S`` through the last ``m`` layers."""
        return _propagate(set(S), self.layers[len(self.layers) - m:] if m else ())


def _propagate(R, layers):
    R = set(R)
    for layer in layers:
        if isinstance(layer, GraphHamiltonianLayer):
            R |= {w for v in R for w in layer.graph.neighbors(v)}
        else:
            for s in layer.supports:
                if R & set(s):
                    R |= set(s)
    return frozenset(R)


def _with_noise_layers(arch: CircuitArchitecture):
    noise = GateLayer(tuple((v,) for v in range(arch.n)),
                      tuple(np.eye(2, dtype=complex) for _ in range(arch.n)))
    out = []
    for layer in arch.layers:
        out += [layer, noise]
    return tuple(out)


def light_cone(arch: CircuitArchitecture, noise_layers: bool = False) -> LightCones:
    """Forward light-cones ``I_v`` of every qubit.

    With ``noise_layers`` a layer of single-qubit channels follows every
    circuit layer; these do not enlarge cones but enter ``I(e, m)`` tables.
    """
    layers = _with_noise_layers(arch) if noise_layers else tuple(arch.layers)
    cones = tuple(_propagate({v}, layers) for v in range(arch.n))
    return LightCones(cones, layers, arch.n)


def light_cone_of_set(arch: CircuitArchitecture, S, m: int) -> FrozenSet[int]:
    return light_cone(arch).of_set(S, m)


@dataclass(frozen=True)
class PoincareConstant:
    value: float
    setting: str
    provenance: str

    def __float__(self):
        return float(self.value)


def distance_table(graph, root: int = 0) -> np.ndarray:
    """Graph distances from ``root`` sorted ascending: ``d(1) = 0 <= d(2) <= ...``."""
    d = graph.distances()[root]
    if not np.all(np.isfinite(d)):
        raise ValidationError("graph is disconnected")
    return np.sort(d)


def polylog_neg(k: int, z: float) -> float:
    """``Li_{-k}(z) = Σ_{m>=1} m^k z^m`` by direct summation."""
    if not 0 < z < 1:
        raise DomainError(f"z must lie in (0, 1), got {z}")
    if k < 0 or int(k) != k:
        raise ValidationError("k must be a non-negative integer")
    total, m = 0.0, 1
    peak = k / -math.log(z)
    while True:
        term = m ** k * z ** m
        total += term
        if m > peak and term < 1e-15 * max(1.0, total):
            return total
        m += 1


def continuous_constants(params: InteractionGraphParams) -> Tuple[float, float]:
    """``c0 = 64 M δ^δ`` and ``c1 = 64 M / (2D-1) · Li_{-2(δ-1)}(e^{-1})``."""
    c0 = 64 * params.M * params.delta ** params.delta
    c1 = 64 * params.M / (2 * params.D - 1) * polylog_neg(2 * (params.delta - 1), math.exp(-1))
    return c0, c1


def poincare_constant(setting: str, arch: Optional[CircuitArchitecture] = None,
                      params: Optional[InteractionGraphParams] = None, t: Optional[float] = None,
                      d_table=None, exact: bool = True) -> PoincareConstant:
    """Poincaré constant in the noiseless, noisy or continuous-time setting.

    Parameters
    ----------
    setting : {"noiseless", "noisy", "continuous"}
    arch : CircuitArchitecture
        Needed for the circuit settings. In the noisy setting a layer of
        single-qubit noise follows each circuit layer.
    params, t, d_table
        Continuous setting. ``exact=True`` uses the sum over the distance
        table ``d(i)``; ``exact=False`` the form ``(c0 + c1 e^{vt})²``.
    """
    if setting == "noiseless":
        cones = light_cone(arch)
        return PoincareConstant(4.0 * cones.I_max ** 2, setting, "4 I_max^2")
    if setting == "noisy":
        cones = light_cone(arch, noise_layers=True)
        L = len(cones.layers)
        width = max(len(layer.supports) for layer in cones.layers) if L else 0
        tail = 0.0
        for ell, layer in enumerate(cones.layers, start=1):
            if layer.supports:
                tail += max(len(cones.of_set(e, L - ell)) ** 2 for e in layer.supports)
        return PoincareConstant(4.0 * (cones.I_max ** 2 + width / arch.n * tail), setting,
                                "4 (I_max^2 + max|E_l|/n sum_l max_e |I(e, L-l)|^2)")
    if setting == "continuous":
        if params is None or t is None:
            raise ValidationError("continuous setting needs params and t")
        v = params.v
        if not exact:
            c0, c1 = continuous_constants(params)
            return PoincareConstant((c0 + c1 * math.exp(v * t)) ** 2, setting, "(c0 + c1 e^{vt})^2")
        if d_table is None:
            raise ValidationError("exact continuous constant needs the distance table d(i)")
        d = np.asarray(d_table, dtype=float)
        thresh = 2 * params.delta - 1
        hits = np.nonzero(d >= thresh)[0]
        i0 = int(hits[0]) + 1 if hits.size else d.size + 1
        tail = d[i0 - 1:]
        s = float(np.sum(tail ** (params.delta - 1) * np.exp(v * t - tail)))
        val = 4 * (2 * (i0 - 1) + 4 * params.M / (2 * params.D - 1) * s) ** 2
        return PoincareConstant(val, setting, "4 (2(i0-1) + 4M/(2D-1) sum d^(δ-1) e^{vt-d})^2")
    raise ValidationError(f"unknown setting {setting!r}")


@dataclass(frozen=True)
class ConcentrationReport:
    d_H: int
    rhs: float
    mu_A: float
    mu_B: float
    passed: bool


def symmetric_concentration_check(mu: MeasuredDistribution, A, B, C, n: Optional[int] = None
                                  ) -> ConcentrationReport:
    """Compare ``d_H(A, B)`` with ``√(Cn) (μ(A)^{-1/2} + μ(B)^{-1/2})``."""
    C = float(C)
    n = mu.n if n is None else n
    A = np.unique(np.asarray(list(A), dtype=np.uint64))
    B = np.unique(np.asarray(list(B), dtype=np.uint64))
    if A.size == 0 or B.size == 0:
        raise ValidationError("sets must be non-empty")
    mA, mB = mu.mass(A), mu.mass(B)
    if mA <= 0 or mB <= 0:
        raise DomainError("a set has zero probability: the bound is vacuous")
    d = kernels.min_hamming(A, B)
    rhs = math.sqrt(C * n) * (mA ** -0.5 + mB ** -0.5)
    return ConcentrationReport(d, rhs, mA, mB, d <= rhs)
