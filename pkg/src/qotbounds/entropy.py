"""Sandwiched Rényi divergences, contraction rates and entropy-decay bounds.

All divergences are in nats unless a function says otherwise.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import quad

from .config import TOL
from .errors import DomainError, ValidationError
from .numerics import (check_hermitian, matrix_power, norm_2to2, superoperator_matrix)

__all__ = [
    "renyi_divergence", "max_divergence", "support_violation", "z_mixer", "mixer_layer_dinf",
    "d2_plus_state", "DecayLedger", "generic_decay_bound", "qaoa_entropy_bound",
    "annealer_entropy_bound", "h_of_T", "ContractionRate", "r2_rate", "SDPIResult",
    "sdpi_max_p", "purity_bound_from_entropy", "purity_decay_unital",
    "annealer_purity_threshold", "PurityThreshold", "moments_ordered",
]

LN2 = math.log(2)


def _mat(x) -> np.ndarray:
    return check_hermitian(getattr(x, "matrix", x))


def support_violation(rho, sigma) -> float:
    """Mass of ``rho`` outside the support of ``sigma``."""
    r, s = _mat(rho), _mat(sigma)
    w, v = np.linalg.eigh(s)
    null = v[:, w <= TOL.pinv_cutoff]
    if null.shape[1] == 0:
        return 0.0
    return float(np.real(np.trace(null.conj().T @ r @ null)))


def renyi_divergence(rho, sigma, alpha: float) -> float:
    """Sandwiched Rényi divergence ``D_α(ρ‖σ)`` in nats.

    Parameters
    ----------
    rho, sigma : DensityMatrix or array_like
    alpha : float
        Order, ``α > 1``. ``np.inf`` dispatches to :func:`max_divergence`.

    Returns
    -------
    float
        ``+inf`` when ρ has more than ``1e-10`` mass outside ``supp σ``.
    """
    if alpha == np.inf:
        return max_divergence(rho, sigma)
    if not alpha > 1:
        raise ValidationError(f"alpha must exceed 1, got {alpha}")
    if support_violation(rho, sigma) > TOL.support_mass:
        return float("inf")
    r, s = _mat(rho), _mat(sigma)
    g = matrix_power(s, (1 - alpha) / (2 * alpha))
    w = np.clip(np.linalg.eigvalsh(g @ r @ g), 0, None)
    return float(math.log(np.sum(w ** alpha)) / (alpha - 1))


def max_divergence(rho, sigma) -> float:
    """``D_∞(ρ‖σ) = log ‖σ^{-1/2} ρ σ^{-1/2}‖_∞`` in nats."""
    if support_violation(rho, sigma) > TOL.support_mass:
        return float("inf")
    r, s = _mat(rho), _mat(sigma)
    g = matrix_power(s, -0.5)
    return float(math.log(np.linalg.eigvalsh(g @ r @ g)[-1]))


def _check_q(q, upper=1.0):
    if not 0 < q < 1 or q > upper:
        raise DomainError(f"q must lie in (0, {upper}], got {q}" if upper < 1 else
                          f"q must lie in (0, 1), got {q}")


def z_mixer(beta: float, q: float) -> float:
    """``z(β, q) = 2 cos 2β + sin²β / (q(1-q))``, always at least 2."""
    _check_q(q)
    return 2 * math.cos(2 * beta) + math.sin(beta) ** 2 / (q * (1 - q))


def mixer_layer_dinf(beta: float, q: float, n: int) -> float:
    """Max-divergence of one mixer layer ``exp(iβH_X)`` applied to ``τ_q^{⊗n}``."""
    z = max(z_mixer(beta, q), 2.0)
    return n * math.log((z + math.sqrt(max(z * z - 4, 0.0))) / 2)


def d2_plus_state(q: float, n: int) -> float:
    """``D_2(|+><+|^{⊗n} ‖ τ_q^{⊗n})`` in nats."""
    _check_q(q)
    return n * math.log((1 / q + 1 / (1 - q) + 2 / math.sqrt(q * (1 - q))) / 4)


@dataclass(frozen=True)
class DecayLedger:
    """Layer-by-layer entropy bound.

    ``running[t]`` is the bound after ``t`` layers (``running[0]`` is the
    initial divergence); ``entries`` records the contraction and penalty
    used at each layer.
    """

    initial: float
    q_alpha: float
    penalties: Tuple[float, ...]
    running: Tuple[float, ...]

    @property
    def bound(self) -> float:
        return self.running[-1]

    @property
    def entries(self):
        return [{"layer": t + 1, "contraction": 1 - self.q_alpha, "penalty": p,
                 "bound": self.running[t + 1]} for t, p in enumerate(self.penalties)]


def generic_decay_bound(D_init: float, q_alpha: float, penalties: Sequence[float]) -> DecayLedger:
    """Bound ``D`` after layers that each contract by ``1-q_α`` then add a penalty.

    Implements ``b_t = (1-q_α) b_{t-1} + penalty_t`` with ``b_0 = D_init``,
    i.e. ``(1-q_α)^m D_init + Σ_t (1-q_α)^{m-t} penalty_t``.
    """
    if not 0 <= q_alpha <= 1:
        raise ValidationError(f"q_alpha must lie in [0, 1], got {q_alpha}")
    pens = tuple(float(p) for p in penalties)
    if any(p < 0 for p in pens):
        raise ValidationError("penalties must be non-negative")
    run = [float(D_init)]
    for p in pens:
        run.append((1 - q_alpha) * run[-1] + p)
    return DecayLedger(float(D_init), float(q_alpha), pens, tuple(run))


def qaoa_entropy_bound(beta: Sequence[float], q: float, p_alpha: float, n: int,
                       D_init: Optional[float] = None) -> DecayLedger:
    """Entropy ledger of noisy QAOA started in ``|+>^{⊗n}``.

    Each round contributes a diagonal layer (no penalty) and a mixer layer
    (penalty :func:`mixer_layer_dinf`), each preceded by one noise layer.
    ``beta`` may also be a ``QAOAConfig``.
    """
    beta = getattr(beta, "beta", beta)
    D0 = d2_plus_state(q, n) if D_init is None else D_init
    pens = []
    for b in beta:
        pens += [0.0, mixer_layer_dinf(b, q, n)]
    return generic_decay_bound(D0, p_alpha, pens)


def _exp_linear_integral(r, t0, t1, a, b):
    """∫_{t0}^{t1} e^{r t} (a + b t) dt, exact."""
    if r == 0:
        return a * (t1 - t0) + b * (t1 ** 2 - t0 ** 2) / 2

    def F(t):
        return math.exp(r * t) * ((a + b * t) / r - b / r ** 2)

    return F(t1) - F(t0)


def _abs_schedule_integral(r, T, f):
    if callable(f):
        val, _ = quad(lambda t: math.exp(r * t) * abs(f(t / T)), 0, T, epsrel=1e-12,
                      epsabs=0, limit=200)
        return val
    knots, vals = (np.asarray(x, float) for x in f)
    total = 0.0
    for s0, s1, v0, v1 in zip(knots[:-1], knots[1:], vals[:-1], vals[1:]):
        pieces = [(s0, v0, s1, v1)]
        if v0 * v1 < 0:  # split at the zero crossing so |f| is linear on each piece
            sc = s0 + (s1 - s0) * v0 / (v0 - v1)
            pieces = [(s0, v0, sc, 0.0), (sc, 0.0, s1, v1)]
        for a0, w0, a1, w1 in pieces:
            t0, t1 = a0 * T, a1 * T
            if t1 <= t0:
                continue
            slope = (abs(w1) - abs(w0)) / (t1 - t0)
            total += _exp_linear_integral(r, t0, t1, abs(w0) - slope * t0, slope)
    return total


def annealer_entropy_bound(q: float, T: float, r_alpha: float, f, n: int,
                           D_init: Optional[float] = None) -> float:
    """Bound on ``D_2(ρ_T ‖ τ_q^{⊗n})`` for a noisy annealer.

    ``e^{-rT} D_init + 2n e^{-rT} |√(q/(1-q)) - √((1-q)/q)| ∫_0^T e^{rt} |f(t/T)| dt``

    Parameters
    ----------
    q : float
        Fixed point parameter, ``0 < q <= 1/2``.
    T : float
        Total annealing time.
    r_alpha : float
        Continuous contraction rate of the dissipator.
    f : callable or (knots, values)
        Transverse-field schedule on [0, 1]. Tables are integrated exactly
        piece by piece, callables with adaptive quadrature.
    n : int
    D_init : float, optional
        Initial divergence, ``d2_plus_state(q, n)`` by default.
    """
    _check_q(q, 0.5)
    if T < 0 or r_alpha <= 0:
        raise ValidationError("need T >= 0 and r_alpha > 0")
    D0 = d2_plus_state(q, n) if D_init is None else D_init
    pref = abs(math.sqrt(q / (1 - q)) - math.sqrt((1 - q) / q))
    decay = math.exp(-r_alpha * T)
    if T == 0 or pref == 0:
        return decay * D0
    return decay * D0 + 2 * n * decay * pref * _abs_schedule_integral(r_alpha, T, f)


def _r2_tau(q):
    return 2 * (1 - q) / math.log(1 / q)


def h_of_T(q: float, T: float, literal: bool = False) -> float:
    """Per-qubit entropy bound of the linearly scheduled noisy annealer.

    Default: the closed form of :func:`annealer_entropy_bound` for
    ``f(s) = 1 - s`` divided by ``n``, with ``r = 2(1-q)/log(1/q)``:

    ``e^{-rT} D_1 + 2 (1-2q) / √(q(1-q)) · (1 - rT e^{-rT} - e^{-rT}) / (r² T)``

    ``literal=True`` returns the variant with prefactor ``(2q-1)/√(q(1-q))``,
    which is negative for ``q < 1/2`` and fails as a bound; it is kept for
    comparison only.
    """
    _check_q(q, 0.5)
    r = _r2_tau(q)
    D1 = math.log((1 + 2 * math.sqrt(q - q * q)) / (4 * (q - q * q)))
    e = math.exp(-r * T)
    if T == 0:
        return D1
    shape = (1 - e * r * T - e) / (r * r * T)
    if literal:
        return e * D1 + (2 * q - 1) / math.sqrt(q * (1 - q)) * shape
    return e * D1 + 2 * (1 - 2 * q) / math.sqrt(q * (1 - q)) * shape


@dataclass(frozen=True)
class ContractionRate:
    alpha: float
    value: float
    kind: str
    provenance: str


def r2_rate(sigma, gap: float = 1.0) -> ContractionRate:
    """Continuous ``α = 2`` rate ``2λ (1 - 1/s) / log s`` with ``s = ‖σ^{-1}‖``."""
    w = np.linalg.eigvalsh(_mat(sigma))
    if w[0] <= TOL.pinv_cutoff:
        raise DomainError("sigma must be full rank")
    s = 1 / w[0]
    if abs(s - 1) < 1e-15:
        raise DomainError("one-dimensional fixed point")
    return ContractionRate(2.0, float(2 * gap * (1 - 1 / s) / math.log(s)), "continuous",
                           "local generator with spectral gap")


@dataclass(frozen=True)
class SDPIResult:
    p_star: float
    factor: float
    norm_at_p: float
    norm_above: float
    monotone: bool


def sdpi_max_p(kraus, sigma, tol: float = 1e-6, slack: float = 1e-10) -> SDPIResult:
    """Largest ``p`` with ``‖Γ^{-1/2} ∘ N ∘ D_{p,σ}^{-1} ∘ Γ^{1/2}‖_{2→2} <= 1``.

    ``D_{p,σ}^{-1}(X) = (X - p tr[X] σ) / (1-p)``. The norm is the largest
    singular value of the σ-weighted superoperator matrix. Returns ``p*``
    found by bisection to ``tol`` together with the per-layer factor
    ``(1-p*)^{(s-1)/(s log s)}``, ``s = ‖σ^{-1}‖``.
    """
    K = np.asarray(kraus, dtype=complex)
    s_mat = _mat(sigma)
    d = s_mat.shape[0]
    image = np.einsum("kab,bc,kdc->ad", K, s_mat, K.conj())
    if np.max(np.abs(image - s_mat)) > 1e-10:
        raise DomainError("channel does not fix sigma")
    w = np.linalg.eigvalsh(s_mat)
    if w[0] <= TOL.pinv_cutoff:
        raise DomainError("sigma must be full rank")

    def N(X):
        return np.einsum("kab,bc,kdc->ad", K, X, K.conj())

    def norm(p):
        def comp(X):
            return N((X - p * np.trace(X) * s_mat) / (1 - p))
        return norm_2to2(superoperator_matrix(comp, d, weighting=s_mat))

    lo, hi = 0.0, 1.0 - 1e-9
    if norm(lo) > 1 + slack:
        lo = 0.0
        hi = 0.0
    elif norm(hi) <= 1 + slack:
        lo = hi
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if norm(mid) <= 1 + slack:
            lo = mid
        else:
            hi = mid
    grid = np.linspace(0, lo, 11)
    monotone = all(norm(p) <= 1 + slack for p in grid)
    s = 1 / w[0]
    kappa = (s - 1) / (s * math.log(s))
    return SDPIResult(lo, (1 - lo) ** kappa, norm(lo), norm(min(lo + 10 * tol, 1 - 1e-9)), monotone)


def purity_bound_from_entropy(d2_to_tau: float, q: float, n: int, base: str = "nats") -> float:
    """Purity bound ``2^{-εn}`` from ``D_2(ρ‖τ_q^{⊗n})``.

    With ``ε = 1 - log2(2(1-q)) - D_2/n`` (``D_2`` in bits). Equivalent to
    ``tr ρ² <= (1-q)^n exp(D_2 [nats])``, clipped at 1.
    """
    _check_q(q, 0.5)
    bits = d2_to_tau if base == "bits" else d2_to_tau / LN2
    if base not in ("bits", "nats"):
        raise ValidationError("base must be 'bits' or 'nats'")
    eps = 1 - math.log2(2 * (1 - q)) - bits / n
    return min(1.0, 2.0 ** (-eps * n))


def purity_decay_unital(n: int, L: int, r2: Optional[float] = None, p: Optional[float] = None) -> float:
    """``exp(-ln2 (1 - (1-r_2)^L) n)``; passing depolarizing ``p`` uses ``1-r_2 = (1-p)^2``."""
    if (r2 is None) == (p is None):
        raise ValidationError("give exactly one of r2 or p")
    factor = (1 - p) ** 2 if p is not None else 1 - r2
    return math.exp(-LN2 * (1 - factor ** L) * n)


@dataclass(frozen=True)
class PurityThreshold:
    threshold_bits: float
    first_T: Optional[float]
    h_bits: Tuple[float, ...]
    monotone: bool


def annealer_purity_threshold(q: float, eps: float, T_grid: Optional[Sequence[float]] = None
                              ) -> PurityThreshold:
    """Requirement on ``h(T)`` (bits) for purity ``<= 2^{-εn}``, and the first grid ``T`` meeting it."""
    _check_q(q, 0.5)
    thr = 1 - math.log2(2 * (1 - q)) - eps
    if thr <= 0:
        raise DomainError(f"requirement {thr:.4g} <= 0: infeasible at any T")
    if T_grid is None:
        return PurityThreshold(thr, None, (), True)
    hs = tuple(h_of_T(q, float(T)) / LN2 for T in T_grid)
    mono = all(b <= a + 1e-15 for a, b in zip(hs, hs[1:]))
    first = next((float(T) for T, hv in zip(T_grid, hs) if hv <= thr), None)
    return PurityThreshold(thr, first, hs, mono)


def moments_ordered(rho, kmax: int = 4) -> bool:
    """Check ``tr ρ^k <= tr ρ²`` for ``2 <= k <= kmax``."""
    w = np.clip(np.linalg.eigvalsh(_mat(rho)), 0, None)
    p2 = np.sum(w ** 2)
    return all(np.sum(w ** k) <= p2 + 1e-12 for k in range(3, kmax + 1))
