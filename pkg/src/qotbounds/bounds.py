"""Closed-form bound calculators.

Probabilities are clipped to [0, 1]; results at 1 are flagged as vacuous.
Logarithms are natural unless a docstring says otherwise.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from .entropy import h_of_T
from .errors import DomainError, PreconditionError, ValidationError
from .quantum import InteractionGraphParams
from .transport import continuous_constants

__all__ = [
    "GW_RATIO", "PARISI", "TWO_OVER_PI", "GaussianProfile", "Probability", "chebyshev_tail",
    "transport_variance_bound", "transfer_concentration", "transfer_rhs", "depol_tail",
    "AdvantageDepth", "advantage_depth", "maxcut_depth_bounds", "min_n_for_depth",
    "maxcut_noisy_max_n", "approx_threshold", "lr_bound", "TimeBound", "anneal_time_lower",
    "ghz_time_lower", "RegularThreshold", "regular_graph_threshold", "MitigationBound",
    "mitigation_concentration", "noisy_annealer_tail", "min_of_m_K",
]

GW_RATIO = 0.878
PARISI = 0.763166
TWO_OVER_PI = 2 / math.pi


@dataclass(frozen=True)
class GaussianProfile:
    """Concentration profile ``P_σ(|O - <O>| >= a n) <= K exp(-c a² n / ℓ0²)``."""

    K: float
    c: float
    l0: float

    def __post_init__(self):
        if self.K <= 0 or self.c <= 0 or self.l0 <= 0:
            raise ValidationError("K, c and l0 must be positive")


@dataclass(frozen=True)
class Probability:
    value: float
    vacuous: bool

    def __float__(self):
        return self.value


def _prob(x: float) -> Probability:
    v = min(1.0, max(0.0, float(x)))
    return Probability(v, v >= 1.0)


def chebyshev_tail(C: float, n: int, lip: float, r: float) -> Probability:
    """``min(1, C n ‖O‖_L² / r²)``."""
    if r <= 0:
        raise ValidationError("r must be positive")
    return _prob(float(C) * n * lip ** 2 / r ** 2)


def transport_variance_bound(C: float, n: int, kms1: float, kms2: float) -> float:
    """``√(Cn) (‖X1 - I‖_σ + ‖X2 - I‖_σ)``."""
    if min(kms1, kms2) < 0 or C < 0:
        raise ValidationError("inputs must be non-negative")
    return math.sqrt(float(C) * n) * (kms1 + kms2)


def transfer_rhs(D_alpha: float, alpha: float, tr_E_sigma: float) -> float:
    """``exp(((α-1)/α)(D_α(ρ‖σ) + log tr[Eσ]))``, the bound on ``tr[Eρ]``."""
    if tr_E_sigma <= 0:
        return 0.0 if math.isfinite(D_alpha) else float("nan")
    if alpha == math.inf:
        return math.exp(D_alpha + math.log(tr_E_sigma))
    return math.exp((alpha - 1) / alpha * (D_alpha + math.log(tr_E_sigma)))


def transfer_concentration(D_alpha: float, alpha: float, profile: GaussianProfile, a: float,
                           n: int, ell: Optional[float] = None) -> Probability:
    """``exp(((α-1)/α)(D_α - c a² n/ℓ² + log K))`` clipped at 1."""
    if not alpha > 1:
        raise ValidationError("alpha must exceed 1")
    ell = profile.l0 if ell is None else ell
    if ell <= 0:
        raise ValidationError("ell must be positive")
    expo = D_alpha - profile.c * a * a * n / ell ** 2 + math.log(profile.K)
    w = 1.0 if alpha == math.inf else (alpha - 1) / alpha
    return _prob(math.exp(min(w * expo, 700.0)))


def depol_tail(p: float, L: int, eps: float, n: int, lip: float) -> Tuple[float, Probability]:
    """Deviation ``((1-p)^{2L} + ε)^{1/2} ‖H‖_L n`` reached with probability ``<= e^{-εn/2}``."""
    if eps <= 0:
        raise ValidationError("eps must be positive")
    dev = math.sqrt((1 - p) ** (2 * L) + eps) * lip * n
    return dev, _prob(math.exp(-eps * n / 2))


@dataclass(frozen=True)
class AdvantageDepth:
    L_star: float
    L_int: int
    squared_ok: bool
    L_squared: int


def advantage_depth(a_c: float, p: float) -> AdvantageDepth:
    """Depth ``log(1/a_c) / (2p)`` beyond which noise erases an ``a_c`` advantage.

    Also returns the first integer above it, whether that integer satisfies
    ``(1-p)^{2L} <= a_c²`` exactly, and the smallest integer that does.
    """
    if not 0 < a_c <= 1 or not 0 < p < 1:
        raise ValidationError("need 0 < a_c <= 1 and 0 < p < 1")
    L_star = math.log(1 / a_c) / (2 * p)
    L_int = math.floor(L_star) + 1
    ok = (1 - p) ** (2 * L_int) <= a_c ** 2
    L_sq = max(0, math.ceil(math.log(a_c) / math.log(1 - p) - 1e-12))
    return AdvantageDepth(L_star, L_int, ok, L_sq)


def maxcut_depth_bounds(n: float, D: Optional[int] = None, kind: str = "L") -> float:
    """Depth lower bounds for Max-Cut beating the threshold.

    ``kind="L"``: ``½ log₂(n/576)`` for two-qubit-gate circuits.
    ``kind="P"``: ``log(n/576) / (2 log(D+1))`` (natural logs) for QAOA.
    """
    if n < 1:
        raise ValidationError("n must be at least 1")
    if kind == "L":
        return 0.5 * math.log2(n / 576)
    if kind == "P":
        if D is None or D < 3:
            raise ValidationError("QAOA bound needs D >= 3")
        return math.log(n / 576) / (2 * math.log(D + 1))
    raise ValidationError(f"unknown kind {kind!r}")


def min_n_for_depth(depth: int, D: Optional[int] = None, kind: str = "P") -> int:
    """Smallest integer ``n`` whose depth bound reaches the integer ``depth``.

    Exact inversion: ``576 (D+1)^{2 depth}`` for QAOA, ``576 · 4^depth`` for circuits.
    """
    if kind == "P":
        if D is None or D < 3:
            raise ValidationError("QAOA bound needs D >= 3")
        return 576 * (D + 1) ** (2 * int(depth))
    if kind == "L":
        return 576 * 4 ** int(depth)
    raise ValidationError(f"unknown kind {kind!r}")


def maxcut_noisy_max_n(p: float) -> float:
    """``3 · 2^{2/p + 8}``: largest ``n`` where noisy circuits can still beat the threshold."""
    if p <= 0:
        raise ValidationError("p must be positive")
    return 3 * 2.0 ** (2 / p + 8)


def approx_threshold(D: int) -> Tuple[float, bool]:
    """``5/6 + √(D-1)/(3D)`` and whether it falls below the 0.878 ratio."""
    if D < 2:
        raise ValidationError("D must be at least 2")
    v = 5 / 6 + math.sqrt(D - 1) / (3 * D)
    return v, v < GW_RATIO


def lr_bound(params: InteractionGraphParams, k0: int, t: float) -> float:
    """``2M/(2D-1) k0^{δ-1} e^{vt - k0}``, valid for ``k0 >= 2δ - 1``."""
    if k0 < 2 * params.delta - 1:
        raise PreconditionError(f"k0={k0} below 2δ-1={2 * params.delta - 1}")
    return 2 * params.M / (2 * params.D - 1) * k0 ** (params.delta - 1) * math.exp(params.v * t - k0)


@dataclass(frozen=True)
class TimeBound:
    value: float
    vacuous: bool
    argument: float


def _time_bound(arg, v):
    if arg <= 1:
        return TimeBound(max(0.0, math.log(arg) / v) if arg > 0 else 0.0, True, arg)
    return TimeBound(math.log(arg) / v, False, arg)


def anneal_time_lower(n: float, params: InteractionGraphParams) -> TimeBound:
    """``T >= (1/v) ln(√n/(12 c1) - c0/c1)``; vacuous when the bound is not positive."""
    c0, c1 = continuous_constants(params)
    return _time_bound(math.sqrt(n) / (12 * c1) - c0 / c1, params.v)


def ghz_time_lower(n: float, params: InteractionGraphParams) -> TimeBound:
    """``t >= (1/v) log(n/(8 c1) - c0/c1)`` for preparing a GHZ state."""
    c0, c1 = continuous_constants(params)
    return _time_bound(n / (8 * c1) - c0 / c1, params.v)


@dataclass(frozen=True)
class RegularThreshold:
    threshold: float
    mean: float
    classical_energy: float
    tail: float


def regular_graph_threshold(q: float, D: int, n: int, eps: float = 0.0) -> RegularThreshold:
    """Relative-entropy threshold below which the state cannot beat the classical energy.

    ``((1-2q)² D/2 + (2/π)√D)² - ε D²) / (2D²) · n`` with mean energy
    ``(1-2q)² nD/2`` under ``τ_q^{⊗n}`` and tail ``e^{-εn/2}``.
    """
    if not 0 < q < 1 or D < 3:
        raise ValidationError("need 0 < q < 1 and D >= 3")
    thr = (((1 - 2 * q) ** 2 * D / 2 + TWO_OVER_PI * math.sqrt(D)) ** 2 - eps * D * D) / (2 * D * D) * n
    return RegularThreshold(thr, (1 - 2 * q) ** 2 * n * D / 2, -TWO_OVER_PI * math.sqrt(D) * n,
                            math.exp(-eps * n / 2))


@dataclass(frozen=True)
class MitigationBound:
    value: float
    deviation: float
    transferred: float
    budget: float
    total_d2: float


def min_of_m_K(m: int) -> float:
    """``K(m) = m`` for the minimum-of-m estimator."""
    return float(m)


def mitigation_concentration(m: int, K_of_m: Union[float, Callable[[int], float]], L_f: float,
                             l0: float, c: float, r: float, eps: float, n: int,
                             d2_values: Sequence[float]) -> MitigationBound:
    """Concentration of an error-mitigated estimator over ``m`` noisy copies.

    Parameters
    ----------
    m : int
        Number of copies.
    K_of_m : float or callable
        Collective prefactor ``K(m)``; see :func:`min_of_m_K`.
    L_f : float
        Lipschitz constant of the classical post-processing.
    l0, c : float
        Profile of the reference state.
    r, eps : float
        Deviation level per qubit and slack, ``0 < eps < r²``.
    n : int
    d2_values : sequence of float
        ``D_2`` (nats) of each copy to the reference state.

    Returns
    -------
    MitigationBound
        ``value = exp(-c ε n / ℓ0²)``, the deviation ``r L_f n``, and
        ``transferred``, the bound obtained by feeding the summed divergence
        and ``K(m)`` through :func:`transfer_concentration` at ``α = 2``.

    Raises
    ------
    PreconditionError
        When ``Σ D_2 > c (r² - ε) n / ℓ0²``.
    """
    if len(d2_values) != m:
        raise ValidationError("need one divergence per copy")
    if L_f <= 0 or not 0 < eps:
        raise ValidationError("need L_f > 0 and eps > 0")
    K = K_of_m(m) if callable(K_of_m) else float(K_of_m)
    total = float(sum(d2_values))
    budget = c * (r * r - eps) * n / l0 ** 2
    if total > budget:
        raise PreconditionError(f"summed D2 {total:.4g} exceeds c(r^2-eps)n/l0^2 = {budget:.4g}")
    value = math.exp(-c * eps * n / l0 ** 2)
    tr = transfer_concentration(total, 2.0, GaussianProfile(K, c, l0), r, n, l0).value
    return MitigationBound(value, r * L_f * n, tr, budget, total)


def noisy_annealer_tail(q: float, T: float, eps: float, n: int, lip: float, mean: float,
                        h: Optional[float] = None) -> Tuple[float, Probability]:
    """Energy level ``mean - 2^{-1/2} (h(T) + ε)^{1/2} ‖H‖_L n`` and tail ``e^{-εn/2}``.

    ``mean`` is ``tr[τ_q^{⊗n} H]``; ``h`` defaults to :func:`h_of_T` (nats).
    """
    if eps <= 0:
        raise ValidationError("eps must be positive")
    h = h_of_T(q, T) if h is None else h
    level = mean - 2 ** -0.5 * math.sqrt(h + eps) * lip * n
    return level, _prob(math.exp(-eps * n / 2))
