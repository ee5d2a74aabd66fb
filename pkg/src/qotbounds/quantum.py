"""States, circuits, noise models and exact dense simulation.

Conventions: qubit 0 is the leftmost tensor factor and the most significant
bit of a basis label; ``|0>`` is the +1 eigenvector of ``Z``.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import expm
from scipy.stats import unitary_group

from .config import TOL, max_dim
from .errors import ConvergenceError, DomainError, SizeError, ValidationError
from .numerics import (PAULI, apply_kraus, apply_unitary, as_square, check_hermitian,
                       embed, kron_all, op_norm, partial_trace, trace_norm)

__all__ = [
    "RegisterShape", "DensityMatrix", "Observable", "GateLayer", "GraphHamiltonianLayer",
    "CircuitArchitecture", "NoiseModel", "QAOAConfig", "AnnealSchedule",
    "InteractionGraphParams", "MeasuredDistribution", "SimulationResult", "LindbladResult",
    "product_state_tau", "plus_state", "basis_state", "ghz_state", "maximally_mixed",
    "random_state", "random_brickwork", "ghz_circuit", "build_qaoa_circuit",
    "simulate_circuit", "simulate_lindblad", "lindblad_dt_check", "measure_distribution",
    "lr_discrepancy", "x_hamiltonian", "zz_hamiltonian", "state_to_json", "state_from_json",
    "circuit_to_json", "circuit_from_json",
]


# --------------------------------------------------------------------------
# registers, states, observables

@dataclass(frozen=True)
class RegisterShape:
    n: int
    d: int = 2

    def __post_init__(self):
        if self.n < 1 or self.d < 2:
            raise ValidationError(f"invalid register n={self.n}, d={self.d}")
        if self.d ** self.n > max_dim():
            raise SizeError(f"register dimension {self.d}^{self.n} exceeds the cap {max_dim()}")

    @property
    def dim(self) -> int:
        return self.d ** self.n

    @property
    def dims(self) -> Tuple[int, ...]:
        return (self.d,) * self.n

    @classmethod
    def for_dim(cls, dim: int, d: int = 2) -> "RegisterShape":
        n = int(round(np.log(dim) / np.log(d)))
        if d ** n != dim:
            raise ValidationError(f"dimension {dim} is not a power of {d}")
        return cls(n, d)


@dataclass(frozen=True)
class DensityMatrix:
    """A validated quantum state on ``shape``."""

    shape: RegisterShape
    matrix: np.ndarray

    def __post_init__(self):
        m = check_hermitian(self.matrix)
        if m.shape != (self.shape.dim, self.shape.dim):
            raise ValidationError("matrix does not match the register")
        if abs(np.trace(m).real - 1) > TOL.trace:
            raise ValidationError(f"trace {np.trace(m).real} differs from 1")
        if np.linalg.eigvalsh(m)[0] < -TOL.positivity:
            raise ValidationError("state is not positive semidefinite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_matrix(cls, m, d: int = 2) -> "DensityMatrix":
        m = as_square(m)
        return cls(RegisterShape.for_dim(m.shape[0], d), m)

    @property
    def n(self) -> int:
        return self.shape.n

    def marginal(self, keep) -> np.ndarray:
        return partial_trace(self.matrix, self.shape.dims, keep)

    def purity(self) -> float:
        return float(np.real(np.vdot(self.matrix, self.matrix)))


@dataclass(frozen=True)
class Observable:
    shape: RegisterShape
    matrix: np.ndarray

    def __post_init__(self):
        m = check_hermitian(self.matrix)
        if m.shape != (self.shape.dim, self.shape.dim):
            raise ValidationError("matrix does not match the register")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_matrix(cls, m, d: int = 2) -> "Observable":
        m = as_square(m)
        return cls(RegisterShape.for_dim(m.shape[0], d), m)

    @classmethod
    def diagonal(cls, values, d: int = 2) -> "Observable":
        values = np.asarray(values, dtype=float)
        return cls(RegisterShape.for_dim(values.size, d), np.diag(values).astype(complex))

    @property
    def diagonal_flag(self) -> bool:
        off = self.matrix - np.diag(np.diag(self.matrix))
        return bool(np.all(np.abs(off) < TOL.diagonal))

    def expectation(self, rho: DensityMatrix) -> float:
        return float(np.real(np.vdot(self.matrix, rho.matrix)))


def _to_state(rho) -> DensityMatrix:
    return rho if isinstance(rho, DensityMatrix) else DensityMatrix.from_matrix(rho)


def product_state_tau(q: float, n: int) -> DensityMatrix:
    """``τ_q^{⊗n}`` with ``τ_q = q|0><0| + (1-q)|1><1|``."""
    if not 0 < q < 1:
        raise ValidationError(f"q must lie in (0, 1), got {q}")
    diag = kron_all([np.array([q, 1 - q])] * n).real if n else np.ones(1)
    return DensityMatrix(RegisterShape(n), np.diag(diag).astype(complex))


def tau(q: float) -> np.ndarray:
    return np.diag([q, 1 - q]).astype(complex)


def maximally_mixed(n: int) -> DensityMatrix:
    shape = RegisterShape(n)
    return DensityMatrix(shape, np.eye(shape.dim, dtype=complex) / shape.dim)


def _pure(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def basis_state(bits: Union[int, Sequence[int]], n: Optional[int] = None) -> DensityMatrix:
    if not isinstance(bits, (int, np.integer)):
        bits = list(bits)
        n = len(bits)
        bits = int("".join(str(int(b)) for b in bits), 2) if n else 0
    shape = RegisterShape(n)
    psi = np.zeros(shape.dim)
    psi[bits] = 1
    return DensityMatrix(shape, _pure(psi))


def plus_state(n: int) -> DensityMatrix:
    shape = RegisterShape(n)
    return DensityMatrix(shape, np.full((shape.dim, shape.dim), 1 / shape.dim, dtype=complex))


def ghz_state(n: int) -> DensityMatrix:
    shape = RegisterShape(n)
    psi = np.zeros(shape.dim)
    psi[0] = psi[-1] = 1
    return DensityMatrix(shape, _pure(psi))


def random_state(n: int, rng: np.random.Generator, rank: Optional[int] = None) -> DensityMatrix:
    """Random state from a Ginibre matrix of the given rank (full by default)."""
    dim = 2 ** n
    rank = dim if rank is None else rank
    G = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = G @ G.conj().T
    return DensityMatrix(RegisterShape(n), m / np.trace(m).real)


def x_hamiltonian(n: int) -> np.ndarray:
    """``H_X = -Σ_i X_i``."""
    return -sum(embed(PAULI["X"], [i], (2,) * n) for i in range(n))


def zz_hamiltonian(n: int, edges, weights=None) -> np.ndarray:
    """Diagonal of ``Σ_e w_e Z_i Z_j`` as a real vector."""
    x = np.arange(2 ** n)
    out = np.zeros(2 ** n)
    weights = np.ones(len(edges)) if weights is None else np.asarray(weights, float)
    for (i, j), w in zip(edges, weights):
        zi = 1 - 2 * ((x >> (n - 1 - i)) & 1)
        zj = 1 - 2 * ((x >> (n - 1 - j)) & 1)
        out += w * zi * zj
    return out


# --------------------------------------------------------------------------
# circuits

@dataclass(frozen=True)
class GateLayer:
    """Gates on pairwise disjoint supports.

    Each channel is either a unitary (2-D array) or a Kraus set (3-D array)
    acting on its support, qudits ordered as listed.
    """

    supports: Tuple[Tuple[int, ...], ...]
    channels: Tuple[np.ndarray, ...]

    def __post_init__(self):
        supports = tuple(tuple(int(v) for v in s) for s in self.supports)
        channels = tuple(np.asarray(c, dtype=complex) for c in self.channels)
        if len(supports) != len(channels):
            raise ValidationError("one channel per support is required")
        seen = set()
        for s in supports:
            if seen & set(s) or len(set(s)) != len(s):
                raise ValidationError(f"supports must be pairwise disjoint, got {supports}")
            seen |= set(s)
        object.__setattr__(self, "supports", supports)
        object.__setattr__(self, "channels", channels)

    def apply(self, rho: np.ndarray, dims) -> np.ndarray:
        for s, c in zip(self.supports, self.channels):
            if c.ndim == 2:
                rho = apply_unitary(rho, c, s, dims)
            else:
                rho = apply_kraus(rho, c, s, dims)
        return rho


@dataclass(frozen=True)
class GraphHamiltonianLayer:
    """The unitary ``exp(i γ H)`` for a graph-generated Hamiltonian ``H``.

    ``hamiltonian`` is a real vector when ``H`` is diagonal, else a matrix.
    ``graph`` must expose ``n``, ``edges`` and ``neighbors(v)``.
    """

    graph: object
    gamma: float
    hamiltonian: np.ndarray
    diagonal: bool = True

    def apply(self, rho: np.ndarray, dims) -> np.ndarray:
        if self.diagonal:
            ph = np.exp(1j * self.gamma * np.asarray(self.hamiltonian, dtype=float))
            return ph[:, None] * rho * ph.conj()[None, :]
        U = expm(1j * self.gamma * np.asarray(self.hamiltonian))
        return U @ rho @ U.conj().T

    @property
    def supports(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(e) for e in self.graph.edges)


Layer = Union[GateLayer, GraphHamiltonianLayer]


@dataclass(frozen=True)
class CircuitArchitecture:
    n: int
    layers: Tuple[Layer, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        for layer in self.layers:
            for s in layer.supports:
                if any(v < 0 or v >= self.n for v in s):
                    raise ValidationError(f"support {s} outside register of {self.n} qubits")

    @property
    def depth(self) -> int:
        return len(self.layers)

    def unitary(self) -> np.ndarray:
        """Dense unitary of a circuit whose gate layers are all unitary."""
        dims = (2,) * self.n
        U = np.eye(2 ** self.n, dtype=complex)
        for layer in self.layers:
            if isinstance(layer, GraphHamiltonianLayer):
                if layer.diagonal:
                    L = np.diag(np.exp(1j * layer.gamma * np.asarray(layer.hamiltonian, float)))
                else:
                    L = expm(1j * layer.gamma * layer.hamiltonian)
            else:
                L = np.eye(2 ** self.n, dtype=complex)
                for s, c in zip(layer.supports, layer.channels):
                    if c.ndim != 2:
                        raise ValidationError("circuit contains non-unitary channels")
                    L = embed(c, s, dims) @ L
            U = L @ U
        return U


def random_brickwork(n: int, depth: int, rng: np.random.Generator) -> CircuitArchitecture:
    """Brickwork of Haar-random two-qubit gates on a line."""
    layers = []
    for ell in range(depth):
        pairs = [(i, i + 1) for i in range(ell % 2, n - 1, 2)]
        gates = [unitary_group.rvs(4, random_state=rng) for _ in pairs]
        layers.append(GateLayer(tuple(pairs), tuple(gates)))
    return CircuitArchitecture(n, tuple(layers))


def ghz_circuit(n: int) -> CircuitArchitecture:
    """Hadamard on qubit 0 followed by a CNOT ladder."""
    H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    cnot = np.eye(4, dtype=complex)[[0, 1, 3, 2]]
    layers = [GateLayer(((0,),), (H,))]
    layers += [GateLayer(((i, i + 1),), (cnot,)) for i in range(n - 1)]
    return CircuitArchitecture(n, tuple(layers))


@dataclass(frozen=True)
class QAOAConfig:
    """QAOA parameters. ``hamiltonian`` selects the diagonal ``H_I``.

    ``"maxcut"`` uses the cut-counting operator, ``"ising"`` uses
    ``-Σ_{(i,j)∈E} Z_i Z_j``.
    """

    P: int
    gamma: Tuple[float, ...]
    beta: Tuple[float, ...]
    graph: object
    hamiltonian: str = "maxcut"

    def __post_init__(self):
        object.__setattr__(self, "gamma", tuple(float(g) for g in self.gamma))
        object.__setattr__(self, "beta", tuple(float(b) for b in self.beta))
        if len(self.gamma) != self.P or len(self.beta) != self.P:
            raise ValidationError("gamma and beta must both have length P")
        if self.hamiltonian not in ("maxcut", "ising"):
            raise ValidationError(f"unknown hamiltonian {self.hamiltonian!r}")


def mixer_gate(beta: float) -> np.ndarray:
    """Single-qubit factor ``exp(-i β X)`` of ``exp(i β H_X)``."""
    return np.cos(beta) * np.eye(2) - 1j * np.sin(beta) * PAULI["X"]


def build_qaoa_circuit(cfg: QAOAConfig, n: Optional[int] = None) -> CircuitArchitecture:
    """Alternating diagonal and mixer layers, ``exp(iγ_k H_I)`` applied first."""
    from .maxcut import cut_diagonal

    g = cfg.graph
    if n is not None and n != g.n:
        raise ValidationError(f"graph has {g.n} vertices but register has {n}")
    n = g.n
    if cfg.hamiltonian == "maxcut":
        diag = cut_diagonal(g).astype(float)
    else:
        diag = -zz_hamiltonian(n, sorted(g.edges))
    layers = []
    singles = tuple((v,) for v in range(n))
    for gk, bk in zip(cfg.gamma, cfg.beta):
        layers.append(GraphHamiltonianLayer(g, gk, diag, True))
        layers.append(GateLayer(singles, (mixer_gate(bk),) * n))
    return CircuitArchitecture(n, tuple(layers))


# --------------------------------------------------------------------------
# noise

def _depolarizing_kraus(p):
    return np.array([np.sqrt(1 - 3 * p / 4) * PAULI["I"], np.sqrt(p / 4) * PAULI["X"],
                     np.sqrt(p / 4) * PAULI["Y"], np.sqrt(p / 4) * PAULI["Z"]])


def _gen_depolarizing_kraus(p, q):
    ks = [np.sqrt(1 - p) * np.eye(2, dtype=complex)]
    t = (q, 1 - q)
    for i in range(2):
        for j in range(2):
            k = np.zeros((2, 2), dtype=complex)
            k[i, j] = np.sqrt(p * t[i])
            ks.append(k)
    return np.array(ks)


def generalized_amplitude_damping(g: float, q: float) -> np.ndarray:
    """Kraus set of amplitude damping with strength ``g`` and fixed point ``τ_q``."""
    a, b = np.sqrt(q), np.sqrt(1 - q)
    return np.array([
        a * np.array([[1, 0], [0, np.sqrt(1 - g)]]),
        a * np.array([[0, np.sqrt(g)], [0, 0]]),
        b * np.array([[np.sqrt(1 - g), 0], [0, 1]]),
        b * np.array([[0, 0], [np.sqrt(g), 0]]),
    ], dtype=complex)


@dataclass(frozen=True)
class NoiseModel:
    """Single-qubit noise applied to every qubit after each layer.

    Use the ``depolarizing``, ``generalized_depolarizing`` and ``custom``
    constructors.
    """

    kind: str
    kraus: np.ndarray
    p: Optional[float] = None
    q: Optional[float] = None
    contraction: Optional[dict] = None

    @classmethod
    def depolarizing(cls, p: float) -> "NoiseModel":
        if not 0 <= p <= 1:
            raise ValidationError(f"p must lie in [0, 1], got {p}")
        rate = {"alpha": 2.0, "q_alpha": 1 - (1 - p) ** 2}
        return cls("depolarizing", _depolarizing_kraus(p), p=p, q=0.5, contraction=rate)

    @classmethod
    def generalized_depolarizing(cls, p: float, q: float) -> "NoiseModel":
        """``ρ ↦ (1-p) ρ + p tr[ρ] τ_q``."""
        if not 0 <= p <= 1:
            raise ValidationError(f"p must lie in [0, 1], got {p}")
        if not 0 < q < 1:
            raise ValidationError(f"q must lie in (0, 1), got {q}")
        s = 1 / min(q, 1 - q)
        kappa = (s - 1) / (s * np.log(s))
        rate = {"alpha": 2.0, "q_alpha": 1 - (1 - p) ** kappa}
        return cls("generalized_depolarizing", _gen_depolarizing_kraus(p, q), p=p, q=q,
                   contraction=rate)

    @classmethod
    def custom(cls, kraus) -> "NoiseModel":
        K = np.asarray(kraus, dtype=complex)
        if K.ndim != 3 or K.shape[1:] != (2, 2):
            raise ValidationError("custom noise needs single-qubit Kraus operators")
        if np.max(np.abs(np.einsum("kba,kbc->ac", K.conj(), K) - np.eye(2))) > TOL.kraus_completeness:
            raise ValidationError("custom Kraus set is not trace preserving")
        return cls("custom", K)

    def channel(self, X: np.ndarray) -> np.ndarray:
        K = self.kraus
        return np.einsum("kab,bc,kdc->ad", K, X, K.conj())

    @property
    def fixed_point(self) -> np.ndarray:
        if self.kind == "depolarizing":
            return np.eye(2, dtype=complex) / 2
        if self.kind == "generalized_depolarizing":
            return tau(self.q)
        from .numerics import superoperator_matrix
        S = superoperator_matrix(self.kraus)
        w, v = np.linalg.eig(S)
        k = int(np.argmin(np.abs(w - 1)))
        m = v[:, k].reshape(2, 2)
        m = (m + m.conj().T) / 2
        return m / np.trace(m)

    def apply_all(self, rho: np.ndarray, n: int) -> np.ndarray:
        dims = (2,) * n
        for v in range(n):
            rho = apply_kraus(rho, self.kraus, [v], dims, check=False)
        return rho


# --------------------------------------------------------------------------
# simulation

@dataclass(frozen=True)
class SimulationResult:
    final: DensityMatrix
    trajectory: Tuple[DensityMatrix, ...]


def simulate_circuit(circuit: CircuitArchitecture, rho0, noise: Optional[NoiseModel] = None,
                     noise_before_first: bool = False) -> SimulationResult:
    """Run a circuit, applying ``noise`` to every qubit after each layer.

    Parameters
    ----------
    circuit : CircuitArchitecture
    rho0 : DensityMatrix or array_like
    noise : NoiseModel, optional
    noise_before_first : bool
        Also apply the noise layer once before the first circuit layer.

    Returns
    -------
    SimulationResult
        Final state and the state after every layer (noise included).
    """
    rho0 = _to_state(rho0)
    if rho0.n != circuit.n:
        raise ValidationError(f"state has {rho0.n} qubits, circuit has {circuit.n}")
    dims = rho0.shape.dims
    rho = np.array(rho0.matrix)
    if noise is not None and noise_before_first:
        rho = noise.apply_all(rho, circuit.n)
    traj = []
    for layer in circuit.layers:
        rho = layer.apply(rho, dims)
        if noise is not None:
            rho = noise.apply_all(rho, circuit.n)
        traj.append(DensityMatrix(rho0.shape, rho))
    final = traj[-1] if traj else DensityMatrix(rho0.shape, rho)
    return SimulationResult(final, tuple(traj))


@dataclass(frozen=True)
class AnnealSchedule:
    """Annealing protocol ``H(t) = f(t/T) H_X + g(t/T) H_I`` with local noise.

    ``f`` and ``g`` are piecewise-linear tables ``(knots, values)`` on [0, 1].
    The dissipator is ``rate * Σ_i (τ_q ⊗ tr_i ρ - ρ)``, whose spectral gap
    equals ``rate``.
    """

    T: float
    f: Tuple[Tuple[float, ...], Tuple[float, ...]]
    g: Tuple[Tuple[float, ...], Tuple[float, ...]]
    q: float
    rate: float = 1.0

    def __post_init__(self):
        if self.T < 0:
            raise ValidationError("T must be non-negative")
        if not 0 < self.q < 1:
            raise ValidationError("q must lie in (0, 1)")
        for tab in (self.f, self.g):
            k, v = np.asarray(tab[0], float), np.asarray(tab[1], float)
            if k.shape != v.shape or not np.all(np.isfinite(v)) or np.any(np.diff(k) <= 0):
                raise ValidationError("schedule tables need increasing knots and finite values")

    @classmethod
    def linear(cls, T: float, q: float, rate: float = 1.0) -> "AnnealSchedule":
        return cls(T, ((0.0, 1.0), (1.0, 0.0)), ((0.0, 1.0), (0.0, 1.0)), q, rate)

    def f_at(self, s):
        return np.interp(s, self.f[0], self.f[1])

    def g_at(self, s):
        return np.interp(s, self.g[0], self.g[1])


@dataclass(frozen=True)
class LindbladResult:
    final: DensityMatrix
    times: np.ndarray
    states: Tuple[DensityMatrix, ...]


def _local_reset(rho, n, t1, rate):
    out = -n * rho
    dims = (2,) * n
    T = rho.reshape(dims + dims)
    for i in range(n):
        red = np.trace(T, axis1=i, axis2=i + n)
        rest = [k for k in range(n) if k != i]
        labels = [i, n + i] + rest + [n + k for k in rest]
        out = out + np.multiply.outer(t1, red).transpose(np.argsort(labels)).reshape(rho.shape)
    return rate * out


def simulate_lindblad(schedule: AnnealSchedule, graph, rho0, dt: float,
                      H_X: Optional[np.ndarray] = None, H_I: Optional[np.ndarray] = None,
                      samples: int = 11) -> LindbladResult:
    """Integrate ``dρ/dt = L(ρ) + i[ρ, H(t)]`` with classical fourth-order Runge-Kutta.

    Parameters
    ----------
    schedule : AnnealSchedule
    graph : Graph or None
        Supplies ``H_I = -Σ_{(i,j)∈E} Z_i Z_j`` unless ``H_I`` is given.
    rho0 : DensityMatrix or array_like
    dt : float
        Requested step, at most ``T/100``. The run uses ``ceil(T/dt)`` equal steps.
    samples : int
        Number of equally spaced trajectory samples, endpoints included.
    """
    rho0 = _to_state(rho0)
    n = rho0.n
    T = float(schedule.T)
    if T == 0:
        return LindbladResult(rho0, np.zeros(1), (rho0,))
    if dt <= 0 or dt > T / 100 + 1e-15:
        raise ValidationError(f"dt must lie in (0, T/100] = (0, {T / 100}]")
    HX = x_hamiltonian(n) if H_X is None else as_square(H_X)
    if H_I is None:
        HI = np.diag(-zz_hamiltonian(n, sorted(graph.edges))) if graph is not None else 0 * HX
    else:
        HI = as_square(H_I)
    t1 = tau(schedule.q)
    steps = int(np.ceil(T / dt - 1e-9))
    h = T / steps

    def rhs(t, rho):
        s = t / T
        H = schedule.f_at(s) * HX + schedule.g_at(s) * HI
        return _local_reset(rho, n, t1, schedule.rate) + 1j * (rho @ H - H @ rho)

    marks = np.unique(np.round(np.linspace(0, steps, samples)).astype(int))
    rho = np.array(rho0.matrix)
    states, times = [], []
    if marks[0] == 0:
        states.append(rho0)
        times.append(0.0)
    t = 0.0
    for k in range(1, steps + 1):
        k1 = rhs(t, rho)
        k2 = rhs(t + h / 2, rho + h / 2 * k1)
        k3 = rhs(t + h / 2, rho + h / 2 * k2)
        k4 = rhs(t + h, rho + h * k3)
        rho = rho + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t = k * h
        drift = abs(np.trace(rho).real - 1)
        if drift > TOL.lindblad_trace_drift or not np.all(np.isfinite(rho)):
            raise ConvergenceError(f"trace drift {drift:.2e} at t={t:.4g}; reduce dt below {h:.3g}")
        if k in marks:
            rho = (rho + rho.conj().T) / 2
            states.append(DensityMatrix(rho0.shape, rho / np.trace(rho).real))
            times.append(t)
    return LindbladResult(states[-1], np.array(times), tuple(states))


def lindblad_dt_check(schedule: AnnealSchedule, graph, rho0, dt: float, **kw) -> float:
    """Trace-norm change of the final state when ``dt`` is halved."""
    a = simulate_lindblad(schedule, graph, rho0, dt, samples=2, **kw).final.matrix
    b = simulate_lindblad(schedule, graph, rho0, dt / 2, samples=2, **kw).final.matrix
    return trace_norm(a - b)


# --------------------------------------------------------------------------
# measurement

@dataclass(frozen=True)
class MeasuredDistribution:
    """Sparse distribution over ``n``-bit strings (integer labels, qubit 0 = MSB)."""

    n: int
    outcomes: np.ndarray
    probabilities: np.ndarray

    def __post_init__(self):
        out = np.asarray(self.outcomes, dtype=np.uint64).ravel()
        pr = np.asarray(self.probabilities, dtype=float).ravel()
        if out.shape != pr.shape:
            raise ValidationError("outcomes and probabilities differ in length")
        if self.n < 1 or self.n > 64:
            raise ValidationError("n must lie in [1, 64]")
        if np.any(pr < 0) or abs(pr.sum() - 1) > TOL.trace:
            raise ValidationError("probabilities must be non-negative and sum to 1")
        if self.n < 64 and out.size and out.max() >> np.uint64(self.n):
            raise ValidationError("outcome label exceeds n bits")
        order = np.argsort(out)
        out, pr = out[order], pr[order]
        if np.any(out[1:] == out[:-1]):
            raise ValidationError("duplicate outcomes")
        object.__setattr__(self, "outcomes", out)
        object.__setattr__(self, "probabilities", pr)

    @classmethod
    def from_dict(cls, n: int, probs: dict) -> "MeasuredDistribution":
        keys = [int(k, 2) if isinstance(k, str) else int(k) for k in probs]
        return cls(n, np.array(keys, dtype=np.uint64), np.array(list(probs.values()), float))

    def to_dict(self) -> dict:
        return {format(int(x), f"0{self.n}b"): float(p) for x, p in zip(self.outcomes, self.probabilities)}

    def dense(self) -> np.ndarray:
        if self.n > 24:
            raise SizeError("dense view limited to 24 bits")
        out = np.zeros(2 ** self.n)
        out[self.outcomes.astype(np.int64)] = self.probabilities
        return out

    def mass(self, subset) -> float:
        subset = np.asarray(list(subset), dtype=np.uint64)
        return float(self.probabilities[np.isin(self.outcomes, subset)].sum())


def measure_distribution(rho) -> MeasuredDistribution:
    """Computational-basis outcome distribution (zero entries dropped)."""
    rho = _to_state(rho)
    p = np.clip(np.real(np.diag(rho.matrix)), 0, None)
    p = p / p.sum()
    idx = np.nonzero(p > 0)[0]
    return MeasuredDistribution(rho.n, idx.astype(np.uint64), p[idx])


# --------------------------------------------------------------------------
# Lieb-Robinson experiments

@dataclass(frozen=True)
class InteractionGraphParams:
    """Parameters of a local interaction graph for light-cone estimates."""

    D: int
    delta: int
    M: float
    b: float

    def __post_init__(self):
        if self.D < 1 or self.delta < 1 or self.M <= 0 or self.b <= 0:
            raise ValidationError("need D >= 1, delta >= 1, M > 0, b > 0")

    @property
    def v(self) -> float:
        return float(np.e * self.b * (2 * self.D - 1))

    @classmethod
    def from_graph(cls, graph, delta: int = 1, b: float = 1.0) -> "InteractionGraphParams":
        """Measure ``D`` and the smallest ``M`` with ``|S_e(k)| <= M k^(δ-1)``.

        Distinct edges sharing a vertex are taken to be at distance 1.
        """
        D = max(len(graph.neighbors(v)) for v in range(graph.n))
        dist = graph.distances()
        edges = sorted(graph.edges)
        M = 0.0
        for e in edges:
            counts = {}
            for f in edges:
                if f == e:
                    continue
                k = max(1, int(min(dist[a, c] for a in e for c in f)))
                counts[k] = counts.get(k, 0) + 1
            for k, c in counts.items():
                M = max(M, c / k ** (delta - 1))
        return cls(D, delta, M if M > 0 else 1.0, b)


def _coupling(table, t):
    if np.isscalar(table):
        return float(table)
    knots, vals = table
    return float(np.interp(t, knots, vals))


def _evolve(terms, n, rho, t, steps):
    if not terms or t == 0:
        return rho
    dims = (2,) * n
    full = [(embed(H, e, dims), a) for e, H, a in terms]
    h = t / steps
    constant = all(np.isscalar(a) for _, _, a in terms)
    if constant:
        H = sum(a * m for m, a in full)
        U = expm(-1j * t * H)
        return U @ rho @ U.conj().T
    for k in range(steps):
        tm = (k + 0.5) * h
        H = sum(_coupling(a, tm) * m for m, a in full)
        U = expm(-1j * h * H)
        rho = U @ rho @ U.conj().T
    return rho


def lr_discrepancy(H_terms, A, B, t: float, rho, steps: int = 400) -> float:
    """Trace distance between A-marginals of full and B-restricted evolutions.

    Parameters
    ----------
    H_terms : list of (edge, H_e, coupling)
        ``H_e`` acts on the qubits of ``edge`` and must satisfy
        ``‖H_e‖ <= 1/2``. ``coupling`` is a constant or a piecewise-linear
        table ``(times, values)``.
    A, B : sets of int
        ``A ⊆ B``; the restricted evolution keeps terms supported in ``B``.
    t : float
    rho : DensityMatrix
    steps : int
        Exponential-midpoint steps for time-dependent couplings. Constant
        couplings are propagated exactly.
    """
    rho = _to_state(rho)
    n = rho.n
    A, B = set(A), set(B)
    if not A <= B or not B <= set(range(n)):
        raise ValidationError("need A ⊆ B ⊆ V")
    terms = []
    for e, H, a in H_terms:
        H = check_hermitian(H)
        if op_norm(H) > 0.5 + 1e-12:
            raise DomainError(f"term on {e} has norm {op_norm(H)} > 1/2")
        terms.append((tuple(e), H, a))
    full = _evolve(terms, n, np.array(rho.matrix), t, steps)
    restricted = _evolve([x for x in terms if set(x[0]) <= B], n, np.array(rho.matrix), t, steps)
    keep = sorted(A)
    diff = partial_trace(full - restricted, rho.shape.dims, keep)
    return trace_norm(diff)


# --------------------------------------------------------------------------
# JSON

def _cjson(m) -> list:
    m = np.asarray(m, dtype=complex)
    return np.stack([m.real, m.imag], axis=-1).tolist()


def _from_cjson(x) -> np.ndarray:
    a = np.asarray(x, dtype=float)
    if a.shape[-1] != 2:
        raise ValidationError("complex entries must be [re, im] pairs")
    return a[..., 0] + 1j * a[..., 1]


def state_to_json(rho: DensityMatrix) -> dict:
    return {"n": rho.n, "d": rho.shape.d, "matrix": _cjson(rho.matrix)}


def state_from_json(obj: dict) -> DensityMatrix:
    return DensityMatrix(RegisterShape(int(obj["n"]), int(obj.get("d", 2))), _from_cjson(obj["matrix"]))


def circuit_to_json(c: CircuitArchitecture) -> dict:
    layers = []
    for layer in c.layers:
        if isinstance(layer, GraphHamiltonianLayer):
            h = np.asarray(layer.hamiltonian)
            layers.append({"type": "graph_hamiltonian", "gamma": layer.gamma,
                           "graph": {"n": layer.graph.n, "edges": [list(e) for e in sorted(layer.graph.edges)]},
                           "diagonal": layer.diagonal,
                           "hamiltonian": h.tolist() if layer.diagonal else _cjson(h)})
        else:
            layers.append({"type": "gates", "supports": [list(s) for s in layer.supports],
                           "channels": [_cjson(ch) for ch in layer.channels]})
    return {"n": c.n, "layers": layers}


def circuit_from_json(obj: dict) -> CircuitArchitecture:
    from .maxcut import Graph

    layers = []
    for item in obj["layers"]:
        if item["type"] == "graph_hamiltonian":
            g = Graph.from_json(item["graph"])
            h = np.asarray(item["hamiltonian"], float) if item["diagonal"] else _from_cjson(item["hamiltonian"])
            layers.append(GraphHamiltonianLayer(g, float(item["gamma"]), h, bool(item["diagonal"])))
        elif item["type"] == "gates":
            layers.append(GateLayer(tuple(tuple(s) for s in item["supports"]),
                                    tuple(_from_cjson(ch) for ch in item["channels"])))
        else:
            raise ValidationError(f"unknown layer type {item['type']!r}")
    return CircuitArchitecture(int(obj["n"]), tuple(layers))
