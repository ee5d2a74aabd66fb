"""Dense complex linear algebra primitives.

Everything here works on plain ``numpy`` arrays. Registers are described by a
tuple of local dimensions ``dims``; qudit 0 is the most significant factor of
the tensor product, so basis index ``x`` of ``n`` qubits is the bitstring of
``x`` written with qubit 0 first.
"""

from dataclasses import dataclass
from functools import reduce
from itertools import product
from typing import Callable, Sequence, Union

import numpy as np

from .config import TOL
from .errors import DomainError, ValidationError

__all__ = [
    "Spectrum",
    "as_square",
    "check_hermitian",
    "eig_hermitian",
    "matrix_function",
    "matrix_power",
    "partial_trace",
    "apply_kraus",
    "apply_unitary",
    "embed",
    "kron_all",
    "superoperator_matrix",
    "norm_2to2",
    "trace_norm",
    "op_norm",
    "pauli_basis",
]

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition of a Hermitian matrix.

    Attributes
    ----------
    eigenvalues : ndarray
        Real eigenvalues in ascending order.
    eigenvectors : ndarray
        Unitary matrix whose columns are the matching eigenvectors.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_square(A) -> np.ndarray:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValidationError("matrix has non-finite entries")
    return A.astype(complex, copy=False)


def check_hermitian(A, tol: float = TOL.hermiticity) -> np.ndarray:
    """Validate Hermiticity and return the symmetrized matrix."""
    A = as_square(A)
    scale = max(1.0, float(np.max(np.abs(A))) if A.size else 1.0)
    if A.size and np.max(np.abs(A - A.conj().T)) > tol * scale:
        raise ValidationError("matrix is not Hermitian within tolerance")
    return (A + A.conj().T) / 2


def eig_hermitian(A) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    A : array_like
        Square Hermitian matrix.

    Returns
    -------
    Spectrum
        Ascending eigenvalues and unitary eigenvectors.
    """
    H = check_hermitian(A)
    w, v = np.linalg.eigh(H)
    return Spectrum(w, v)


def matrix_function(A, f: Callable[[np.ndarray], np.ndarray], pinv: bool = False,
                    cutoff: float = TOL.pinv_cutoff) -> np.ndarray:
    """Apply a real function to a Hermitian matrix through its spectrum.

    Parameters
    ----------
    A : array_like
        Hermitian matrix.
    f : callable
        Vectorized real function of the eigenvalues.
    pinv : bool
        Pseudo-inverse convention: eigenvalues with ``|λ| <= cutoff`` are
        sent to 0 instead of being passed to ``f``.
    cutoff : float
        Threshold used by ``pinv``.

    Raises
    ------
    DomainError
        If ``f`` is not finite on a retained eigenvalue.
    """
    spec = eig_hermitian(A)
    lam = spec.eigenvalues
    keep = np.abs(lam) > cutoff if pinv else np.ones(lam.shape, dtype=bool)
    vals = np.zeros_like(lam)
    with np.errstate(all="ignore"):
        vals[keep] = np.asarray(f(lam[keep]), dtype=float)
    if not np.all(np.isfinite(vals)):
        bad = lam[keep][~np.isfinite(vals[keep])]
        raise DomainError(f"function undefined at eigenvalue(s) {bad}")
    v = spec.eigenvectors
    return (v * vals) @ v.conj().T


def matrix_power(A, s: float, cutoff: float = TOL.pinv_cutoff) -> np.ndarray:
    """Power of a positive semidefinite matrix.

    Eigenvalues with ``|λ| <= cutoff`` map to 0 (for ``s > 0`` this is the
    continuous extension, for ``s <= 0`` the pseudo-inverse convention).
    Eigenvalues below ``-cutoff`` are a domain error for non-integer ``s``.
    """
    if float(s).is_integer() and s > 0:
        return np.linalg.matrix_power(check_hermitian(A), int(s))
    return matrix_function(A, lambda x: np.power(x, s), pinv=True, cutoff=cutoff)


def kron_all(mats: Sequence[np.ndarray]) -> np.ndarray:
    if len(mats) == 0:
        return np.eye(1, dtype=complex)
    return reduce(np.kron, mats)


def _check_dims(dims, dim):
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims) or int(np.prod(dims)) != dim:
        raise ValidationError(f"register {dims} does not match dimension {dim}")
    return dims


def _check_subset(subset, n):
    subset = [int(k) for k in subset]
    if len(set(subset)) != len(subset) or any(k < 0 or k >= n for k in subset):
        raise ValidationError(f"invalid vertex subset {subset} for n={n}")
    return subset


def partial_trace(A, dims, keep) -> np.ndarray:
    """Trace out every qudit not in ``keep``.

    Parameters
    ----------
    A : array_like
        Square matrix on the register ``dims``.
    dims : sequence of int
        Local dimensions.
    keep : iterable of int
        Qudits that remain, returned in ascending order.
    """
    A = as_square(A)
    dims = _check_dims(dims, A.shape[0])
    n = len(dims)
    keep = sorted(_check_subset(keep, n))
    drop = [k for k in range(n) if k not in keep]
    dk = int(np.prod([dims[k] for k in keep]))
    dd = int(np.prod([dims[k] for k in drop]))
    T = A.reshape(dims + dims)
    perm = keep + drop + [n + k for k in keep] + [n + k for k in drop]
    T = T.transpose(perm).reshape(dk, dd, dk, dd)
    return np.trace(T, axis1=1, axis2=3)


def _local_axes(rho, dims, support):
    n = len(dims)
    support = _check_subset(support, n)
    rest = [k for k in range(n) if k not in support]
    ds = int(np.prod([dims[k] for k in support]))
    dr = int(np.prod([dims[k] for k in rest]))
    perm = support + rest + [n + k for k in support] + [n + k for k in rest]
    T = rho.reshape(dims + dims).transpose(perm).reshape(ds, dr, ds, dr)
    inv = np.argsort(perm)
    shape = [dims[k] for k in support] + [dims[k] for k in rest]
    return T, ds, shape + shape, inv


def apply_kraus(rho, kraus, support, dims, check: bool = True) -> np.ndarray:
    """Apply a local channel given by Kraus operators on ``support``.

    Parameters
    ----------
    rho : array_like
        Operator on the full register.
    kraus : sequence of array_like
        Kraus operators acting on the tensor product of the support qudits,
        in the order listed in ``support``.
    support : sequence of int
        Qudits the channel acts on.
    dims : sequence of int
        Local dimensions of the register.
    check : bool
        Verify the completeness relation ``Σ K†K = I``.
    """
    rho = as_square(rho)
    dims = _check_dims(dims, rho.shape[0])
    K = np.asarray(kraus, dtype=complex)
    if K.ndim == 2:
        K = K[None]
    T, ds, shape, inv = _local_axes(rho, dims, support)
    if K.shape[1:] != (ds, ds):
        raise ValidationError(f"Kraus operators must be {ds}x{ds}, got {K.shape[1:]}")
    if check:
        comp = np.einsum("kba,kbc->ac", K.conj(), K)
        if np.max(np.abs(comp - np.eye(ds))) > TOL.kraus_completeness:
            raise ValidationError("Kraus operators are not trace preserving")
    out = np.einsum("kab,bxcy,kdc->axdy", K, T, K.conj(), optimize=True)
    dim = rho.shape[0]
    return out.reshape(shape).transpose(inv).reshape(dim, dim)


def apply_unitary(rho, U, support, dims) -> np.ndarray:
    """Conjugate ``rho`` by a unitary acting on ``support``."""
    return apply_kraus(rho, [U], support, dims, check=False)


def embed(op, support, dims) -> np.ndarray:
    """Tensor a local operator on ``support`` with identities elsewhere."""
    dims = tuple(dims)
    n = len(dims)
    support = _check_subset(support, n)
    op = as_square(op)
    rest = [k for k in range(n) if k not in support]
    dr = int(np.prod([dims[k] for k in rest]))
    full = np.kron(op, np.eye(dr))
    shape = [dims[k] for k in support] + [dims[k] for k in rest]
    perm = support + rest
    inv = list(np.argsort(perm))
    inv = inv + [n + k for k in inv]
    dim = int(np.prod(dims))
    return full.reshape(shape + shape).transpose(inv).reshape(dim, dim)


def pauli_basis(n_qubits: int) -> np.ndarray:
    """Orthonormal Pauli-string basis ``P/sqrt(2^n)`` in I, X, Y, Z order."""
    mats = []
    for labels in product("IXYZ", repeat=n_qubits):
        mats.append(kron_all([PAULI[s] for s in labels]))
    return np.array(mats) / np.sqrt(2 ** n_qubits)


ChannelLike = Union[Callable[[np.ndarray], np.ndarray], Sequence[np.ndarray]]


def _as_map(channel: ChannelLike, dim=None):
    if callable(channel):
        if dim is None:
            raise ValidationError("dim is required for a callable channel")
        return channel, int(dim)
    K = np.asarray(channel, dtype=complex)
    if K.ndim == 2:
        K = K[None]
    return (lambda X: np.einsum("kab,bc,kdc->ad", K, X, K.conj())), K.shape[1]


def superoperator_matrix(channel: ChannelLike, dim: int = None, weighting=None,
                         basis: str = "standard") -> np.ndarray:
    """Matrix of a linear map on operators in an orthonormal basis.

    Parameters
    ----------
    channel : callable or sequence of ndarray
        Either Kraus operators or any linear map ``X -> N(X)``.
    dim : int, optional
        Hilbert-space dimension, needed when ``channel`` is callable.
    weighting : array_like, optional
        Full-rank state σ. When given, the returned matrix represents
        ``Γ^{-1/2} ∘ N ∘ Γ^{1/2}`` with ``Γ^{s}(X) = σ^{s/2} X σ^{s/2}``, so
        its largest singular value is the σ-weighted 2→2 norm of ``N``.
    basis : {"standard", "pauli"}
        ``standard`` uses matrix units ``|i><j|`` in row-major order,
        ``pauli`` the normalized Pauli strings (qubit registers only).

    Returns
    -------
    ndarray
        ``S`` with ``S[k, l] = tr[B_k^† N(B_l)]``.
    """
    N, d = _as_map(channel, dim)
    if weighting is not None:
        sigma = check_hermitian(weighting)
        if sigma.shape != (d, d):
            raise ValidationError("weighting has the wrong dimension")
        w = np.linalg.eigvalsh(sigma)
        if w[0] <= TOL.pinv_cutoff:
            raise DomainError("weighting state must be full rank")
        s_pos = matrix_power(sigma, 0.25)
        s_neg = matrix_power(sigma, -0.25)
        inner = N
        N = lambda X: s_neg @ inner(s_pos @ X @ s_pos) @ s_neg
    if basis == "standard":
        B = np.eye(d * d, dtype=complex).reshape(d * d, d, d)
    elif basis == "pauli":
        nq = int(round(np.log2(d)))
        if 2 ** nq != d:
            raise ValidationError("pauli basis needs a qubit register")
        B = pauli_basis(nq)
    else:
        raise ValidationError(f"unknown basis {basis!r}")
    images = np.array([N(b) for b in B])
    return np.einsum("kab,lab->kl", B.conj(), images)


def norm_2to2(S) -> float:
    """Largest singular value of a superoperator matrix."""
    return float(np.linalg.svd(np.asarray(S), compute_uv=False)[0])


def trace_norm(A) -> float:
    A = as_square(A)
    if np.allclose(A, A.conj().T, atol=1e-13):
        return float(np.abs(np.linalg.eigvalsh((A + A.conj().T) / 2)).sum())
    return float(np.linalg.svd(A, compute_uv=False).sum())


def op_norm(A) -> float:
    A = as_square(A)
    if np.allclose(A, A.conj().T, atol=1e-13):
        return float(np.abs(np.linalg.eigvalsh((A + A.conj().T) / 2)).max())
    return float(np.linalg.svd(A, compute_uv=False)[0])
