"""Bitstring kernels with a compiled backend and a numpy fallback.

The Cython extension is used when it was built and ``QOTBOUNDS_PURE_PYTHON``
is unset; otherwise the numpy implementation is selected at import.
"""

import os

import numpy as np

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py
if not os.environ.get("QOTBOUNDS_PURE_PYTHON"):
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py


def hamming_matrix(a, b) -> np.ndarray:
    """Pairwise Hamming distances between two arrays of integer bitstrings."""
    return _impl.hamming_matrix(np.ascontiguousarray(a, dtype=np.uint64),
                                np.ascontiguousarray(b, dtype=np.uint64))


def min_hamming(a, b) -> int:
    """Smallest Hamming distance between any element of ``a`` and of ``b``."""
    return int(_impl.min_hamming(np.ascontiguousarray(a, dtype=np.uint64),
                                 np.ascontiguousarray(b, dtype=np.uint64)))


def cut_values(n: int, edges) -> np.ndarray:
    """Cut size of every bitstring of length ``n`` (``2**n`` entries)."""
    e = np.ascontiguousarray(np.asarray(edges, dtype=np.int64).reshape(-1, 2))
    return _impl.cut_values(int(n), e)


def flip_lipschitz(f, n: int) -> np.ndarray:
    """Per-qubit maximum of ``|f(x) - f(x xor e_v)|`` over all ``x``."""
    return _impl.flip_lipschitz(np.ascontiguousarray(f, dtype=np.float64), int(n))
