"""Pure numpy versions of the bitstring kernels.

Bit convention: qubit ``v`` of an ``n``-qubit register is bit ``n-1-v`` of
the integer label.
"""

import numpy as np


def _popcount(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.uint64)
    return np.bitwise_count(x).astype(np.int64)


def hamming_matrix(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    return _popcount(a[:, None] ^ b[None, :])


def min_hamming(a, b) -> int:
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    best = 65
    for start in range(0, a.size, 1024):
        best = min(best, int(hamming_matrix(a[start:start + 1024], b).min()))
        if best == 0:
            break
    return best


def cut_values(n: int, edges) -> np.ndarray:
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    x = np.arange(2 ** n, dtype=np.int64)
    out = np.zeros(2 ** n, dtype=np.int64)
    for u, v in edges:
        out += ((x >> (n - 1 - u)) ^ (x >> (n - 1 - v))) & 1
    return out


def flip_lipschitz(f, n: int) -> np.ndarray:
    f = np.asarray(f, dtype=np.float64)
    x = np.arange(f.size)
    out = np.zeros(n)
    for v in range(n):
        bit = 1 << (n - 1 - v)
        low = x[(x & bit) == 0]
        if low.size:
            out[v] = np.abs(f[low] - f[low | bit]).max()
    return out
