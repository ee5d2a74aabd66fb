# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled bitstring kernels. See ``_kernels_py`` for the reference code."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t
from libc.math cimport fabs

cnp.import_array()

cdef extern from *:
    int popcount64 "__builtin_popcountll"(unsigned long long) nogil


def hamming_matrix(const uint64_t[:] a, const uint64_t[:] b):
    cdef Py_ssize_t i, j, na = a.shape[0], nb = b.shape[0]
    out = np.empty((na, nb), dtype=np.int64)
    cdef int64_t[:, :] o = out
    with nogil:
        for i in range(na):
            for j in range(nb):
                o[i, j] = popcount64(a[i] ^ b[j])
    return out


def min_hamming(const uint64_t[:] a, const uint64_t[:] b):
    cdef Py_ssize_t i, j, na = a.shape[0], nb = b.shape[0]
    cdef int best = 65, d
    with nogil:
        for i in range(na):
            for j in range(nb):
                d = popcount64(a[i] ^ b[j])
                if d < best:
                    best = d
                    if best == 0:
                        break
            if best == 0:
                break
    return best


def cut_values(int n, const int64_t[:, :] edges):
    cdef Py_ssize_t x, k, m = edges.shape[0], size = (<Py_ssize_t>1) << n
    out = np.zeros(size, dtype=np.int64)
    cdef int64_t[:] o = out
    cdef int64_t c
    cdef int su, sv
    with nogil:
        for x in range(size):
            c = 0
            for k in range(m):
                su = n - 1 - edges[k, 0]
                sv = n - 1 - edges[k, 1]
                c += ((x >> su) ^ (x >> sv)) & 1
            o[x] = c
    return out


def flip_lipschitz(const double[:] f, int n):
    cdef Py_ssize_t x, size = f.shape[0]
    cdef int v
    cdef uint64_t bit
    cdef double d
    out = np.zeros(n, dtype=np.float64)
    cdef double[:] o = out
    with nogil:
        for v in range(n):
            bit = (<uint64_t>1) << (n - 1 - v)
            for x in range(size):
                if x & bit:
                    continue
                d = fabs(f[x] - f[x | bit])
                if d > o[v]:
                    o[v] = d
    return out
