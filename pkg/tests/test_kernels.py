import os
import subprocess
import sys

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from qotbounds import _kernels_py, kernels

try:
    from qotbounds import _kernels as _kernels_c
except ImportError:
    _kernels_c = None

BACKENDS = [_kernels_py] + ([_kernels_c] if _kernels_c is not None else [])

labels = st.lists(st.integers(0, 2 ** 20 - 1), min_size=1, max_size=40)


def test_backend_selected():
    if os.environ.get("QOTBOUNDS_PURE_PYTHON") or _kernels_c is None:
        assert kernels.BACKEND == "python"
    else:
        assert kernels.BACKEND == "cython"


def test_pure_python_switch():
    code = "from qotbounds import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, QOTBOUNDS_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "python"


@settings(max_examples=50, deadline=None)
@given(labels, labels)
def test_hamming_agrees(a, b):
    a, b = np.array(a, dtype=np.uint64), np.array(b, dtype=np.uint64)
    ref = np.array([[bin(int(x) ^ int(y)).count("1") for y in b] for x in a])
    for k in BACKENDS:
        np.testing.assert_array_equal(k.hamming_matrix(a, b), ref)
        assert k.min_hamming(a, b) == ref.min()


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 9).flatmap(lambda n: st.tuples(
    st.just(n), st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
                        .filter(lambda e: e[0] < e[1]), max_size=12))))
def test_cut_values_agree(case):
    n, edges = case
    edges = sorted(edges)
    ref = np.array([sum(((x >> (n - 1 - u)) ^ (x >> (n - 1 - v))) & 1 for u, v in edges)
                    for x in range(2 ** n)])
    for k in BACKENDS:
        np.testing.assert_array_equal(k.cut_values(n, np.array(edges, dtype=np.int64).reshape(-1, 2)),
                                      ref)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2 ** 31))
def test_flip_lipschitz_agrees(n, seed):
    f = np.random.default_rng(seed).normal(size=2 ** n)
    x = np.arange(2 ** n)
    ref = [np.max(np.abs(f - f[x ^ (1 << (n - 1 - v))])) for v in range(n)]
    for k in BACKENDS:
        np.testing.assert_allclose(k.flip_lipschitz(f, n), ref, rtol=0, atol=0)
