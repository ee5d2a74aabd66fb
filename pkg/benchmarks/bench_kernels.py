"""Compare the compiled and numpy bitstring kernels.

Usage: python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from qotbounds import _kernels_py

try:
    from qotbounds import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None


def cases(rng):
    a = rng.integers(0, 2 ** 16, size=2000, dtype=np.uint64)
    b = rng.integers(0, 2 ** 16, size=2000, dtype=np.uint64)
    n = 18
    edges = np.array([(i, (i + 1) % n) for i in range(n)] + [(i, (i + 5) % n) for i in range(n)],
                     dtype=np.int64)
    f = rng.normal(size=2 ** n)
    return {
        "hamming_matrix 2000x2000": lambda k: k.hamming_matrix(a, b),
        "min_hamming 2000x2000": lambda k: k.min_hamming(a, b),
        "cut_values n=18, 36 edges": lambda k: k.cut_values(n, edges),
        "flip_lipschitz n=18": lambda k: k.flip_lipschitz(f, n),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'kernel':32s} {'numpy [ms]':>12s} {'cython [ms]':>12s} {'speedup':>8s}")
    for name, fn in cases(rng).items():
        t_py = min(timeit.repeat(lambda: fn(_kernels_py), number=1, repeat=args.repeat)) * 1e3
        if _kernels_c is None:
            print(f"{name:32s} {t_py:12.2f} {'n/a':>12s}")
            continue
        t_c = min(timeit.repeat(lambda: fn(_kernels_c), number=1, repeat=args.repeat)) * 1e3
        same = np.array_equal(np.asarray(fn(_kernels_py)), np.asarray(fn(_kernels_c)))
        print(f"{name:32s} {t_py:12.2f} {t_c:12.2f} {t_py / t_c:7.1f}x{'' if same else '  MISMATCH'}")


if __name__ == "__main__":
    main()
