"""Graphs, Max-Cut brute force, expansion checks and the bipartite symmetry experiment."""

from dataclasses import dataclass, field
from typing import FrozenSet, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from . import kernels
from .errors import SizeError, ValidationError
from .quantum import DensityMatrix, Observable, RegisterShape, measure_distribution, zz_hamiltonian

__all__ = [
    "Graph", "cut_value", "cut_diagonal", "max_cut_bruteforce", "expansion_constant",
    "expansion_check", "maxcut_hamiltonian", "ising_hamiltonian", "random_regular_bipartite",
    "symmetry_experiment", "ExpansionResult", "SymmetryReport",
]


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``."""

    n: int
    edges: FrozenSet[Tuple[int, int]]

    def __post_init__(self):
        clean = set()
        for e in self.edges:
            u, v = (int(x) for x in e)
            if u == v:
                raise ValidationError(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValidationError(f"edge {e} outside 0..{self.n - 1}")
            key = (min(u, v), max(u, v))
            if key in clean:
                raise ValidationError(f"duplicate edge {key}")
            clean.add(key)
        object.__setattr__(self, "edges", frozenset(clean))

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        return cls(n, frozenset(tuple(e) for e in edges))

    @classmethod
    def from_json(cls, obj: dict) -> "Graph":
        return cls.from_edges(int(obj["n"]), [tuple(e) for e in obj["edges"]])

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in sorted(self.edges)]}

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])

    @classmethod
    def complete_bipartite(cls, a: int, b: int) -> "Graph":
        return cls.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])

    @property
    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=int)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def neighbors(self, v: int) -> set:
        return {b if a == v else a for a, b in self.edges if v in (a, b)}

    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        for u, v in self.edges:
            A[u, v] = A[v, u] = 1
        return A

    def distances(self) -> np.ndarray:
        return shortest_path(csr_matrix(self.adjacency()), unweighted=True, directed=False)

    def is_regular(self) -> bool:
        d = self.degrees
        return bool(self.n > 0 and np.all(d == d[0]))

    def bipartition(self) -> Optional[np.ndarray]:
        """Side label 0/1 per vertex, or None if the graph is not bipartite."""
        side = -np.ones(self.n, dtype=int)
        adj = [self.neighbors(v) for v in range(self.n)]
        for s in range(self.n):
            if side[s] >= 0:
                continue
            side[s] = 0
            stack = [s]
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if side[w] < 0:
                        side[w] = 1 - side[u]
                        stack.append(w)
                    elif side[w] == side[u]:
                        return None
        return side


def _bits_to_int(x, n: int) -> int:
    if isinstance(x, (int, np.integer)):
        if not 0 <= int(x) < 2 ** n:
            raise ValidationError(f"label {x} does not fit in {n} bits")
        return int(x)
    x = [int(b) for b in x]
    if len(x) != n or any(b not in (0, 1) for b in x):
        raise ValidationError(f"expected {n} bits, got {x}")
    return int("".join(map(str, x)), 2) if n else 0


def cut_value(G: Graph, x) -> int:
    """Number of edges whose endpoints get different bits in ``x``."""
    x = _bits_to_int(x, G.n)
    return sum(((x >> (G.n - 1 - u)) ^ (x >> (G.n - 1 - v))) & 1 for u, v in G.edges)


def cut_diagonal(G: Graph) -> np.ndarray:
    """Cut values of all ``2**n`` bitstrings."""
    if G.n > 26:
        raise SizeError("cut enumeration limited to 26 vertices")
    return kernels.cut_values(G.n, sorted(G.edges))


def max_cut_bruteforce(G: Graph) -> Tuple[int, int]:
    """Exact maximum cut and one optimal bitstring (label with last bit 0)."""
    if G.n > 24:
        raise SizeError("brute force limited to 24 vertices")
    if G.n == 1:
        return 0, 0
    # fixing the last vertex on side 0 halves the search
    vals = kernels.cut_values(G.n, sorted(G.edges))[::2]
    k = int(np.argmax(vals))
    return int(vals[k]), 2 * k


def expansion_constant(D: int) -> float:
    return D / 2 - np.sqrt(D - 1)


@dataclass(frozen=True)
class ExpansionResult:
    h: float
    passed: bool
    violating: Optional[int]


def expansion_check(G: Graph) -> ExpansionResult:
    """Exhaustively test ``C(x) >= h min(|x|, n-|x|)`` for a regular graph."""
    if not G.is_regular():
        raise ValidationError("expansion check needs a regular graph")
    if G.n > 20:
        raise SizeError("exhaustive expansion check limited to 20 vertices")
    h = expansion_constant(int(G.degrees[0]))
    cuts = kernels.cut_values(G.n, sorted(G.edges))
    w = np.bitwise_count(np.arange(2 ** G.n, dtype=np.uint64)).astype(int)
    bad = np.nonzero(cuts < h * np.minimum(w, G.n - w) - 1e-12)[0]
    if bad.size:
        return ExpansionResult(h, False, int(bad[0]))
    return ExpansionResult(h, True, None)


def maxcut_hamiltonian(G: Graph) -> Observable:
    """Diagonal observable ``½ Σ_{(j,k)∈E} (I - Z_j Z_k)``."""
    return Observable(RegisterShape(G.n), np.diag(cut_diagonal(G).astype(complex)))


def ising_hamiltonian(A, b=None) -> Observable:
    """Diagonal observable ``-Σ_{i,j} A_ij Z_i Z_j - Σ_i b_i Z_i``."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    pairs = [(i, j) for i in range(n) for j in range(n) if A[i, j] != 0 and i != j]
    diag = -zz_hamiltonian(n, pairs, [A[i, j] for i, j in pairs])
    diag -= np.sum(np.diag(A))  # Z_i Z_i = I
    if b is not None:
        x = np.arange(2 ** n)
        for i, bi in enumerate(np.asarray(b, float)):
            diag -= bi * (1 - 2 * ((x >> (n - 1 - i)) & 1))
    return Observable(RegisterShape(n), np.diag(diag.astype(complex)))


def random_regular_bipartite(n: int, D: int, seed: int, max_tries: int = 10000) -> Graph:
    """Random ``D``-regular bipartite graph on ``n/2 + n/2`` vertices.

    Configuration model: the ``D`` stubs of each right vertex are matched
    to a random permutation of the left stubs; pairings with repeated edges
    are rejected.
    """
    if n % 2 or n < 2 or D < 1 or D > n // 2:
        raise ValidationError(f"need even n and 1 <= D <= n/2, got n={n}, D={D}")
    half = n // 2
    rng = np.random.default_rng(seed)
    left = np.repeat(np.arange(half), D)
    right = np.repeat(np.arange(half, n), D)
    for _ in range(max_tries):
        perm = rng.permutation(left)
        pairs = set(zip(perm.tolist(), right.tolist()))
        if len(pairs) == half * D:
            G = Graph.from_edges(n, pairs)
            assert np.all(G.degrees == D)
            return G
    raise ValidationError(f"rejection budget of {max_tries} exceeded")


@dataclass(frozen=True)
class SymmetryReport:
    p_opt: float
    p_opt_bar: float
    energy: float
    energy_threshold: float
    h: float
    preconditions: dict
    mode: str
    equal: bool
    quarter: bool

    @property
    def passed(self) -> bool:
        """True unless the claim was asserted and failed."""
        return self.mode == "observe" or (self.equal and self.quarter)


def symmetry_experiment(rho, G: Graph, x_opt: Optional[int] = None) -> SymmetryReport:
    """Ball probabilities around an optimal cut and its complement.

    Computes ``P(d_H(X, x_opt) <= n/3)`` and the same for the complement
    ``x̄_opt``. When every precondition holds (bit-flip symmetry of ρ,
    regular bipartite expanding graph, energy at least ``|E| - h n/6``) the
    report is in ``assert`` mode and ``passed`` reflects equality and the
    1/4 floor; otherwise the numbers are observations only.
    """
    rho = rho if isinstance(rho, DensityMatrix) else DensityMatrix.from_matrix(rho)
    n = G.n
    if rho.n != n:
        raise ValidationError("state and graph sizes differ")
    full = 2 ** n - 1
    flip = np.arange(2 ** n) ^ full
    m = rho.matrix
    sym = float(np.max(np.abs(m[np.ix_(flip, flip)] - m))) <= 1e-10
    side = G.bipartition()
    bip = side is not None
    reg = G.is_regular()
    exp = expansion_check(G) if reg else ExpansionResult(float("nan"), False, None)
    if x_opt is None:
        if bip:
            x_opt = int("".join(str(int(s)) for s in side), 2)
        else:
            x_opt = max_cut_bruteforce(G)[1]
    h = float(exp.h)
    energy = float(np.real(np.dot(np.diag(m), cut_diagonal(G))))
    thr = float(len(G.edges) - h * n / 6) if reg else float("nan")
    pre = {
        "bitflip_symmetric": sym,
        "bipartite": bip,
        "regular": reg,
        "expansion": exp.passed,
        "energy_condition": bool(reg and energy >= thr),
    }
    mu = measure_distribution(rho)
    d1 = np.bitwise_count(mu.outcomes ^ np.uint64(x_opt))
    d2 = np.bitwise_count(mu.outcomes ^ np.uint64(x_opt ^ full))
    p1 = float(mu.probabilities[d1 <= n / 3].sum())
    p2 = float(mu.probabilities[d2 <= n / 3].sum())
    mode = "assert" if all(pre.values()) else "observe"
    equal = abs(p1 - p2) <= 1e-9
    quarter = min(p1, p2) >= 0.25 - 1e-12
    return SymmetryReport(p1, p2, energy, thr, h, pre, mode, equal, quarter)
