import hashlib
import json
import math

import numpy as np
import pytest

from qotbounds import suites
from qotbounds.errors import SizeError, ValidationError
from qotbounds.maxcut import (Graph, cut_diagonal, cut_value, expansion_check, ising_hamiltonian,
                              max_cut_bruteforce, maxcut_hamiltonian, random_regular_bipartite,
                              symmetry_experiment)
from qotbounds.quantum import (QAOAConfig, build_qaoa_circuit, maximally_mixed, plus_state,
                               simulate_circuit)
from qotbounds.transport import lipschitz_classical


def test_graph_invariants():
    with pytest.raises(ValidationError):
        Graph.from_edges(3, [(0, 0)])
    with pytest.raises(ValidationError):
        Graph.from_edges(3, [(0, 1), (1, 0)])
    G = Graph.from_edges(3, [(1, 0), (1, 2)])
    assert len(G.edges) == 2
    np.testing.assert_array_equal(G.degrees, [1, 2, 1])
    assert Graph.from_json(G.to_json()) == G


def test_cut_value_examples():
    G = Graph.complete(2)
    assert cut_value(G, "00") == 0
    assert cut_value(G, [0, 1]) == 1
    with pytest.raises(ValidationError):
        cut_value(G, [0, 1, 1])


def test_max_cut_examples():
    assert max_cut_bruteforce(Graph.cycle(6))[0] == 6
    assert max_cut_bruteforce(Graph.cycle(5))[0] == 4
    assert max_cut_bruteforce(Graph.complete(4))[0] == 4
    C, x = max_cut_bruteforce(Graph.complete_bipartite(3, 4))
    assert C == 12
    assert cut_value(Graph.complete_bipartite(3, 4), x) == 12


def test_max_cut_size_limit():
    with pytest.raises(SizeError):
        max_cut_bruteforce(Graph.cycle(26))


def test_xor_identity_bipartite():
    for G in (Graph.cycle(8), random_regular_bipartite(12, 3, seed=2), Graph.path(14)):
        C, x_opt = max_cut_bruteforce(G)
        assert C == len(G.edges)
        cuts = cut_diagonal(G)
        x = np.arange(2 ** G.n)
        np.testing.assert_array_equal(cuts + cuts[x ^ x_opt], len(G.edges))


def test_hamiltonian_matches_cut_value():
    rng = np.random.default_rng(0)
    for n in (3, 6, 9):
        edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.4]
        G = Graph.from_edges(n, edges)
        diag = np.real(np.diag(maxcut_hamiltonian(G).matrix))
        np.testing.assert_array_equal(diag, [cut_value(G, x) for x in range(2 ** n)])


def test_hamiltonian_examples():
    assert not np.any(maxcut_hamiltonian(Graph.from_edges(3, [])).matrix)
    np.testing.assert_allclose(np.diag(maxcut_hamiltonian(Graph.complete(2)).matrix).real,
                               [0, 1, 1, 0])


def test_ising_hamiltonian():
    # -Z0 Z1 counted once from each ordered pair, plus a field on qubit 0
    A = np.array([[0, 0.5], [0.5, 0]])
    diag = np.real(np.diag(ising_hamiltonian(A, [1.0, 0.0]).matrix))
    np.testing.assert_allclose(diag, [-2, 0, 2, 0])


def test_lipschitz_equals_degree():
    for n, D in ((6, 3), (8, 2), (10, 4)):
        G = random_regular_bipartite(n, D, seed=n)
        assert lipschitz_classical(maxcut_hamiltonian(G)).value == D


def test_expansion_constant_and_pass():
    res = expansion_check(Graph.complete_bipartite(3, 3))
    assert res.h == pytest.approx(1.5 - math.sqrt(2))
    assert res.passed and res.violating is None
    assert expansion_check(Graph.complete_bipartite(4, 4)).passed


def test_expansion_violation_found():
    # two disjoint copies of K4: one copy is a zero cut with |x| = n/2
    edges = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    G = Graph.from_edges(8, edges + [(i + 4, j + 4) for i, j in edges])
    res = expansion_check(G)
    assert not res.passed
    x = res.violating
    w = bin(x).count("1")
    assert cut_value(G, x) < res.h * min(w, 8 - w)
    with pytest.raises(ValidationError):
        expansion_check(Graph.path(4))


def test_random_regular_bipartite():
    G = random_regular_bipartite(6, 3, seed=5)
    assert G == Graph.complete_bipartite(3, 3)
    digest = [hashlib.sha256(json.dumps(random_regular_bipartite(12, 3, seed=7).to_json()).encode())
              .hexdigest() for _ in range(2)]
    assert digest[0] == digest[1]
    for seed in range(100):
        G = random_regular_bipartite(10, 3, seed=seed)
        assert np.all(G.degrees == 3) and G.bipartition() is not None
    with pytest.raises(ValidationError):
        random_regular_bipartite(7, 2, seed=0)
    with pytest.raises(ValidationError):
        random_regular_bipartite(6, 4, seed=0)


def test_symmetry_cat_state():
    G = Graph.complete_bipartite(3, 3)
    x = int("000111", 2)
    psi = np.zeros(64)
    psi[[x, x ^ 63]] = 2 ** -0.5
    rep = symmetry_experiment(np.outer(psi, psi), G, x_opt=x)
    assert rep.p_opt == pytest.approx(0.5) and rep.p_opt_bar == pytest.approx(0.5)
    assert rep.mode == "assert" and rep.passed


def test_symmetry_maximally_mixed_observes():
    rep = symmetry_experiment(maximally_mixed(6), Graph.complete_bipartite(3, 3))
    assert rep.equal
    assert rep.mode == "observe"
    assert not rep.preconditions["energy_condition"]


def test_symmetry_equal_for_symmetric_states():
    G = Graph.complete_bipartite(3, 3)
    rng = np.random.default_rng(1)
    for _ in range(5):
        P = 2
        cfg = QAOAConfig(P, tuple(rng.uniform(0, 6, P)), tuple(rng.uniform(0, 3, P)), G)
        rho = simulate_circuit(build_qaoa_circuit(cfg), plus_state(6)).final
        rep = symmetry_experiment(rho, G)
        assert rep.preconditions["bitflip_symmetric"]
        assert rep.equal


def test_symmetry_assert_mode_reached_at_p4():
    # P = 2 and P = 3 stay below the energy condition on K_{3,3}; P = 4 clears it
    res = suites.symmetry(P=4)
    d = res.details
    assert d["mode"] == "assert" and res.passed
    assert d["energy"] >= d["threshold"]
    assert abs(d["p_opt"] - d["p_opt_bar"]) <= 1e-9 and d["p_opt"] >= 0.25
