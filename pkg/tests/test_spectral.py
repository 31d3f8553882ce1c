"""Test Laplacian spectra, the pseudoinverse and resistance distances."""
from hypothesis import given, settings, strategies as st
import networkx as nx
import numpy as np
import pytest

from netcoherence import (
    Graph,
    NetCoherenceBoundsError,
    NetCoherenceConnectivityError,
    NetCoherenceUsageError,
    kirchhoff_index,
    resistance_matrix,
    spectrum,
)
from netcoherence.generators import (
    ba_network,
    clique4_motif,
    complete,
    cycle,
    hdran,
    path,
    pseudofractal,
    ring_lattice,
    star,
    torus,
)
from netcoherence.graph import distance_matrix
from netcoherence.spectral import (
    METHOD_DEFLATED,
    METHOD_DENSE,
    ResistanceMatrix,
    additive_degree_kirchhoff,
    extreme_eigenvalues,
    foster_residual,
    multiplicative_degree_kirchhoff,
    pseudoinverse,
    pseudoinverse_trace,
    resistance,
    sum_rule_residual,
)

from .conftest import karate_graph, random_connected_graph, random_tree, to_networkx


def test_spectrum_complete():
    """Test K_N has eigenvalues 0 and N (N - 1 times)."""
    spec = spectrum(complete(6))
    assert spec.eigenvalues[0] == pytest.approx(0.0, abs=1e-10)
    assert np.allclose(spec.eigenvalues[1:], 6.0)
    assert spec.zero_count == 1
    assert spec.is_connected
    assert spec.algebraic_connectivity == pytest.approx(6.0)
    assert spec.largest == pytest.approx(6.0)
    assert spec.eigenvectors is None


def test_spectrum_cycle():
    """Test C_N has eigenvalues 2 - 2 cos(2 pi k / N)."""
    n = 11
    expected = np.sort(2.0 - 2.0 * np.cos(2.0 * np.pi * np.arange(n) / n))
    assert np.allclose(spectrum(cycle(n)).eigenvalues, expected)


def test_spectrum_vectors():
    """Test the eigenvectors diagonalize the Laplacian."""
    g = karate_graph()
    spec = spectrum(g, vectors=True)
    lap = nx.laplacian_matrix(to_networkx(g), nodelist=range(g.n)).toarray()
    vecs = spec.eigenvectors
    assert np.allclose(lap @ vecs, vecs * spec.eigenvalues, atol=1e-9)


def test_spectrum_counts_components():
    """Test the zero multiplicity equals the number of components."""
    spec = spectrum(Graph(7, [(0, 1), (1, 2), (3, 4), (5, 6)]))
    assert spec.zero_count == 3
    assert not spec.is_connected
    assert spec.algebraic_connectivity == pytest.approx(0.0, abs=1e-10)


def test_extreme_eigenvalues():
    """Test lambda_1 and lambda_max of a star."""
    lambda_1, lambda_max = extreme_eigenvalues(star(9))
    assert lambda_1 == pytest.approx(1.0)
    assert lambda_max == pytest.approx(9.0)


def test_pseudoinverse_properties():
    """Test L L^+ L = L, symmetry and zero row sums."""
    g = karate_graph()
    lap = nx.laplacian_matrix(to_networkx(g), nodelist=range(g.n)).toarray()
    pinv = pseudoinverse(g)
    assert np.allclose(pinv, pinv.T)
    assert np.allclose(pinv.sum(axis=1), 0.0, atol=1e-10)
    assert np.allclose(lap @ pinv @ lap, lap, atol=1e-9)
    assert np.allclose(pinv, np.linalg.pinv(lap), atol=1e-9)


def test_pseudoinverse_trace_routes():
    """Test the dense and deflated routes agree."""
    g = random_connected_graph(120, 60, seed=3)
    dense = pseudoinverse_trace(g, METHOD_DENSE)
    deflated = pseudoinverse_trace(g, METHOD_DEFLATED)
    assert deflated == pytest.approx(dense, rel=1e-9)


def test_pseudoinverse_trace_closed_forms():
    """Test tr(L^+) of complete and star graphs."""
    assert pseudoinverse_trace(complete(5)) == pytest.approx(4 / 5)
    # Star: eigenvalues 1 (n - 2 times) and n.
    assert pseudoinverse_trace(star(8)) == pytest.approx(6 + 1 / 8)


def test_pseudoinverse_trace_errors():
    """Test disconnected graphs and unknown methods."""
    g = Graph(4, [(0, 1), (2, 3)])
    with pytest.raises(NetCoherenceConnectivityError) as err:
        pseudoinverse_trace(g)
    assert err.value.components == 2
    with pytest.raises(NetCoherenceConnectivityError):
        pseudoinverse_trace(g, METHOD_DEFLATED)
    with pytest.raises(NetCoherenceUsageError):
        pseudoinverse_trace(karate_graph(), "magic")


def test_resistance_matrix_against_networkx():
    """Test all pairs resistances against the networkx oracle."""
    g = random_connected_graph(25, 15, seed=11)
    oracle = to_networkx(g)
    omega = resistance_matrix(g)
    assert omega.n == 25
    assert np.allclose(np.diag(omega.entries), 0.0)
    assert np.allclose(omega.entries, omega.entries.T)
    for i, j in [(0, 5), (3, 17), (24, 1)]:
        assert omega[i, j] == pytest.approx(nx.resistance_distance(oracle, i, j))


def test_resistance_single_pair():
    """Test the grounded solve against the matrix."""
    g = karate_graph()
    omega = resistance_matrix(g)
    assert resistance(g, 0, 33) == pytest.approx(omega[0, 33])
    assert resistance(g, 33, 0) == pytest.approx(omega[0, 33])
    assert resistance(g, 5, 5) == 0.0
    with pytest.raises(NetCoherenceBoundsError):
        resistance(g, 0, 34)


def test_resistance_path_and_cycle():
    """Test series and parallel resistances."""
    assert resistance(path(6), 0, 5) == pytest.approx(5.0)
    # Two arcs of length 3 and 5 in parallel.
    assert resistance(cycle(8), 0, 3) == pytest.approx(3 * 5 / 8)


def test_kirchhoff_index():
    """Test R of K_N is N - 1 and R = N tr(L^+)."""
    assert kirchhoff_index(complete(7)) == pytest.approx(6.0)
    g = karate_graph()
    assert kirchhoff_index(g) == pytest.approx(g.n * pseudoinverse_trace(g))
    assert kirchhoff_index(g, METHOD_DEFLATED) == pytest.approx(kirchhoff_index(g))


def test_kirchhoff_index_path():
    """Test R(P_N) is the Wiener index (N^3 - N) / 6."""
    assert kirchhoff_index(path(12)) == pytest.approx((12**3 - 12) / 6)


def test_degree_kirchhoff_indices_k4():
    """Test R* = 27 and R+ = 18 on K_4."""
    g = complete(4)
    omega = resistance_matrix(g)
    assert multiplicative_degree_kirchhoff(g, omega) == pytest.approx(27.0)
    assert additive_degree_kirchhoff(g, omega) == pytest.approx(18.0)
    assert multiplicative_degree_kirchhoff(g) == pytest.approx(27.0)


def test_degree_kirchhoff_indices_by_hand():
    """Test both indices against an explicit double loop on a tree."""
    g = random_tree(15, seed=2)
    omega = resistance_matrix(g)
    d = g.degrees
    mul = sum(d[i] * d[j] * omega[i, j] for i in range(g.n) for j in range(i + 1, g.n))
    add = sum((d[i] + d[j]) * omega[i, j] for i in range(g.n) for j in range(i + 1, g.n))
    assert multiplicative_degree_kirchhoff(g, omega) == pytest.approx(mul)
    assert additive_degree_kirchhoff(g, omega) == pytest.approx(add)


def test_foster_and_sum_rule_karate():
    """Test Foster's theorem and the sum rule on a real network."""
    g = karate_graph()
    omega = resistance_matrix(g)
    assert foster_residual(g, omega) < 1e-9
    for i, j in [(0, 33), (5, 16), (12, 2)]:
        assert sum_rule_residual(g, i, j, omega) < 1e-9
    with pytest.raises(NetCoherenceUsageError):
        sum_rule_residual(g, 4, 4, omega)


def test_resistance_matrix_csv():
    """Test the CSV rendering."""
    omega = ResistanceMatrix(np.array([[0.0, 0.5], [0.5, 0.0]]))
    assert omega.to_csv() == "0,0.5\n0.5,0\n"
    assert omega.kirchhoff() == pytest.approx(0.5)


@settings(max_examples=25, deadline=None)
@given(n=st.integers(min_value=2, max_value=30), seed=st.integers(0, 2**32 - 1))
def test_tree_resistance_is_hop_distance(n, seed):
    """Test resistance equals hop distance on trees, so R is the Wiener index."""
    g = random_tree(n, seed)
    oracle = to_networkx(g)
    assert kirchhoff_index(g) == pytest.approx(nx.wiener_index(oracle))
    assert foster_residual(g) < 1e-8


@settings(max_examples=25, deadline=None)
@given(
    n=st.integers(min_value=3, max_value=30),
    extra=st.integers(min_value=0, max_value=40),
    seed=st.integers(0, 2**32 - 1),
)
def test_foster_on_random_graphs(n, extra, seed):
    """Test Foster's theorem and the sum rule hold on random connected graphs."""
    g = random_connected_graph(n, extra, seed)
    omega = resistance_matrix(g)
    assert foster_residual(g, omega) < 1e-8
    assert sum_rule_residual(g, 0, g.n - 1, omega) < 1e-8


@pytest.mark.parametrize(
    "build",
    [
        lambda: ba_network(400, 3, seed=1),
        lambda: hdran(3, 400, seed=2),
        lambda: pseudofractal(4),
        lambda: clique4_motif(2),
        lambda: ring_lattice(100, 6),
        lambda: torus(2, 12),
    ],
)
def test_foster_on_generated_families(build):
    """Test Foster's theorem and the sum rule on every generated family."""
    g = build()
    omega = resistance_matrix(g)
    assert foster_residual(g, omega) <= 1e-8
    rng = np.random.default_rng(0)
    for _ in range(10):
        i, j = rng.choice(g.n, size=2, replace=False)
        assert sum_rule_residual(g, int(i), int(j), omega) <= 1e-8


@settings(max_examples=25, deadline=None)
@given(
    n=st.integers(min_value=3, max_value=16),
    extra=st.integers(min_value=1, max_value=30),
    seed=st.integers(0, 2**32 - 1),
)
def test_resistance_is_a_metric_below_hop_distance(n, extra, seed):
    """Test the triangle inequality on all triples and Omega_ij <= hop distance."""
    g = random_connected_graph(n, extra, seed)
    omega = resistance_matrix(g).entries
    assert np.all(omega[:, None, :] <= omega[:, :, None] + omega[None, :, :] + 1e-9)
    assert np.all(omega <= distance_matrix(g) + 1e-9)


def test_resistance_below_hop_distance_strict_on_cycle():
    """Test parallel paths make resistance strictly smaller than hop distance."""
    g = cycle(8)
    omega = resistance_matrix(g).entries
    hops = distance_matrix(g)
    assert omega[0, 4] == pytest.approx(2.0)
    assert hops[0, 4] == 4
    off = ~np.eye(g.n, dtype=bool)
    assert np.all(omega[off] < hops[off])
