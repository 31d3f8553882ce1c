"""Test Configuration for various tests."""
import os

import networkx as nx
import numpy as np

from netcoherence import Graph, from_edge_list

KARATE_N = 34
KARATE_M = 78


def load_fixture(filename):
    """Load an edge list fixture for testing."""
    try:
        path = os.path.join(os.path.dirname(__file__), "fixtures", filename)
        with open(path, encoding="utf-8") as fptr:
            return fptr.read()
    except Exception:
        return None


def fixture_path(filename):
    """Absolute path of a fixture, for the command line tests."""
    return os.path.join(os.path.dirname(__file__), "fixtures", filename)


def karate_graph():
    """Zachary karate club with the networkx vertex ids."""
    return Graph(KARATE_N, list(nx.karate_club_graph().edges()))


def to_networkx(g):
    """Oracle copy of a graph."""
    graph = nx.Graph()
    graph.add_nodes_from(range(g.n))
    graph.add_edges_from(g.edges.tolist())
    return graph


def random_tree(n, seed):
    """Uniform attachment tree: vertex i hangs below a random earlier vertex."""
    rng = np.random.default_rng(seed)
    return Graph(n, [(int(rng.integers(i)), i) for i in range(1, n)])


def random_connected_graph(n, extra, seed):
    """Random tree plus up to ``extra`` random chords."""
    rng = np.random.default_rng(seed)
    edges = {(int(rng.integers(i)), i) for i in range(1, n)}
    for _ in range(extra):
        i, j = sorted(int(x) for x in rng.choice(n, size=2, replace=False))
        edges.add((i, j))
    return from_edge_list("\n".join(f"{i} {j}" for i, j in sorted(edges)))
