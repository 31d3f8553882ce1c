"""Simple undirected graphs, edge list ingestion and distance statistics."""
from __future__ import annotations

import logging
import sys
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import (
    connected_components as _cs_components,
    laplacian as _cs_laplacian,
    shortest_path,
)

from .const import BFS_CHUNK, COMMENT_PREFIXES, LABEL_LIMIT
from .exceptions import (
    NetCoherenceBoundsError,
    NetCoherenceConnectivityError,
    NetCoherenceDegenerateGraphError,
    NetCoherenceEmptyGraphError,
    NetCoherenceParseError,
    NetCoherenceUsageError,
)

_LOGGER = logging.getLogger(__name__)


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


class Graph:
    """Immutable simple undirected graph on vertices 0..n-1.

    The edge set is stored once as a lexicographically sorted (m, 2) array
    with i < j in every row; adjacency, degrees and the sparse adjacency
    matrix are derived from it at construction. ``labels`` keeps the
    original vertex label of every vertex (identity for generated graphs).
    """

    __slots__ = ("_n", "_edges", "_labels", "_csr", "_degrees", "_adjacency")

    def __init__(self, n: int, edges, labels: Optional[Sequence[int]] = None):
        """Build from a vertex count and an edge array, checking invariants."""
        n = int(n)
        if n < 1:
            raise NetCoherenceEmptyGraphError("graph needs at least one vertex")

        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if edges.size and (edges.min() < 0 or edges.max() >= n):
            bad = int(edges.max()) if edges.max() >= n else int(edges.min())
            raise NetCoherenceBoundsError(bad, n)
        if np.any(edges[:, 0] == edges[:, 1]):
            raise NetCoherenceUsageError("self-loops are not allowed")

        edges = np.sort(edges, axis=1)
        edges = edges[np.lexsort((edges[:, 1], edges[:, 0]))]
        if len(edges) > 1 and np.any(np.all(edges[1:] == edges[:-1], axis=1)):
            raise NetCoherenceUsageError("duplicate edges are not allowed")

        if labels is None:
            labels = np.arange(n, dtype=np.int64)
        labels = np.array(labels, dtype=np.int64)
        if labels.shape != (n,):
            raise NetCoherenceUsageError(f"expected {n} labels, got {labels.shape[0]}")

        rows = np.concatenate([edges[:, 0], edges[:, 1]])
        cols = np.concatenate([edges[:, 1], edges[:, 0]])
        csr = sp.csr_matrix(
            (np.ones(rows.shape[0], dtype=np.float64), (rows, cols)), shape=(n, n)
        )
        csr.sort_indices()

        self._n = n
        self._edges = _frozen(edges)
        self._labels = _frozen(labels)
        self._csr = csr
        self._degrees = _frozen(np.diff(csr.indptr).astype(np.int64))
        self._adjacency = None

    @classmethod
    def from_edges(cls, n, edges, labels=None) -> "Graph":
        """Construct a graph, the generators' entry point."""
        return cls(n, edges, labels)

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return int(self._edges.shape[0])

    @property
    def edges(self) -> np.ndarray:
        return self._edges

    @property
    def labels(self) -> np.ndarray:
        return self._labels

    @property
    def degrees(self) -> np.ndarray:
        return self._degrees

    @property
    def adjacency(self) -> Tuple[np.ndarray, ...]:
        """Per-vertex sorted neighbor arrays."""
        if self._adjacency is None:
            indptr, indices = self._csr.indptr, self._csr.indices
            self._adjacency = tuple(
                _frozen(indices[indptr[i]:indptr[i + 1]].copy()) for i in range(self._n)
            )
        return self._adjacency

    def neighbors(self, vertex: int) -> np.ndarray:
        check_vertex(self, vertex)
        return self._csr.indices[self._csr.indptr[vertex]:self._csr.indptr[vertex + 1]]

    def adjacency_matrix(self) -> sp.csr_matrix:
        """Return a copy of the symmetric 0/1 adjacency matrix."""
        return self._csr.copy()

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and np.array_equal(self._edges, other._edges)

    def __hash__(self):
        return hash((self._n, self._edges.tobytes()))

    def __repr__(self):
        return f"Graph(n={self._n}, m={self.m})"


def check_vertex(g: Graph, vertex: int) -> int:
    """Return the vertex as int or raise a bounds error."""
    if not 0 <= int(vertex) < g.n:
        raise NetCoherenceBoundsError(vertex, g.n)
    return int(vertex)


def _lines(text: Union[str, Iterable[str]]) -> Iterable[str]:
    if isinstance(text, str):
        return text.splitlines()
    return text


def from_edge_list(text: Union[str, Iterable[str]]) -> Graph:
    """Parse the whitespace separated edge list format.

    Lines starting with '%' or '#' are comments, blank lines are skipped and
    columns after the first two (weights, timestamps) are ignored. Self-loops
    are dropped, repeated edges collapse to one and labels are renumbered
    0..N-1 in order of first appearance in a usable edge.
    """
    ids: Dict[int, int] = {}
    edges = set()
    dropped_loops = 0
    for number, line in enumerate(_lines(text), start=1):
        line = line.strip()
        if not line or line.startswith(COMMENT_PREFIXES):
            continue
        tokens = line.split()
        if len(tokens) < 2:
            raise NetCoherenceParseError(number, f"expected two vertex ids, got {line!r}")
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError as ex:
            raise NetCoherenceParseError(number, f"malformed vertex id in {line!r}") from ex
        if u < 0 or v < 0:
            raise NetCoherenceParseError(number, f"negative vertex id in {line!r}")
        if u >= LABEL_LIMIT or v >= LABEL_LIMIT:
            raise NetCoherenceParseError(number, f"vertex id above 2**63 - 1 in {line!r}")
        if u == v:
            dropped_loops += 1
            continue
        a = ids.setdefault(u, len(ids))
        b = ids.setdefault(v, len(ids))
        edges.add((a, b) if a < b else (b, a))

    if not edges:
        raise NetCoherenceEmptyGraphError()
    if dropped_loops:
        _LOGGER.debug("Dropped %s self-loops", dropped_loops)

    labels = np.fromiter(ids.keys(), dtype=np.int64, count=len(ids))
    graph = Graph(len(ids), sorted(edges), labels)
    _LOGGER.info("Parsed edge list: %s vertices, %s edges", graph.n, graph.m)
    return graph


def header_comments(text: Union[str, Iterable[str]]) -> Tuple[str, ...]:
    """Return the comment lines of an edge list without their prefix."""
    return tuple(
        line.strip()[1:].strip()
        for line in _lines(text)
        if line.strip().startswith(COMMENT_PREFIXES)
    )


def read_edge_list(path: str) -> Tuple[Graph, Tuple[str, ...]]:
    """Read a graph and its header comments from a path, '-' is stdin."""
    if path == "-":
        data = sys.stdin.buffer.read()
    else:
        with open(path, "rb") as fptr:
            data = fptr.read()
    lines = decode_lines(data)
    return from_edge_list(lines), header_comments(lines)


def decode_lines(data: bytes) -> List[str]:
    """Split raw bytes into UTF-8 lines, reporting the first undecodable one."""
    lines = []
    for number, raw in enumerate(data.splitlines(), start=1):
        try:
            lines.append(raw.decode("utf-8"))
        except UnicodeDecodeError as ex:
            raise NetCoherenceParseError(
                number, f"invalid UTF-8 at byte {ex.start}"
            ) from ex
    return lines


def to_edge_list(g: Graph, header: Iterable[str] = ()) -> str:
    """Render the graph in the edge list format, header lines as comments."""
    out = [f"# {line}" for line in header]
    out.extend(f"{i} {j}" for i, j in g.edges.tolist())
    return "\n".join(out) + "\n"


def connected_components(g: Graph) -> Tuple[int, np.ndarray]:
    """Return the component count and the component label of every vertex."""
    count, labels = _cs_components(g.adjacency_matrix(), directed=False)
    return int(count), labels


def is_connected(g: Graph) -> bool:
    return connected_components(g)[0] == 1


def is_tree(g: Graph) -> bool:
    return g.m == g.n - 1 and is_connected(g)


def require_connected(g: Graph) -> None:
    count, _ = connected_components(g)
    if count != 1:
        raise NetCoherenceConnectivityError(
            f"graph has {count} connected components", components=count
        )


def induced_subgraph(g: Graph, vertices) -> Graph:
    """Induced subgraph on the given vertex ids, renumbered in id order."""
    keep = np.unique(np.asarray(vertices, dtype=np.int64))
    mapping = np.full(g.n, -1, dtype=np.int64)
    mapping[keep] = np.arange(keep.shape[0])
    ends = mapping[g.edges]
    ends = ends[np.all(ends >= 0, axis=1)]
    return Graph(keep.shape[0], ends, g.labels[keep])


def largest_connected_component(g: Graph) -> Graph:
    """Induced subgraph on the largest component.

    Ties go to the component holding the smallest original label.
    """
    count, labels = connected_components(g)
    if count == 1:
        return g
    sizes = np.bincount(labels)
    smallest = np.full(count, np.iinfo(np.int64).max, dtype=np.int64)
    np.minimum.at(smallest, labels, g.labels)
    candidates = np.flatnonzero(sizes == sizes.max())
    best = candidates[np.argmin(smallest[candidates])]
    lcc = induced_subgraph(g, np.flatnonzero(labels == best))
    _LOGGER.warning(
        "Kept largest of %s components: %s of %s vertices", count, lcc.n, g.n
    )
    return lcc


def laplacian(g: Graph) -> sp.csr_matrix:
    """Sparse combinatorial Laplacian L = D - A."""
    return sp.csr_matrix(_cs_laplacian(g.adjacency_matrix()))


def average_degree(g: Graph) -> float:
    return 2.0 * g.m / g.n


def _distance_rows(g: Graph, start: int, stop: int) -> np.ndarray:
    return shortest_path(
        g.adjacency_matrix(),
        method="D",
        directed=False,
        unweighted=True,
        indices=np.arange(start, stop),
    )


def distance_matrix(g: Graph) -> np.ndarray:
    """Dense all pairs hop distances, inf between components."""
    return _distance_rows(g, 0, g.n)


def average_path_length(g: Graph) -> float:
    """Mean shortest path length over all unordered vertex pairs."""
    if g.n < 2:
        raise NetCoherenceDegenerateGraphError("average path length needs N >= 2")
    total = 0.0
    for start in range(0, g.n, BFS_CHUNK):
        rows = _distance_rows(g, start, min(start + BFS_CHUNK, g.n))
        if np.isinf(rows).any():
            raise NetCoherenceConnectivityError("graph is not connected")
        total += float(rows.sum())
    return total / (g.n * (g.n - 1))


def degree_distribution(g: Graph) -> Dict[int, int]:
    """Histogram degree -> number of vertices."""
    values, counts = np.unique(g.degrees, return_counts=True)
    return {int(d): int(c) for d, c in zip(values, counts)}


def clustering_coefficient(g: Graph) -> float:
    """Average local clustering, vertices of degree < 2 count as zero."""
    adj = g.adjacency_matrix()
    triangles = np.asarray((adj @ adj).multiply(adj).sum(axis=1)).ravel() / 2.0
    degrees = g.degrees.astype(np.float64)
    pairs = degrees * (degrees - 1.0) / 2.0
    local = np.divide(triangles, pairs, out=np.zeros_like(triangles), where=pairs > 0)
    return float(local.mean())
