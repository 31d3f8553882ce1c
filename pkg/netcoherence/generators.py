"""Random scale-free models, edge iterated deterministic families and reference graphs."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
import logging
from typing import Callable, Dict, List, Mapping, Optional, Tuple

import numpy as np

from .const import (
    BA_SEED_SIZE,
    CAPACITY_LIMIT,
    FAMILIES,
    FAMILY_BA,
    FAMILY_CLIQUE4,
    FAMILY_COMPLETE,
    FAMILY_CYCLE,
    FAMILY_HDRAN,
    FAMILY_PATH,
    FAMILY_PSEUDOFRACTAL,
    FAMILY_RING_LATTICE,
    FAMILY_STAR,
    FAMILY_TORUS,
    HDRAN_MIN_DIMENSION,
    RANDOM_FAMILIES,
    RNG_ALGORITHM,
)
from .exceptions import NetCoherenceCapacityError, NetCoherenceUsageError
from .graph import Graph

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class GrowthStep:
    """Construction map of one edge iteration.

    New vertices are old_n, old_n + 1, ...; ``parents[t]`` holds the end
    points of the edge that spawned new vertex old_n + t, and ``twins[t]``
    the id of the other new vertex spawned by the same edge (4-clique
    family only).
    """

    old_n: int
    parents: np.ndarray
    twins: Optional[np.ndarray] = None

    @property
    def new_n(self) -> int:
        return self.old_n + int(self.parents.shape[0])


def _check_seed(seed) -> int:
    if seed is None or not 0 <= int(seed) < 2**64:
        raise NetCoherenceUsageError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return int(seed)


def _complete_edges(n: int) -> List[Tuple[int, int]]:
    return list(combinations(range(n), 2))


def ba_network(n: int, m: int, seed: int, seed_size: int = BA_SEED_SIZE) -> Graph:
    """Barabasi-Albert growth from the complete graph on seed_size vertices.

    Every new vertex picks m distinct targets by repeated degree proportional
    draws, discarding repeats.
    """
    if seed_size < 2:
        raise NetCoherenceUsageError("BA seed graph needs at least 2 vertices")
    if not 1 <= m <= seed_size:
        raise NetCoherenceUsageError(f"BA needs 1 <= m <= {seed_size}, got m={m}")
    if n < seed_size:
        raise NetCoherenceUsageError(f"BA needs n >= {seed_size}, got n={n}")
    rng = np.random.default_rng(_check_seed(seed))

    edges = _complete_edges(seed_size)
    # Every vertex appears once per incident edge, so a uniform pick is degree proportional.
    ends = np.empty(2 * (len(edges) + m * (n - seed_size)), dtype=np.int64)
    ends[: 2 * len(edges)] = np.asarray(edges).ravel()
    filled = 2 * len(edges)

    for vertex in range(seed_size, n):
        chosen: List[int] = []
        while len(chosen) < m:
            target = int(ends[rng.integers(filled)])
            if target not in chosen:
                chosen.append(target)
        for target in chosen:
            edges.append((target, vertex))
            ends[filled] = target
            ends[filled + 1] = vertex
            filled += 2

    _LOGGER.debug("BA n=%s m=%s seed=%s: %s edges", n, m, seed, len(edges))
    return Graph.from_edges(n, edges)


def hdran(d: int, n: int, seed: int) -> Graph:
    """High dimensional random Apollonian network grown from K_{d+2}.

    Each step picks an active (d+1)-clique uniformly, joins a new vertex to
    all its members, retires it and activates the d+1 cliques just formed.
    """
    if d < HDRAN_MIN_DIMENSION:
        raise NetCoherenceUsageError(f"HDRAN needs d >= {HDRAN_MIN_DIMENSION}, got d={d}")
    if n < d + 2:
        raise NetCoherenceUsageError(f"HDRAN needs n >= d + 2 = {d + 2}, got n={n}")
    rng = np.random.default_rng(_check_seed(seed))

    edges = _complete_edges(d + 2)
    active = list(combinations(range(d + 2), d + 1))
    for vertex in range(d + 2, n):
        assert active, "active clique set exhausted"
        pick = int(rng.integers(len(active)))
        clique = active[pick]
        active[pick] = active[-1]
        active.pop()
        edges.extend((member, vertex) for member in clique)
        active.extend(
            tuple(x for x in clique if x != member) + (vertex,) for member in clique
        )

    _LOGGER.debug("HDRAN d=%s n=%s seed=%s: %s active cliques left", d, n, seed, len(active))
    return Graph.from_edges(n, edges)


def pseudofractal_order(g: int) -> Tuple[int, int]:
    """(N_g, M_g) of the pseudofractal web."""
    return (3 ** (g + 1) + 3) // 2, 3 ** (g + 1)


def clique4_order(g: int) -> Tuple[int, int]:
    """(N_g, M_g) of the 4-clique motif network."""
    return 2 * (6 ** (g + 1) + 4) // 5, 6 ** (g + 1)


def _check_iterations(g: int, order: Callable[[int], Tuple[int, int]], family: str) -> None:
    if g < 0:
        raise NetCoherenceUsageError(f"{family} needs g >= 0, got g={g}")
    n, _ = order(g)
    if n > CAPACITY_LIMIT:
        raise NetCoherenceCapacityError(
            f"{family} g={g} has {n} vertices, above the {CAPACITY_LIMIT} capacity"
        )


def _pseudofractal_step(graph: Graph) -> Tuple[Graph, GrowthStep]:
    parents = graph.edges
    new = graph.n + np.arange(parents.shape[0])
    edges = np.concatenate(
        [
            parents,
            np.column_stack([parents[:, 0], new]),
            np.column_stack([parents[:, 1], new]),
        ]
    )
    return Graph.from_edges(graph.n + new.shape[0], edges), GrowthStep(graph.n, parents)


def _clique4_step(graph: Graph) -> Tuple[Graph, GrowthStep]:
    parents = graph.edges
    first = graph.n + 2 * np.arange(parents.shape[0])
    second = first + 1
    k, l = parents[:, 0], parents[:, 1]
    edges = np.concatenate(
        [
            parents,
            np.column_stack([first, second]),
            np.column_stack([k, first]),
            np.column_stack([l, first]),
            np.column_stack([k, second]),
            np.column_stack([l, second]),
        ]
    )
    step = GrowthStep(
        graph.n,
        np.repeat(parents, 2, axis=0),
        np.column_stack([second, first]).ravel(),
    )
    return Graph.from_edges(graph.n + 2 * parents.shape[0], edges), step


def _grow(initial: Graph, step, g: int) -> Tuple[Graph, Optional[GrowthStep]]:
    graph, last = initial, None
    for _ in range(g):
        graph, last = step(graph)
    return graph, last


def pseudofractal_growth(g: int) -> Tuple[Graph, Optional[GrowthStep]]:
    """F_g together with the construction map of its last iteration."""
    _check_iterations(g, pseudofractal_order, FAMILY_PSEUDOFRACTAL)
    return _grow(complete(3), _pseudofractal_step, g)


def pseudofractal(g: int) -> Graph:
    """Pseudofractal scale-free web F_g.

    Starting from a triangle, every edge of F_{g-1} gets a new vertex joined
    to both its end points. New vertices are numbered in the sorted order of
    their parent edges.
    """
    return pseudofractal_growth(g)[0]


def clique4_growth(g: int) -> Tuple[Graph, Optional[GrowthStep]]:
    """T_g together with the construction map of its last iteration."""
    _check_iterations(g, clique4_order, FAMILY_CLIQUE4)
    return _grow(complete(4), _clique4_step, g)


def clique4_motif(g: int) -> Graph:
    """4-clique motif scale-free network T_g.

    Starting from K_4, every edge of T_{g-1} spawns two adjacent new vertices,
    both joined to its end points, so each old edge closes a 4-clique.
    """
    return clique4_growth(g)[0]


def path(n: int) -> Graph:
    if n < 1:
        raise NetCoherenceUsageError(f"path needs n >= 1, got n={n}")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise NetCoherenceUsageError(f"cycle needs n >= 3, got n={n}")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star(n: int) -> Graph:
    """Hub 0 joined to n - 1 leaves."""
    if n < 2:
        raise NetCoherenceUsageError(f"star needs n >= 2, got n={n}")
    return Graph.from_edges(n, [(0, i) for i in range(1, n)])


def complete(n: int) -> Graph:
    if n < 1:
        raise NetCoherenceUsageError(f"complete graph needs n >= 1, got n={n}")
    return Graph.from_edges(n, _complete_edges(n))


def ring_lattice(n: int, k: int) -> Graph:
    """Cycle where each vertex links its k/2 nearest neighbors on each side."""
    if k < 2 or k % 2 or k >= n:
        raise NetCoherenceUsageError(f"ring lattice needs even 2 <= k < n, got n={n}, k={k}")
    return Graph.from_edges(
        n, [(i, (i + s) % n) for i in range(n) for s in range(1, k // 2 + 1)]
    )


def torus(d: int, side: int) -> Graph:
    """d-dimensional periodic grid with side**d vertices."""
    if d < 1 or side < 3:
        raise NetCoherenceUsageError(f"torus needs d >= 1 and side >= 3, got d={d}, side={side}")
    n = side**d
    if n > CAPACITY_LIMIT:
        raise NetCoherenceCapacityError(f"torus with {n} vertices is above the capacity")
    shape = (side,) * d
    coords = np.array(np.unravel_index(np.arange(n), shape))
    edges = []
    for axis in range(d):
        shifted = coords.copy()
        shifted[axis] = (shifted[axis] + 1) % side
        edges.append(np.column_stack([np.arange(n), np.ravel_multi_index(shifted, shape)]))
    return Graph.from_edges(n, np.concatenate(edges))


REFERENCE_BUILDERS: Dict[str, Callable[..., Graph]] = {
    FAMILY_PATH: path,
    FAMILY_CYCLE: cycle,
    FAMILY_STAR: star,
    FAMILY_COMPLETE: complete,
    FAMILY_RING_LATTICE: ring_lattice,
    FAMILY_TORUS: torus,
}


def reference_family(kind: str, **params) -> Graph:
    """Reference graphs of the scaling table, by kind name."""
    if kind not in REFERENCE_BUILDERS:
        raise NetCoherenceUsageError(f"unknown reference family {kind!r}")
    try:
        return REFERENCE_BUILDERS[kind](**params)
    except TypeError as ex:
        raise NetCoherenceUsageError(f"bad parameters for {kind}: {params}") from ex


# Required, then optional parameters per family.
FAMILY_PARAMS: Dict[str, Tuple[Tuple[str, ...], Tuple[str, ...]]] = {
    FAMILY_BA: (("n", "m"), ("seed_size",)),
    FAMILY_HDRAN: (("d", "n"), ()),
    FAMILY_PSEUDOFRACTAL: (("g",), ()),
    FAMILY_CLIQUE4: (("g",), ()),
    FAMILY_PATH: (("n",), ()),
    FAMILY_CYCLE: (("n",), ()),
    FAMILY_STAR: (("n",), ()),
    FAMILY_COMPLETE: (("n",), ()),
    FAMILY_RING_LATTICE: (("n", "k"), ()),
    FAMILY_TORUS: (("d", "side"), ()),
}


@dataclass(frozen=True)
class GenSpec:
    """Family tag, its parameters and the seed for random families."""

    family: str
    params: Mapping[str, int] = field(default_factory=dict)
    seed: Optional[int] = None

    def validate(self) -> None:
        if self.family not in FAMILIES:
            raise NetCoherenceUsageError(
                f"unknown family {self.family!r}, expected one of {', '.join(FAMILIES)}"
            )
        required, optional = FAMILY_PARAMS[self.family]
        missing = [name for name in required if self.params.get(name) is None]
        if missing:
            raise NetCoherenceUsageError(f"{self.family} needs {', '.join(missing)}")
        unknown = set(self.params) - set(required) - set(optional)
        if unknown:
            raise NetCoherenceUsageError(
                f"{self.family} does not take {', '.join(sorted(unknown))}"
            )
        if self.family in RANDOM_FAMILIES:
            _check_seed(self.seed)

    def build(self) -> Graph:
        self.validate()
        p = {key: int(value) for key, value in self.params.items() if value is not None}
        if self.family == FAMILY_BA:
            return ba_network(seed=self.seed, **p)
        if self.family == FAMILY_HDRAN:
            return hdran(seed=self.seed, **p)
        if self.family == FAMILY_PSEUDOFRACTAL:
            return pseudofractal(p["g"])
        if self.family == FAMILY_CLIQUE4:
            return clique4_motif(p["g"])
        return reference_family(self.family, **p)

    def to_dict(self) -> dict:
        data = {"family": self.family, "params": dict(self.params)}
        if self.family in RANDOM_FAMILIES:
            data["seed"] = self.seed
            data["rng"] = RNG_ALGORITHM
        if self.family == FAMILY_BA:
            data["seed_graph"] = f"K_{self.params.get('seed_size') or BA_SEED_SIZE}"
        return data

    def header(self) -> List[str]:
        """Comment lines written at the top of generated edge lists."""
        lines = [f"family: {self.family}"]
        lines.append(
            "params: " + " ".join(f"{key}={value}" for key, value in sorted(self.params.items()))
        )
        for key in ("seed", "rng", "seed_graph"):
            value = self.to_dict().get(key)
            if value is not None:
                lines.append(f"{key}: {value}")
        return lines
