"""Async orchestration of simulation replicas and coherence sweeps."""
import asyncio
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import logging
from typing import List, Optional, Sequence

import numpy as np

from .coherence import first_order_coherence
from .const import (
    FAMILY_BA,
    FAMILY_CLIQUE4,
    FAMILY_HDRAN,
    FAMILY_PSEUDOFRACTAL,
    FAMILY_RING_LATTICE,
    FAMILY_TORUS,
    FLOAT_DIGITS,
    REFERENCE_FAMILIES,
)
from .exceptions import NetCoherenceUsageError
from .generators import GenSpec
from .graph import Graph
from .simulation import SimConfig, SimEstimate, combine_replicas, prepare, run_replica

_LOGGER = logging.getLogger(__name__)

SWEEP_COLUMNS = ("family", "param", "n", "m", "replica", "seed", "h_fo")


@dataclass(frozen=True)
class SweepRow:
    family: str
    param: Optional[int]
    n: int
    m: int
    replica: int
    seed: Optional[int]
    h_fo: float

    def to_csv_row(self) -> str:
        values = [
            self.family,
            "" if self.param is None else str(self.param),
            str(self.n),
            str(self.m),
            str(self.replica),
            "" if self.seed is None else str(self.seed),
            f"{self.h_fo:.{FLOAT_DIGITS}g}",
        ]
        return ",".join(values)


def derive_seed(seed: int, *keys: int) -> int:
    """64-bit seed of one work item, independent of scheduling."""
    state = np.random.SeedSequence([int(seed), *(int(key) for key in keys)])
    return int(state.generate_state(1, np.uint64)[0])


def sweep_spec(family: str, param: Optional[int], size: int, seed: Optional[int]) -> GenSpec:
    """Grid point to generator spec; ``size`` is N, or g for iterated families."""
    if family == FAMILY_BA:
        return GenSpec(family, {"n": size, "m": param}, seed)
    if family == FAMILY_HDRAN:
        return GenSpec(family, {"d": param, "n": size}, seed)
    if family in (FAMILY_PSEUDOFRACTAL, FAMILY_CLIQUE4):
        return GenSpec(family, {"g": size})
    if family == FAMILY_RING_LATTICE:
        return GenSpec(family, {"n": size, "k": param})
    if family == FAMILY_TORUS:
        return GenSpec(family, {"d": param, "side": size})
    if family in REFERENCE_FAMILIES:
        return GenSpec(family, {"n": size})
    raise NetCoherenceUsageError(f"cannot sweep family {family!r}")


def _sweep_point(family, param, size, replica, seed) -> SweepRow:
    spec = sweep_spec(family, param, size, seed)
    graph = spec.build()
    h_fo = first_order_coherence(graph)
    _LOGGER.debug("Sweep %s param=%s size=%s replica=%s: %.6f", family, param, size, replica, h_fo)
    return SweepRow(family, param, graph.n, graph.m, replica, spec.seed, h_fo)


class ExperimentRunner:
    """Runs independent work items concurrently, returns them in submission order."""

    def __init__(self, max_workers: Optional[int] = None):
        """Initialize the worker pool."""
        self.__executor = ThreadPoolExecutor(max_workers=max_workers)

    async def __aenter__(self):
        return self

    async def __aexit__(self, *exc_info):
        self.close()

    def close(self):
        """Shut the worker pool down."""
        self.__executor.shutdown(wait=True)

    async def __run(self, func, *args):
        loop = asyncio.get_running_loop()
        return await loop.run_in_executor(self.__executor, func, *args)

    async def simulate(self, g: Graph, cfg: SimConfig, metadata: Optional[dict] = None) -> SimEstimate:
        """Simulate all replicas concurrently and reduce them in replica order."""
        prepared = prepare(g, cfg)
        results = await asyncio.gather(
            *(self.__run(run_replica, g, prepared, index) for index in range(prepared.config.replicas))
        )
        return combine_replicas(g, prepared, list(results), metadata)

    async def sweep(
        self,
        family: str,
        params: Sequence[Optional[int]],
        sizes: Sequence[int],
        replicas: int,
        seed: int,
    ) -> List[SweepRow]:
        """One row per (param, size, replica), in grid order."""
        if not params or not sizes:
            raise NetCoherenceUsageError("sweep grids must not be empty")
        if replicas < 1:
            raise NetCoherenceUsageError("replicas must be >= 1")

        jobs = []
        for p_index, param in enumerate(params):
            for size in sizes:
                for replica in range(replicas):
                    item_seed = derive_seed(seed, p_index, size, replica)
                    jobs.append(self.__run(_sweep_point, family, param, size, replica, item_seed))

        rows = await asyncio.gather(*jobs)
        _LOGGER.info("Sweep %s finished: %s rows", family, len(rows))
        return list(rows)
