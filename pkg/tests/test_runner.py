"""Test the async experiment runner."""
import pytest

from netcoherence import (
    ExperimentRunner,
    NetCoherenceUsageError,
    SimConfig,
    first_order_coherence,
    simulate_coherence,
)
from netcoherence.generators import ba_network, complete, path
from netcoherence.runner import SWEEP_COLUMNS, derive_seed, sweep_spec


async def test_runner_simulate_matches_sequential():
    """Test concurrent replicas reduce to the sequential estimate."""
    g = complete(6)
    cfg = SimConfig(sample_steps=400, replicas=4, seed=12)
    async with ExperimentRunner(max_workers=3) as runner:
        estimate = await runner.simulate(g, cfg, {"input": "k6"})
    sequential = simulate_coherence(g, cfg)
    assert estimate.h_fo_hat == sequential.h_fo_hat
    assert estimate.replica_means == sequential.replica_means
    assert estimate.metadata == {"input": "k6"}


async def test_sweep_rows_in_grid_order():
    """Test one row per (param, size, replica), in submission order."""
    async with ExperimentRunner(max_workers=4) as runner:
        rows = await runner.sweep("ba", [1, 2], [20, 30], 2, seed=5)
    assert len(rows) == 8
    assert [(row.param, row.n, row.replica) for row in rows] == [
        (1, 20, 0), (1, 20, 1), (1, 30, 0), (1, 30, 1),
        (2, 20, 0), (2, 20, 1), (2, 30, 0), (2, 30, 1),
    ]
    first = rows[0]
    assert first.seed == derive_seed(5, 0, 20, 0)
    assert first.m == 28 + 1 * 12
    assert first.h_fo == pytest.approx(
        first_order_coherence(ba_network(20, 1, seed=first.seed))
    )


async def test_sweep_independent_of_workers():
    """Test the worker count does not change the rows."""
    async with ExperimentRunner(max_workers=1) as runner:
        serial = await runner.sweep("hdran", [2, 3], [15], 2, seed=3)
    async with ExperimentRunner(max_workers=6) as runner:
        parallel = await runner.sweep("hdran", [2, 3], [15], 2, seed=3)
    assert serial == parallel


async def test_sweep_deterministic_family():
    """Test iterated families sweep over g without a parameter or seed."""
    async with ExperimentRunner() as runner:
        rows = await runner.sweep("path", [None], [4, 9], 1, seed=0)
    assert [row.n for row in rows] == [4, 9]
    assert rows[1].h_fo == pytest.approx(first_order_coherence(path(9)))
    assert rows[0].to_csv_row().startswith("path,,4,3,0,")


async def test_sweep_errors():
    """Test empty grids and bad replica counts."""
    async with ExperimentRunner() as runner:
        with pytest.raises(NetCoherenceUsageError):
            await runner.sweep("ba", [], [20], 1, seed=0)
        with pytest.raises(NetCoherenceUsageError):
            await runner.sweep("ba", [2], [20], 0, seed=0)


def test_sweep_spec():
    """Test grid points map to generator specs."""
    assert sweep_spec("ba", 3, 100, 7).params == {"n": 100, "m": 3}
    assert sweep_spec("hdran", 2, 50, 7).params == {"d": 2, "n": 50}
    assert sweep_spec("clique4", None, 3, None).params == {"g": 3}
    assert sweep_spec("torus", 2, 5, None).params == {"d": 2, "side": 5}
    assert sweep_spec("ring_lattice", 4, 20, None).params == {"n": 20, "k": 4}


def test_derive_seed():
    """Test derived seeds are stable and distinct per key."""
    assert derive_seed(1, 0, 20, 0) == derive_seed(1, 0, 20, 0)
    assert derive_seed(1, 0, 20, 0) != derive_seed(1, 0, 20, 1)
    assert 0 <= derive_seed(1, 2, 3) < 2**64
    assert SWEEP_COLUMNS[-1] == "h_fo"
