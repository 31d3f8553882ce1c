"""Monte Carlo estimate of the first order coherence from the noisy consensus SDE.

The dynamics dx = -L x dt + dW are integrated from x(0) = 0 with unit noise
intensity, and the estimator averages (1/N) |x - mean(x) 1|^2 over post
burn-in steps and replicas.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace
import json
import logging
import math
from typing import List, NamedTuple, Optional, Sequence

import numpy as np

from .const import (
    DENSE_LIMIT,
    FLOAT_DIGITS,
    RNG_ALGORITHM,
    SCHEME_EULER,
    SCHEME_EXACT,
    SCHEMES,
    SIM_BLOWUP_FACTOR,
    SIM_BURN_IN_MIXING_TIMES,
    SIM_DEFAULT_REPLICAS,
    SIM_DEFAULT_SAMPLES,
    SIM_DT_FACTOR,
    SIM_EXACT_DT_FACTOR,
    SIM_WITHIN_REPLICA_BATCHES,
)
from .exceptions import (
    NetCoherenceConnectivityError,
    NetCoherenceDegenerateGraphError,
    NetCoherenceStabilityError,
    NetCoherenceUsageError,
)
from .graph import Graph, laplacian
from .spectral import LaplacianSpectrum, extreme_eigenvalues, spectrum

_LOGGER = logging.getLogger(__name__)

NOISE_BLOCK = 4096


@dataclass(frozen=True)
class SimConfig:
    """Simulation settings; ``None`` fields are filled by ``resolve``."""

    dt: Optional[float] = None
    burn_in_steps: Optional[int] = None
    sample_steps: int = SIM_DEFAULT_SAMPLES
    replicas: int = SIM_DEFAULT_REPLICAS
    seed: int = 0
    scheme: str = SCHEME_EXACT

    def validate(self) -> None:
        if self.scheme not in SCHEMES:
            raise NetCoherenceUsageError(f"unknown scheme {self.scheme!r}, expected one of {SCHEMES}")
        if self.replicas < 1:
            raise NetCoherenceUsageError("replicas must be >= 1")
        if self.sample_steps < 1:
            raise NetCoherenceUsageError("sample_steps must be >= 1")
        if self.dt is not None and not self.dt > 0:
            raise NetCoherenceUsageError("dt must be positive")
        if self.burn_in_steps is not None and self.burn_in_steps < 0:
            raise NetCoherenceUsageError("burn_in_steps must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise NetCoherenceUsageError("seed must be an unsigned 64-bit integer")

    def resolve(self, lambda_1: float, lambda_max: float) -> "SimConfig":
        """Fill dt and burn-in from the spectrum and check Euler stability."""
        self.validate()
        dt = self.dt
        if dt is None:
            if self.scheme == SCHEME_EULER:
                dt = SIM_DT_FACTOR / lambda_max
            else:
                dt = SIM_EXACT_DT_FACTOR / lambda_1
        if self.scheme == SCHEME_EULER and dt >= 2.0 / lambda_max:
            raise NetCoherenceUsageError(
                f"euler_maruyama is unstable for dt={dt:g} >= 2/lambda_max={2.0 / lambda_max:g}"
            )
        burn_in = self.burn_in_steps
        if burn_in is None:
            burn_in = math.ceil(SIM_BURN_IN_MIXING_TIMES / (lambda_1 * dt))
        return replace(self, dt=float(dt), burn_in_steps=int(burn_in))

    def to_dict(self) -> dict:
        return asdict(self)


class ConsensusIntegrator:
    """Steps the state of one replica.

    ``euler_maruyama``: x <- x - dt L x + sqrt(dt) xi.
    ``exact_gaussian``: each Laplacian mode is an Ornstein-Uhlenbeck process
    sampled from its exact transition; the zero mode is a random walk.
    """

    def __init__(
        self,
        g: Graph,
        dt: float,
        scheme: str,
        rng: np.random.Generator,
        decomposition: Optional[LaplacianSpectrum] = None,
        blowup: float = math.inf,
    ):
        self.__n = g.n
        self.__dt = dt
        self.__scheme = scheme
        self.__rng = rng
        self.__blowup = blowup
        self.__state = np.zeros(g.n)

        if scheme == SCHEME_EXACT:
            if decomposition is None or decomposition.eigenvectors is None:
                raise NetCoherenceUsageError("exact_gaussian needs the eigenvectors")
            values = decomposition.eigenvalues
            zero = np.abs(values) <= decomposition.zero_tolerance
            safe = np.where(zero, 1.0, values)
            self.__vectors = decomposition.eigenvectors
            self.__decay = np.where(zero, 1.0, np.exp(-safe * dt))
            self.__spread = np.where(
                zero, math.sqrt(dt), np.sqrt(-np.expm1(-2.0 * safe * dt) / (2.0 * safe))
            )
        else:
            self.__laplacian = laplacian(g)
        _LOGGER.debug("Integrator %s N=%s dt=%.4g", scheme, g.n, dt)

    @property
    def state(self) -> np.ndarray:
        return self.__state.copy()

    def shift(self, constant: float) -> None:
        """Add a constant to every coordinate."""
        self.__state = self.__state + constant

    def deviation(self) -> float:
        centered = self.__state - self.__state.mean()
        return float(centered @ centered) / self.__n

    def step(self) -> float:
        """Take one step and return the new deviation."""
        return float(self.advance(1)[0])

    def advance(self, steps: int) -> np.ndarray:
        """Take ``steps`` steps and return the deviation after each one."""
        out = np.empty(steps)
        done = 0
        while done < steps:
            block = min(NOISE_BLOCK, steps - done)
            noise = self.__rng.standard_normal((block, self.__n))
            for row in noise:
                if self.__scheme == SCHEME_EXACT:
                    modes = self.__vectors.T @ self.__state
                    self.__state = self.__vectors @ (self.__decay * modes + self.__spread * row)
                else:
                    self.__state = (
                        self.__state
                        - self.__dt * (self.__laplacian @ self.__state)
                        + math.sqrt(self.__dt) * row
                    )
                value = self.deviation()
                if not value <= self.__blowup:
                    raise NetCoherenceStabilityError(
                        f"state deviation {value:.3e} exceeds {self.__blowup:.3e}; "
                        f"try a smaller dt than {self.__dt:g}"
                    )
                out[done] = value
                done += 1
        return out


class Prepared(NamedTuple):
    config: SimConfig
    decomposition: Optional[LaplacianSpectrum]
    reference: Optional[float]
    blowup: float


class ReplicaResult(NamedTuple):
    index: int
    mean: float
    batch_means: np.ndarray


@dataclass(frozen=True)
class SimEstimate:
    """Monte Carlo coherence with its standard error and the run echo."""

    h_fo_hat: float
    std_error: float
    config: SimConfig
    n: int
    m: int
    reference: Optional[float] = None
    replica_means: Sequence[float] = ()
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        def fmt(value):
            if value is None or not math.isfinite(value):
                return None
            return float(f"{value:.{FLOAT_DIGITS}g}")

        return {
            "h_fo_hat": fmt(self.h_fo_hat),
            "std_error": fmt(self.std_error),
            "reference": fmt(self.reference),
            "n": self.n,
            "m": self.m,
            "replica_means": [fmt(value) for value in self.replica_means],
            "config": self.config.to_dict(),
            "rng": RNG_ALGORITHM,
            "metadata": self.metadata,
        }

    def to_json(self, **extra) -> str:
        data = self.to_dict()
        data.update(extra)
        return json.dumps(data, indent=2)


def prepare(g: Graph, cfg: SimConfig) -> Prepared:
    """Resolve the config and compute what every replica shares."""
    cfg.validate()
    if g.n < 2:
        raise NetCoherenceDegenerateGraphError("simulation needs N >= 2")
    decomposition = reference = None
    if g.n <= DENSE_LIMIT:
        decomposition = spectrum(g, vectors=cfg.scheme == SCHEME_EXACT)
        if not decomposition.is_connected:
            raise NetCoherenceConnectivityError(
                "graph is not connected", components=decomposition.zero_count
            )
        lambda_1, lambda_max = decomposition.algebraic_connectivity, decomposition.largest
        reference = float(np.sum(1.0 / decomposition.eigenvalues[1:])) / (2.0 * g.n)
    elif cfg.scheme == SCHEME_EXACT:
        raise NetCoherenceUsageError(
            f"exact_gaussian needs a full eigendecomposition, N={g.n} > {DENSE_LIMIT}"
        )
    else:
        lambda_1, lambda_max = extreme_eigenvalues(g)
        if lambda_1 <= 0:
            raise NetCoherenceConnectivityError("graph is not connected")
    resolved = cfg.resolve(lambda_1, lambda_max)
    # Stationary per-vertex deviation never exceeds 1 / (2 lambda_1).
    blowup = SIM_BLOWUP_FACTOR / (2.0 * lambda_1)
    _LOGGER.info(
        "Simulating N=%s scheme=%s dt=%.4g burn-in=%s samples=%s replicas=%s",
        g.n, resolved.scheme, resolved.dt, resolved.burn_in_steps,
        resolved.sample_steps, resolved.replicas,
    )
    return Prepared(resolved, decomposition, reference, blowup)


def replica_generator(seed: int, replicas: int, index: int) -> np.random.Generator:
    """Independent stream of one replica."""
    child = np.random.SeedSequence(seed).spawn(replicas)[index]
    return np.random.Generator(np.random.PCG64(child))


def run_replica(g: Graph, prepared: Prepared, index: int) -> ReplicaResult:
    cfg = prepared.config
    integrator = ConsensusIntegrator(
        g,
        cfg.dt,
        cfg.scheme,
        replica_generator(cfg.seed, cfg.replicas, index),
        prepared.decomposition,
        prepared.blowup,
    )
    if cfg.burn_in_steps:
        integrator.advance(cfg.burn_in_steps)
    samples = integrator.advance(cfg.sample_steps)
    batches = min(SIM_WITHIN_REPLICA_BATCHES, samples.shape[0])
    batch_means = np.array([chunk.mean() for chunk in np.array_split(samples, batches)])
    return ReplicaResult(index, float(samples.mean()), batch_means)


def combine_replicas(
    g: Graph,
    prepared: Prepared,
    results: List[ReplicaResult],
    metadata: Optional[dict] = None,
) -> SimEstimate:
    """Reduce replica results in replica order.

    The standard error comes from the replica means, or from within-replica
    batch means when there is a single replica.
    """
    results = sorted(results, key=lambda result: result.index)
    means = np.array([result.mean for result in results])
    if len(results) > 1:
        batch = means
    else:
        batch = results[0].batch_means
    std_error = float(batch.std(ddof=1) / math.sqrt(batch.shape[0])) if batch.shape[0] > 1 else math.nan
    return SimEstimate(
        h_fo_hat=float(means.mean()),
        std_error=std_error,
        config=prepared.config,
        n=g.n,
        m=g.m,
        reference=prepared.reference,
        replica_means=tuple(float(value) for value in means),
        metadata=dict(metadata or {}),
    )


def simulate_coherence(g: Graph, cfg: SimConfig, metadata: Optional[dict] = None) -> SimEstimate:
    """Run every replica in sequence and reduce."""
    prepared = prepare(g, cfg)
    results = [run_replica(g, prepared, index) for index in range(prepared.config.replicas)]
    return combine_replicas(g, prepared, results, metadata)
