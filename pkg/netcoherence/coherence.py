"""First order network coherence, its bounds and the per-graph report."""
from __future__ import annotations

from dataclasses import astuple, dataclass, fields
import json
import logging
import math
from typing import NamedTuple, Optional

from .const import FLOAT_DIGITS
from .exceptions import NetCoherenceDegenerateGraphError, NetCoherenceUsageError
from .graph import Graph, average_degree, average_path_length
from .spectral import METHOD_AUTO, pseudoinverse_trace

_LOGGER = logging.getLogger(__name__)


class LowerBound(NamedTuple):
    exact: float
    asymptotic: float


def _format(value) -> str:
    if isinstance(value, int):
        return str(value)
    return f"{value:.{FLOAT_DIGITS}g}"


@dataclass(frozen=True)
class CoherenceReport:
    """One row of the basic statistics / coherence table.

    Field order is the serialization order.
    """

    n: int
    m: int
    rho: float
    mu: float
    h_fo: float
    lower_asymptotic: float
    lower_exact: float
    upper: float
    upper_mu_over_4: float
    optimality_ratio: float

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def to_json(self, **extra) -> str:
        data = {
            key: value if isinstance(value, int) else float(_format(value))
            for key, value in self.to_dict().items()
        }
        data.update(extra)
        return json.dumps(data, indent=2)

    @classmethod
    def csv_header(cls) -> str:
        return ",".join(f.name for f in fields(cls))

    def to_csv_row(self) -> str:
        return ",".join(_format(value) for value in astuple(self))


def first_order_coherence(g: Graph, method: str = METHOD_AUTO) -> float:
    """H_FO = tr(L^+) / (2N)."""
    if g.n < 2:
        raise NetCoherenceDegenerateGraphError("coherence needs N >= 2")
    return pseudoinverse_trace(g, method) / (2.0 * g.n)


def h2_norm(g: Graph, method: str = METHOD_AUTO) -> float:
    """H2 norm of the consensus system on the disagreement subspace."""
    return math.sqrt(g.n * first_order_coherence(g, method))


def coherence_lower_bound(n: int, m: int) -> LowerBound:
    """Spectral Cauchy-Schwarz bound, tight exactly on complete graphs."""
    if n < 2 or m < n - 1:
        raise NetCoherenceUsageError(f"no connected graph has N={n}, M={m}")
    if m > n * (n - 1) // 2:
        raise NetCoherenceUsageError(f"a simple graph on {n} vertices has at most {n * (n - 1) // 2} edges")
    exact = n / (4.0 * m) - 1.0 / (2.0 * m) + 1.0 / (4.0 * m * n)
    return LowerBound(exact=exact, asymptotic=n / (4.0 * m))


def coherence_upper_bound(g: Graph, mu: Optional[float] = None) -> float:
    """(N - 1) mu / (4N), tight exactly on trees."""
    if mu is None:
        mu = average_path_length(g)
    return (g.n - 1) * mu / (4.0 * g.n)


def analyze(g: Graph, method: str = METHOD_AUTO) -> CoherenceReport:
    """Assemble the full report for a connected graph."""
    h_fo = first_order_coherence(g, method)
    mu = average_path_length(g)
    lower = coherence_lower_bound(g.n, g.m)
    report = CoherenceReport(
        n=g.n,
        m=g.m,
        rho=average_degree(g),
        mu=mu,
        h_fo=h_fo,
        lower_asymptotic=lower.asymptotic,
        lower_exact=lower.exact,
        upper=coherence_upper_bound(g, mu),
        upper_mu_over_4=mu / 4.0,
        optimality_ratio=h_fo / lower.asymptotic,
    )
    _LOGGER.info("Analyzed N=%s M=%s: H_FO=%.6f", g.n, g.m, h_fo)
    return report
