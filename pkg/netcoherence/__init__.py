"""First order coherence of noisy consensus on undirected graphs."""
from netcoherence.__version__ import __version__
from netcoherence.closed_forms import (
    ExactValue,
    KirchhoffTriple,
    clique4_coherence,
    clique4_kirchhoff_indices,
    clique4_kirchhoff_recursion_step,
    pseudofractal_coherence,
    pseudofractal_kirchhoff,
    resistance_recursion_step,
)
from netcoherence.coherence import (
    CoherenceReport,
    analyze,
    coherence_lower_bound,
    coherence_upper_bound,
    first_order_coherence,
)
from netcoherence.exceptions import (
    NetCoherenceBoundsError,
    NetCoherenceCapacityError,
    NetCoherenceConnectivityError,
    NetCoherenceDegenerateGraphError,
    NetCoherenceDimensionError,
    NetCoherenceEmptyGraphError,
    NetCoherenceError,
    NetCoherenceNumericalError,
    NetCoherenceParseError,
    NetCoherenceStabilityError,
    NetCoherenceUsageError,
)
from netcoherence.generators import (
    GenSpec,
    ba_network,
    clique4_motif,
    hdran,
    pseudofractal,
    reference_family,
)
from netcoherence.graph import Graph, from_edge_list, largest_connected_component
from netcoherence.runner import ExperimentRunner
from netcoherence.simulation import SimConfig, SimEstimate, simulate_coherence
from netcoherence.spectral import (
    LaplacianSpectrum,
    ResistanceMatrix,
    kirchhoff_index,
    resistance_matrix,
    spectrum,
)

__all__ = [
    "__version__",
    "CoherenceReport",
    "ExactValue",
    "ExperimentRunner",
    "GenSpec",
    "Graph",
    "KirchhoffTriple",
    "LaplacianSpectrum",
    "ResistanceMatrix",
    "SimConfig",
    "SimEstimate",
    "analyze",
    "ba_network",
    "clique4_coherence",
    "clique4_kirchhoff_indices",
    "clique4_kirchhoff_recursion_step",
    "clique4_motif",
    "coherence_lower_bound",
    "coherence_upper_bound",
    "first_order_coherence",
    "from_edge_list",
    "hdran",
    "kirchhoff_index",
    "largest_connected_component",
    "pseudofractal",
    "pseudofractal_coherence",
    "pseudofractal_kirchhoff",
    "reference_family",
    "resistance_matrix",
    "resistance_recursion_step",
    "simulate_coherence",
    "spectrum",
    "NetCoherenceBoundsError",
    "NetCoherenceCapacityError",
    "NetCoherenceConnectivityError",
    "NetCoherenceDegenerateGraphError",
    "NetCoherenceDimensionError",
    "NetCoherenceEmptyGraphError",
    "NetCoherenceError",
    "NetCoherenceNumericalError",
    "NetCoherenceParseError",
    "NetCoherenceStabilityError",
    "NetCoherenceUsageError",
]
