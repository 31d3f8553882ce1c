"""Laplacian spectra, the pseudoinverse, resistance distances and Kirchhoff indices."""
from __future__ import annotations

from dataclasses import dataclass, field
import logging
from typing import Optional, Tuple

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh, spsolve, splu

from .const import (
    DEFLATED_BLOCK,
    DENSE_LIMIT,
    EIGEN_RESIDUAL_RTOL,
    FLOAT_DIGITS,
    ROUTE_RTOL,
)
from .exceptions import (
    NetCoherenceConnectivityError,
    NetCoherenceNumericalError,
    NetCoherenceUsageError,
)
from .graph import Graph, check_vertex, laplacian, require_connected

_LOGGER = logging.getLogger(__name__)

METHOD_AUTO = "auto"
METHOD_DENSE = "dense"
METHOD_DEFLATED = "deflated"
METHODS = (METHOD_AUTO, METHOD_DENSE, METHOD_DEFLATED)


@dataclass(frozen=True)
class LaplacianSpectrum:
    """Ascending Laplacian eigenvalues with the tolerance that classifies zeros."""

    eigenvalues: np.ndarray
    zero_tolerance: float
    eigenvectors: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    @property
    def zero_count(self) -> int:
        return int(np.count_nonzero(np.abs(self.eigenvalues) <= self.zero_tolerance))

    @property
    def is_connected(self) -> bool:
        return self.zero_count == 1

    @property
    def algebraic_connectivity(self) -> float:
        """lambda_1, zero when the graph is disconnected."""
        if len(self.eigenvalues) < 2:
            return 0.0
        return float(self.eigenvalues[1])

    @property
    def largest(self) -> float:
        return float(self.eigenvalues[-1])


@dataclass(frozen=True)
class ResistanceMatrix:
    """Symmetric matrix of pairwise effective resistances, zero diagonal."""

    entries: np.ndarray

    @property
    def n(self) -> int:
        return int(self.entries.shape[0])

    def __getitem__(self, pair) -> float:
        i, j = pair
        return float(self.entries[i, j])

    def kirchhoff(self) -> float:
        """Sum over unordered pairs."""
        return float(self.entries.sum() / 2.0)

    def to_csv(self) -> str:
        """Row-major CSV, FLOAT_DIGITS significant digits."""
        return "".join(
            ",".join(f"{value:.{FLOAT_DIGITS}g}" for value in row) + "\n"
            for row in self.entries.tolist()
        )


def zero_tolerance(n: int, lambda_max: float) -> float:
    return max(n, 10) * np.finfo(np.float64).eps * max(lambda_max, 0.0)


def spectrum(g: Graph, vectors: bool = False) -> LaplacianSpectrum:
    """Full symmetric eigendecomposition of the Laplacian.

    The trace identity sum(lambda) = 2M is the residual that decides whether
    the solver result is accepted.
    """
    lap = laplacian(g).toarray()
    try:
        if vectors:
            values, vecs = scipy.linalg.eigh(lap)
        else:
            values, vecs = scipy.linalg.eigvalsh(lap), None
    except (np.linalg.LinAlgError, ValueError) as ex:
        _LOGGER.error("Eigensolver failed on N=%s: %s", g.n, ex)
        raise NetCoherenceNumericalError("eigensolver did not converge") from ex

    residual = abs(float(values.sum()) - 2.0 * g.m)
    if residual > EIGEN_RESIDUAL_RTOL * max(g.m, 1):
        raise NetCoherenceNumericalError("eigenvalue sum differs from 2M", residual)

    tolerance = zero_tolerance(g.n, float(values[-1]))
    _LOGGER.debug("Spectrum N=%s tol=%.3e trace residual=%.3e", g.n, tolerance, residual)
    return LaplacianSpectrum(values, tolerance, vecs)


def extreme_eigenvalues(g: Graph) -> Tuple[float, float]:
    """Return (lambda_1, lambda_max); sparse Lanczos above the dense limit."""
    if g.n <= DENSE_LIMIT:
        spec = spectrum(g)
        return spec.algebraic_connectivity, spec.largest
    lap = sp.csc_matrix(laplacian(g))
    try:
        largest = eigsh(lap, k=1, which="LA", return_eigenvectors=False)
        # Shift-invert just below zero: lap - sigma*I is positive definite.
        smallest = eigsh(lap, k=2, sigma=-1e-2, which="LM", return_eigenvectors=False)
    except Exception as ex:
        _LOGGER.error("Lanczos failed on N=%s: %s", g.n, ex)
        raise NetCoherenceNumericalError("sparse eigensolver did not converge") from ex
    return float(np.sort(smallest)[1]), float(largest[0])


def _check_method(method: str, n: int) -> str:
    if method not in METHODS:
        raise NetCoherenceUsageError(f"unknown method {method!r}, expected one of {METHODS}")
    if method == METHOD_AUTO:
        return METHOD_DENSE if n <= DENSE_LIMIT else METHOD_DEFLATED
    return method


def pseudoinverse(g: Graph) -> np.ndarray:
    """Dense L^+ as (L + J/N)^-1 - J/N."""
    require_connected(g)
    ones = np.full((g.n, g.n), 1.0 / g.n)
    try:
        inverse = scipy.linalg.inv(laplacian(g).toarray() + ones)
    except (np.linalg.LinAlgError, ValueError) as ex:
        _LOGGER.error("Inverse of L + J/N failed on N=%s: %s", g.n, ex)
        raise NetCoherenceNumericalError("L + J/N is singular") from ex
    pinv = inverse - ones
    return (pinv + pinv.T) / 2.0


def _deflated_trace(g: Graph) -> float:
    """tr(L^+) = tr(X) - 1'X1/N, X the grounded inverse padded with zeros."""
    require_connected(g)
    if g.n == 1:
        return 0.0
    ground = int(np.argmax(g.degrees))
    keep = np.delete(np.arange(g.n), ground)
    grounded = sp.csc_matrix(laplacian(g)[keep][:, keep])
    factor = splu(grounded)

    size = g.n - 1
    diagonal = 0.0
    for start in range(0, size, DEFLATED_BLOCK):
        stop = min(start + DEFLATED_BLOCK, size)
        rhs = np.zeros((size, stop - start))
        rhs[np.arange(start, stop), np.arange(stop - start)] = 1.0
        block = factor.solve(rhs)
        diagonal += float(block[np.arange(start, stop), np.arange(stop - start)].sum())
    total = float(factor.solve(np.ones(size)).sum())
    _LOGGER.debug("Deflated trace N=%s grounded at %s", g.n, ground)
    return diagonal - total / g.n


def pseudoinverse_trace(g: Graph, method: str = METHOD_AUTO) -> float:
    """tr(L^+) = sum of 1/lambda_i over the nonzero spectrum.

    The dense route also evaluates tr((L + J/N)^-1 - J/N) and refuses to
    answer when the two disagree; the eigenvalue sum is returned.
    """
    method = _check_method(method, g.n)
    if method == METHOD_DEFLATED:
        return _deflated_trace(g)

    spec = spectrum(g)
    if spec.zero_count != 1:
        raise NetCoherenceConnectivityError(
            f"Laplacian has {spec.zero_count} zero eigenvalues", components=spec.zero_count
        )
    by_spectrum = float(np.sum(1.0 / spec.eigenvalues[1:]))
    by_inverse = float(np.trace(pseudoinverse(g)))
    gap = abs(by_spectrum - by_inverse) / max(abs(by_spectrum), np.finfo(float).tiny)
    if gap > ROUTE_RTOL:
        raise NetCoherenceNumericalError("trace routes disagree", gap)
    if gap > ROUTE_RTOL / 100:
        _LOGGER.warning("Trace routes differ by %.3e on N=%s", gap, g.n)
    return by_spectrum


def resistance(g: Graph, i: int, j: int) -> float:
    """Effective resistance between i and j, grounding j."""
    i, j = check_vertex(g, i), check_vertex(g, j)
    if i == j:
        return 0.0
    require_connected(g)
    keep = np.delete(np.arange(g.n), j)
    grounded = sp.csc_matrix(laplacian(g)[keep][:, keep])
    row = i if i < j else i - 1
    rhs = np.zeros(g.n - 1)
    rhs[row] = 1.0
    potentials = np.atleast_1d(spsolve(grounded, rhs))
    return float(potentials[row])


def resistance_matrix(g: Graph) -> ResistanceMatrix:
    """All pairs effective resistances from one pseudoinverse."""
    pinv = pseudoinverse(g)
    diag = np.diag(pinv)
    omega = diag[:, None] + diag[None, :] - 2.0 * pinv
    omega = np.maximum((omega + omega.T) / 2.0, 0.0)
    np.fill_diagonal(omega, 0.0)
    return ResistanceMatrix(omega)


def _omega(g: Graph, omega: Optional[ResistanceMatrix]) -> np.ndarray:
    if omega is None:
        return resistance_matrix(g).entries
    return omega.entries


def kirchhoff_index(g: Graph, method: str = METHOD_AUTO) -> float:
    """R(G), the sum of resistances over unordered pairs."""
    method = _check_method(method, g.n)
    if method == METHOD_DEFLATED:
        return g.n * _deflated_trace(g)
    return resistance_matrix(g).kirchhoff()


def multiplicative_degree_kirchhoff(g: Graph, omega: Optional[ResistanceMatrix] = None) -> float:
    """Sum over pairs of d_i d_j Omega_ij."""
    degrees = g.degrees.astype(np.float64)
    return float(degrees @ _omega(g, omega) @ degrees / 2.0)


def additive_degree_kirchhoff(g: Graph, omega: Optional[ResistanceMatrix] = None) -> float:
    """Sum over pairs of (d_i + d_j) Omega_ij."""
    degrees = g.degrees.astype(np.float64)
    return float(degrees @ _omega(g, omega).sum(axis=1))


def foster_residual(g: Graph, omega: Optional[ResistanceMatrix] = None) -> float:
    """|sum of Omega over edges - (N - 1)|."""
    entries = _omega(g, omega)
    on_edges = entries[g.edges[:, 0], g.edges[:, 1]].sum()
    return float(abs(on_edges - (g.n - 1)))


def sum_rule_residual(
    g: Graph, i: int, j: int, omega: Optional[ResistanceMatrix] = None
) -> float:
    """|d_i Omega_ij + sum over neighbors k of i of (Omega_ik - Omega_jk) - 2|."""
    i, j = check_vertex(g, i), check_vertex(g, j)
    if i == j:
        raise NetCoherenceUsageError("sum rule needs two different vertices")
    entries = _omega(g, omega)
    nbrs = g.neighbors(i)
    total = g.degrees[i] * entries[i, j] + np.sum(entries[i, nbrs] - entries[j, nbrs])
    return float(abs(total - 2.0))
