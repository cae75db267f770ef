"""Complex Hermitian matrix toolkit.

Construction and validation of Hermitian matrices, spectral decomposition with
eigenvalue clustering, support projections, standard operator functions, and
traces restricted to a support subspace.  Everything operates on plain
``numpy`` arrays; the wrapper dataclasses carry cached decompositions and are
treated as immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .config import DEFAULT_TOLS, Tolerances
from .errors import (
    DimensionMismatchError,
    DomainError,
    ValidationError,
)

__all__ = [
    "hermitian_part",
    "validate_hermitian",
    "SpectralCluster",
    "SpectralDecomposition",
    "decompose",
    "apply_function",
    "DensityState",
    "density_state",
    "RankOneProjection",
    "transition_probability",
    "trace_on_support",
]


def hermitian_part(matrix: np.ndarray) -> np.ndarray:
    """Return (M + M*)/2."""
    return (matrix + matrix.conj().T) / 2


def validate_hermitian(matrix: np.ndarray, tol_herm: float = DEFAULT_TOLS.tol_herm) -> np.ndarray:
    """Check Hermiticity within ``tol_herm`` and return the symmetrized matrix.

    Inputs within tolerance are symmetrized (tolerates file-format rounding);
    anything further from Hermitian is rejected rather than silently accepted.
    """
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {matrix.shape}")
    if matrix.shape[0] < 1:
        raise ValidationError("matrix dimension must be at least 1")
    deviation = float(np.max(np.abs(matrix - matrix.conj().T)))
    if deviation > tol_herm:
        raise ValidationError(
            f"matrix is not Hermitian: max |M - M*| = {deviation:.3e} > {tol_herm:.1e}"
        )
    return hermitian_part(matrix)


@dataclass(frozen=True)
class SpectralCluster:
    """One eigenvalue cluster: value, spectral projection, multiplicity."""

    eigenvalue: float
    projection: np.ndarray
    multiplicity: int


@dataclass(frozen=True)
class SpectralDecomposition:
    """Clustered spectral decomposition M = sum_a a * P_a.

    Clusters are ordered by strictly decreasing eigenvalue; projections are
    mutually orthogonal and sum to the identity.  ``support`` is the
    orthogonal projection onto the span of the nonzero-eigenvalue clusters.
    """

    dim: int
    clusters: tuple[SpectralCluster, ...]
    support: np.ndarray

    @property
    def eigenvalues(self) -> np.ndarray:
        """Cluster eigenvalues, strictly decreasing."""
        return np.array([c.eigenvalue for c in self.clusters])

    @property
    def rank(self) -> int:
        return sum(c.multiplicity for c in self.clusters if c.eigenvalue != 0.0)

    def reconstruct(self) -> np.ndarray:
        """Reassemble sum_a a * P_a."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for c in self.clusters:
            out += c.eigenvalue * c.projection
        return out


def _cluster_eigensystem(
    eigenvalues: np.ndarray, eigenvectors: np.ndarray, cluster_tol: float
) -> list[tuple[float, np.ndarray, int]]:
    """Greedily group descending eigenvalues whose consecutive gaps < cluster_tol."""
    order = np.argsort(eigenvalues)[::-1]
    w = eigenvalues[order]
    v = eigenvectors[:, order]
    groups: list[list[int]] = [[0]]
    for k in range(1, len(w)):
        if w[k - 1] - w[k] < cluster_tol:
            groups[-1].append(k)
        else:
            groups.append([k])
    out = []
    for idx in groups:
        cols = v[:, idx]
        projection = cols @ cols.conj().T
        value = float(np.mean(w[idx]))
        out.append((value, hermitian_part(projection), len(idx)))
    return out


def decompose(
    matrix: np.ndarray,
    cluster_tol: float | None = None,
    *,
    tols: Tolerances = DEFAULT_TOLS,
    psd_floor: bool = False,
) -> SpectralDecomposition:
    """Spectral decomposition with eigenvalue clustering.

    Degenerate spectra must yield genuine spectral projections rather than an
    arbitrary split into rank-one pieces, so eigenvalues closer than
    ``cluster_tol`` are merged.  Cluster values with magnitude below
    ``tols.eps_supp`` are snapped to exactly 0 so the support projection is an
    unambiguous object.  With ``psd_floor=True`` (used for validated states)
    any eigenvalue below ``eps_supp`` -- including tolerated small negatives --
    is zeroed before clustering.
    """
    if cluster_tol is None:
        cluster_tol = tols.cluster_tol
    matrix = validate_hermitian(matrix, tols.tol_herm)
    dim = matrix.shape[0]
    w, v = np.linalg.eigh(matrix)
    if psd_floor:
        w = np.where(w < tols.eps_supp, 0.0, w)
    clusters = []
    for value, projection, mult in _cluster_eigensystem(w, v, cluster_tol):
        if abs(value) < tols.eps_supp:
            value = 0.0
        clusters.append(SpectralCluster(value, projection, mult))
    support = np.zeros((dim, dim), dtype=complex)
    for c in clusters:
        if c.eigenvalue != 0.0:
            support += c.projection
    return SpectralDecomposition(dim=dim, clusters=tuple(clusters), support=support)


def apply_function(
    matrix: "np.ndarray | SpectralDecomposition | DensityState",
    fn: Callable[[float], float],
    *,
    tols: Tolerances = DEFAULT_TOLS,
) -> np.ndarray:
    """Standard operator function: f(M) = sum_a f(a) * P_a.

    ``fn`` must be defined on the (clustered) spectrum of ``matrix``; an
    evaluation error or non-finite value raises ``DomainError``.
    """
    spec = _as_decomposition(matrix, tols)
    out = np.zeros((spec.dim, spec.dim), dtype=complex)
    for c in spec.clusters:
        try:
            value = fn(c.eigenvalue)
        except (ValueError, ZeroDivisionError, OverflowError) as exc:
            raise DomainError(f"cannot evaluate function at eigenvalue {c.eigenvalue!r}: {exc}") from exc
        if not math.isfinite(value):
            raise DomainError(f"function value at eigenvalue {c.eigenvalue!r} is {value!r}")
        out += value * c.projection
    return out


def _as_decomposition(
    matrix: "np.ndarray | SpectralDecomposition | DensityState", tols: Tolerances
) -> SpectralDecomposition:
    if isinstance(matrix, SpectralDecomposition):
        return matrix
    if isinstance(matrix, DensityState):
        return matrix.spectral
    return decompose(matrix, tols=tols)


@dataclass(frozen=True)
class DensityState:
    """A density operator: Hermitian, positive semidefinite, unit trace.

    The clustered spectral decomposition is computed once at construction and
    cached; eigenvalues below ``eps_supp`` are treated as exactly 0 for all
    support decisions.
    """

    matrix: np.ndarray
    spectral: SpectralDecomposition = field(repr=False)

    @classmethod
    def from_matrix(cls, matrix: np.ndarray, tols: Tolerances = DEFAULT_TOLS) -> "DensityState":
        matrix = validate_hermitian(matrix, tols.tol_herm)
        trace = float(np.trace(matrix).real)
        if abs(trace - 1.0) > tols.tol_trace:
            raise ValidationError(f"state trace is {trace!r}, expected 1 within {tols.tol_trace:.1e}")
        eigenvalues = np.linalg.eigvalsh(matrix)
        if float(eigenvalues.min()) < -tols.tol_psd:
            raise ValidationError(
                f"state has negative eigenvalue {float(eigenvalues.min()):.3e} beyond {tols.tol_psd:.1e}"
            )
        spectral = decompose(matrix, tols=tols, psd_floor=True)
        return cls(matrix=matrix, spectral=spectral)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.spectral.eigenvalues

    @property
    def support(self) -> np.ndarray:
        return self.spectral.support

    @property
    def rank(self) -> int:
        return self.spectral.rank

    def as_rank_one(self, tol: float | None = None) -> "RankOneProjection":
        """Extract the rank-one projection if this state is pure."""
        tol = DEFAULT_TOLS.tol_num if tol is None else tol
        top = self.spectral.clusters[0]
        if abs(top.eigenvalue - 1.0) > tol or top.multiplicity != 1:
            raise ValidationError(
                f"state is not rank-one: leading eigenvalue {top.eigenvalue!r} "
                f"with multiplicity {top.multiplicity}"
            )
        column = int(np.argmax(np.abs(np.diagonal(top.projection))))
        vector = top.projection[:, column]
        return RankOneProjection.from_vector(vector)


def density_state(matrix: np.ndarray, tols: Tolerances = DEFAULT_TOLS) -> DensityState:
    """Shorthand for DensityState.from_matrix."""
    return DensityState.from_matrix(matrix, tols)


@dataclass(frozen=True)
class RankOneProjection:
    """A pure state |v><v| stored by its unit vector."""

    vector: np.ndarray

    @classmethod
    def from_vector(cls, vector: np.ndarray, tols: Tolerances = DEFAULT_TOLS) -> "RankOneProjection":
        vector = np.asarray(vector, dtype=complex).reshape(-1)
        norm = float(np.linalg.norm(vector))
        if norm < tols.tol_num:
            raise ValidationError("cannot build a rank-one projection from the zero vector")
        return cls(vector=vector / norm)

    @property
    def dim(self) -> int:
        return self.vector.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return np.outer(self.vector, self.vector.conj())

    def to_state(self, tols: Tolerances = DEFAULT_TOLS) -> DensityState:
        projection = self.matrix
        clusters = [SpectralCluster(1.0, projection, 1)]
        if self.dim > 1:
            complement = np.eye(self.dim, dtype=complex) - projection
            clusters.append(SpectralCluster(0.0, hermitian_part(complement), self.dim - 1))
        spectral = SpectralDecomposition(dim=self.dim, clusters=tuple(clusters), support=projection)
        return DensityState(matrix=projection, spectral=spectral)


def transition_probability(p: RankOneProjection, q: RankOneProjection) -> float:
    """tr PQ = |<p, q>|^2, clamped to [0, 1]."""
    if p.dim != q.dim:
        raise DimensionMismatchError(f"projection dimensions differ: {p.dim} vs {q.dim}")
    overlap = np.vdot(p.vector, q.vector)
    return min(max(float(abs(overlap) ** 2), 0.0), 1.0)


def _validate_projection(projection: np.ndarray, tols: Tolerances) -> np.ndarray:
    projection = validate_hermitian(projection, tols.tol_herm)
    deviation = float(np.max(np.abs(projection @ projection - projection)))
    if deviation > tols.tol_num:
        raise ValidationError(f"not an orthogonal projection: max |P^2 - P| = {deviation:.3e}")
    return projection


def trace_on_support(
    matrix: np.ndarray, support: np.ndarray, *, tols: Tolerances = DEFAULT_TOLS
) -> float:
    """Trace restricted to a subspace: tr(S M S) for an orthogonal projection S."""
    matrix = np.asarray(matrix, dtype=complex)
    support = _validate_projection(np.asarray(support, dtype=complex), tols)
    if matrix.shape != support.shape:
        raise DimensionMismatchError(
            f"matrix shape {matrix.shape} does not match support shape {support.shape}"
        )
    return float(np.trace(support @ matrix @ support).real)


def cluster_overlaps(a: SpectralDecomposition, b: SpectralDecomposition) -> np.ndarray:
    """Overlap table T[i, j] = tr(P_i Q_j) between two cluster families."""
    if a.dim != b.dim:
        raise DimensionMismatchError(f"decomposition dimensions differ: {a.dim} vs {b.dim}")
    ps = np.stack([c.projection for c in a.clusters])
    qs = np.stack([c.projection for c in b.clusters])
    return np.einsum("aij,bji->ab", ps, qs).real
