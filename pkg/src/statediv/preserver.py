"""Divergence-preserver engine.

Operationalizes the structure theory of divergence-preserving bijections on
the state space: transition probabilities recovered from divergence values
alone, rank-two spectra recovered from divergence extrema, pure states
detected through the max-divergence functional, and the implementing unitary
or antiunitary operator reconstructed from a finite probe set, then verified
against the map it came from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .bregman import (
    bregman,
    bregman_rank_one_pair,
    rank_two_offset,
    _check_lambda,
)
from .config import DEFAULT_TOLS, Tolerances
from .errors import (
    DegenerateProbeError,
    DimensionMismatchError,
    NotAPreserverError,
    OracleError,
    ParameterError,
    RangeError,
    ValidationError,
)
from .generators import GeneratorFunction, NormalizedGenerator, normalize
from .hermitian import (
    DensityState,
    RankOneProjection,
    SpectralCluster,
    SpectralDecomposition,
    hermitian_part,
    transition_probability,
)
from .jensen import jensen, jensen_max_constant, jensen_rank_one
from .sampling import random_pure, random_state, rng_for

__all__ = [
    "SymmetryOp",
    "PreserverOracle",
    "conjugation_oracle",
    "transpose_oracle",
    "depolarizing_oracle",
    "diagonal_oracle",
    "TransitionTable",
    "transition_from_bregman",
    "transition_from_jensen",
    "transition_from_bregman_rank_two",
    "recover_rank_two_spectrum",
    "SearchBudget",
    "max_divergence_functional",
    "pure_reference_value",
    "is_pure_by_max",
    "rank_two_mixture",
    "probe_labels",
    "wigner_probes",
    "wigner_reconstruct",
    "max_probe_residual",
    "probe_transitions_via_divergence",
    "PreserverVerification",
    "verify_preserver",
]

BISECT_TOL = 1e-10
WIGNER_TOL = 1e-6
RECONSTRUCT_TOL = 1e-8
PURE_MARGIN = 1e-3


# ---------------------------------------------------------------------------
# Symmetry operations and oracles


@dataclass(frozen=True)
class SymmetryOp:
    """A unitary matrix plus an antiunitary flag.

    Acts on a state A as U A U* when unitary and as U conj(A) U* when
    antiunitary (entrywise conjugation happens before the unitary).
    """

    matrix: np.ndarray
    antiunitary: bool = False

    @classmethod
    def from_matrix(
        cls, matrix: np.ndarray, antiunitary: bool = False, tols: Tolerances = DEFAULT_TOLS
    ) -> "SymmetryOp":
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValidationError(f"expected a square matrix, got shape {matrix.shape}")
        gram = matrix @ matrix.conj().T
        deviation = float(np.max(np.abs(gram - np.eye(matrix.shape[0]))))
        if deviation > tols.tol_num:
            raise ValidationError(f"matrix is not unitary: max |U U* - I| = {deviation:.3e}")
        return cls(matrix=matrix, antiunitary=antiunitary)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def apply_matrix(self, a: np.ndarray) -> np.ndarray:
        a = np.conj(a) if self.antiunitary else a
        return self.matrix @ a @ self.matrix.conj().T

    def apply_state(self, state: DensityState, tols: Tolerances = DEFAULT_TOLS) -> DensityState:
        return DensityState.from_matrix(self.apply_matrix(state.matrix), tols)

    def apply_vector(self, v: np.ndarray) -> np.ndarray:
        v = np.conj(v) if self.antiunitary else v
        return self.matrix @ v

    def apply_projection(self, p: RankOneProjection) -> RankOneProjection:
        return RankOneProjection.from_vector(self.apply_vector(p.vector))


@dataclass(frozen=True)
class PreserverOracle:
    """A queryable map on the state space (the object under test).

    ``mapping`` must return a valid DensityState of the same dimension for
    every state the engine queries; anything else raises ``OracleError``.
    """

    dim: int
    mapping: Callable[[DensityState], DensityState] = field(repr=False)
    label: str = "oracle"

    def __call__(self, state: DensityState) -> DensityState:
        if state.dim != self.dim:
            raise DimensionMismatchError(f"oracle expects dim {self.dim}, got {state.dim}")
        try:
            image = self.mapping(state)
        except ValidationError as exc:
            raise OracleError(f"oracle {self.label!r} returned an invalid state: {exc}") from exc
        if not isinstance(image, DensityState):
            raise OracleError(f"oracle {self.label!r} returned {type(image).__name__}, not a DensityState")
        if image.dim != self.dim:
            raise OracleError(f"oracle {self.label!r} changed the dimension: {image.dim} != {self.dim}")
        return image

    @classmethod
    def from_pairs(
        cls,
        pairs: Sequence[tuple[DensityState, DensityState]],
        *,
        match_tol: float = 1e-10,
        label: str = "table-oracle",
    ) -> "PreserverOracle":
        """In-memory table oracle; inputs are matched by max-entry distance."""
        if not pairs:
            raise ParameterError("table oracle needs at least one pair")
        dim = pairs[0][0].dim

        def lookup(state: DensityState) -> DensityState:
            for source, image in pairs:
                if float(np.max(np.abs(source.matrix - state.matrix))) < match_tol:
                    return image
            raise OracleError(f"oracle {label!r} has no entry for the queried state")

        return cls(dim=dim, mapping=lookup, label=label)


def conjugation_oracle(op: SymmetryOp, tols: Tolerances = DEFAULT_TOLS) -> PreserverOracle:
    """A -> U A U* (or U conj(A) U*): the maps the structure theorems produce."""
    kind = "antiunitary" if op.antiunitary else "unitary"
    return PreserverOracle(
        dim=op.dim, mapping=lambda s: op.apply_state(s, tols), label=f"{kind}-conjugation"
    )


def transpose_oracle(dim: int, tols: Tolerances = DEFAULT_TOLS) -> PreserverOracle:
    """A -> A^T; equals entrywise conjugation, an antiunitary conjugation with U = I."""
    return PreserverOracle(
        dim=dim,
        mapping=lambda s: DensityState.from_matrix(s.matrix.T, tols),
        label="transpose",
    )


def depolarizing_oracle(dim: int, alpha: float = 0.5, tols: Tolerances = DEFAULT_TOLS) -> PreserverOracle:
    """A -> (1 - alpha) A + alpha I/d; contracts divergences, not a preserver."""
    if not 0.0 <= alpha <= 1.0:
        raise ParameterError(f"depolarizing weight must lie in [0, 1], got {alpha!r}")
    mixed = np.eye(dim, dtype=complex) / dim

    def mapping(s: DensityState) -> DensityState:
        return DensityState.from_matrix((1.0 - alpha) * s.matrix + alpha * mixed, tols)

    return PreserverOracle(dim=dim, mapping=mapping, label=f"depolarize({alpha:g})")


def diagonal_oracle(dim: int, tols: Tolerances = DEFAULT_TOLS) -> PreserverOracle:
    """A -> diag(diag(A)); projection onto the diagonal, not a preserver."""
    return PreserverOracle(
        dim=dim,
        mapping=lambda s: DensityState.from_matrix(np.diag(np.diagonal(s.matrix)), tols),
        label="diagonal",
    )


# ---------------------------------------------------------------------------
# Transition probability and spectrum recovery from divergence values


def transition_from_bregman(
    f: GeneratorFunction, h: float, *, tols: Tolerances = DEFAULT_TOLS
) -> float:
    """Invert h = (1 - p)(f'(1) - f'(0)) for generators with finite f'(0).

    For infinite f'(0) the rank-one Bregman value is 0 or +inf and carries no
    transition information; use the rank-two route instead.
    """
    f = normalize(f)
    if not f.finite_zero_slope:
        raise ParameterError(
            f"generator {f.name!r} has f'(0+) = -inf; recover transitions through "
            "transition_from_bregman_rank_two instead"
        )
    span = f.slope(1.0) - f.slope_at_zero
    slack = tols.tol_num * max(1.0, span)
    if h < -slack or h > span + slack:
        raise RangeError(f"Bregman value {h!r} outside the admissible range [0, {span!r}]")
    return min(max(1.0 - h / span, 0.0), 1.0)


def transition_from_jensen(
    f: GeneratorFunction,
    j: float,
    *,
    bisect_tol: float = BISECT_TOL,
    tols: Tolerances = DEFAULT_TOLS,
) -> float:
    """Invert the rank-one Jensen closed form by monotone bisection in p."""
    f = normalize(f)
    m_f = jensen_max_constant(f)
    slack = tols.tol_num * max(1.0, m_f)
    if j < -slack or j > m_f + slack:
        raise RangeError(f"Jensen value {j!r} outside the admissible range [0, {m_f!r}]")
    j = min(max(j, 0.0), m_f)
    lo, hi = 0.0, 1.0  # jensen_rank_one decreases from M_f at p=0 to 0 at p=1
    while hi - lo > bisect_tol:
        mid = 0.5 * (lo + hi)
        if jensen_rank_one(f, mid, tols=tols) > j:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def transition_from_bregman_rank_two(
    f: GeneratorFunction, lam: float, value: float, *, tols: Tolerances = DEFAULT_TOLS
) -> float:
    """Invert H_f(R, lam P + mu Q) = -f'(lam) t - f'(mu)(1 - t) + C for t = tr RP.

    This is the probing device for generators with f'(0+) = -inf, where
    rank-one pairs only yield 0 or +inf.
    """
    f = normalize(f)
    _check_lambda(lam)
    mu = 1.0 - lam
    slope_lam, slope_mu = f.slope(lam), f.slope(mu)
    offset = rank_two_offset(f, lam)
    low = -slope_mu + offset  # value at R = Q
    high = -slope_lam + offset  # value at R = P
    slack = tols.tol_num * max(1.0, abs(low), abs(high))
    if value < low - slack or value > high + slack:
        raise RangeError(
            f"rank-two Bregman value {value!r} outside the admissible range [{low!r}, {high!r}]"
        )
    t = (value - offset + slope_mu) / (slope_mu - slope_lam)
    return min(max(t, 0.0), 1.0)


def recover_rank_two_spectrum(
    f: GeneratorFunction,
    delta: float,
    *,
    bisect_tol: float = BISECT_TOL,
    bracket_eps: float = 1e-12,
    tols: Tolerances = DEFAULT_TOLS,
) -> float:
    """Recover lam in (0, 1/2) from delta = f'(1 - lam) - f'(lam).

    The gap is strictly decreasing in lam (to 0 at lam = 1/2), so the value
    determines the rank-two spectrum {lam, 1 - lam} uniquely; solved by
    bisection on [bracket_eps, 1/2 - bracket_eps].
    """
    f = normalize(f)
    if delta <= 0.0:
        raise RangeError(f"spectral gap value must be positive, got {delta!r}")

    def gap(lam: float) -> float:
        return f.slope(1.0 - lam) - f.slope(lam)

    lo, hi = bracket_eps, 0.5 - bracket_eps
    if delta > gap(lo):
        if f.finite_zero_slope:
            span = f.slope(1.0) - f.slope_at_zero
            raise RangeError(f"gap value {delta!r} is at or beyond the supremum {span!r}")
        raise RangeError(f"gap value {delta!r} needs lam < {bracket_eps:g}; outside bracketing range")
    if delta < gap(hi):
        return hi
    while hi - lo > bisect_tol:
        mid = 0.5 * (lo + hi)
        if gap(mid) >= delta:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Max-divergence functional and purity detection


@dataclass(frozen=True)
class SearchBudget:
    """Budget for the max-divergence search: candidates, refinement, seed."""

    n_random: int = 512
    refine_steps: int = 50
    seed: int = 0
    initial_step: float = 0.3


def _pure_divergence_values(
    f: NormalizedGenerator, x: DensityState, candidates: np.ndarray
) -> np.ndarray:
    """H_f(X, |v><v|) for unit columns v of ``candidates`` (finite f'(0) only).

    A pure second argument has spectrum {1, 0}, so the double sum collapses to
    a function that is linear in the overlaps p_k = <v, P_k v>.
    """
    slope_one = f.slope(1.0)
    slope_zero = f.slope_at_zero
    values = np.zeros(candidates.shape[1])
    for c in x.spectral.clusters:
        a = c.eigenvalue
        overlaps = np.einsum("in,ij,jn->n", candidates.conj(), c.projection, candidates).real
        term_img = f(a) - slope_one * (a - 1.0)  # weight on the image line
        term_ker = f(a) - slope_zero * a  # weight on the kernel of |v><v|
        values += term_img * overlaps + term_ker * (c.multiplicity - overlaps)
    return values


def max_divergence_functional(
    f: GeneratorFunction,
    x: DensityState,
    budget: SearchBudget = SearchBudget(),
    *,
    tols: Tolerances = DEFAULT_TOLS,
) -> float:
    """Searched lower bound on M(X) = max over states D of H_f(X, D).

    Only meaningful for generators with finite f'(0) (otherwise the maximum is
    +inf as soon as X is not full-rank).  The candidate set is documented and
    deterministic: eigenvector projections of X, ``n_random`` seeded pure
    states, and seeded local refinement of the best candidate on the unit
    sphere.  H_f(X, .) restricted to pure states is linear in the overlap
    vector, so the eigenvector candidates already attain the pure-state
    maximum; the random and refinement stages guard the implementation rather
    than the mathematics.
    """
    f = normalize(f)
    if not f.finite_zero_slope:
        raise ParameterError(
            f"generator {f.name!r} has f'(0+) = -inf; M(X) is infinite off full rank"
        )
    rng = rng_for(budget.seed)
    _, eigvecs = np.linalg.eigh(x.matrix)
    candidates = [eigvecs]
    if budget.n_random > 0:
        raw = rng.standard_normal((x.dim, budget.n_random)) + 1j * rng.standard_normal(
            (x.dim, budget.n_random)
        )
        candidates.append(raw / np.linalg.norm(raw, axis=0))
    pool = np.concatenate(candidates, axis=1)
    values = _pure_divergence_values(f, x, pool)
    best_idx = int(np.argmax(values))
    best_value = float(values[best_idx])
    best_vec = pool[:, best_idx]

    step = budget.initial_step
    for _ in range(budget.refine_steps):
        trial = best_vec + step * (rng.standard_normal(x.dim) + 1j * rng.standard_normal(x.dim))
        trial /= np.linalg.norm(trial)
        value = float(_pure_divergence_values(f, x, trial[:, None])[0])
        if value > best_value:
            best_value, best_vec = value, trial
        else:
            step *= 0.7
    return best_value


def pure_reference_value(
    f: GeneratorFunction,
    dim: int,
    budget: SearchBudget = SearchBudget(),
    *,
    tols: Tolerances = DEFAULT_TOLS,
) -> float:
    """M on a rank-one projection; the same for every pure state by unitary invariance."""
    basis_vector = np.zeros(dim, dtype=complex)
    basis_vector[0] = 1.0
    pure = RankOneProjection.from_vector(basis_vector).to_state(tols)
    return max_divergence_functional(f, pure, budget, tols=tols)


def is_pure_by_max(
    f: GeneratorFunction,
    x: DensityState,
    reference_pure_value: float,
    budget: SearchBudget = SearchBudget(),
    *,
    pure_margin: float = PURE_MARGIN,
    tols: Tolerances = DEFAULT_TOLS,
) -> bool:
    """Purity test: X is pure iff M(X) attains the global maximum of M.

    ``reference_pure_value`` must come from ``pure_reference_value`` (or any
    rank-one projection) with the same generator and dimension.
    """
    value = max_divergence_functional(f, x, budget, tols=tols)
    return abs(value - reference_pure_value) < pure_margin


# ---------------------------------------------------------------------------
# Probe sets and Wigner-type reconstruction


def probe_labels(dim: int) -> list[str]:
    """Labels of the canonical probe family, in order."""
    _check_probe_dim(dim)
    labels = [f"e{i}" for i in range(1, dim + 1)]
    labels += [f"e1+e{i}" for i in range(2, dim + 1)]
    labels.append("e1+i*e2")
    return labels


def _check_probe_dim(dim: int) -> None:
    if dim < 2:
        raise ParameterError("probe families need dim >= 2; dim = 1 is degenerate")


def wigner_probes(dim: int) -> list[RankOneProjection]:
    """The canonical probe family: basis lines, two-way superpositions, one i-probe.

    2*dim projections in total: |e_i> for i = 1..dim, (e_1 + e_i)/sqrt(2) for
    i = 2..dim, and (e_1 + i e_2)/sqrt(2).  The superposition probes pin the
    relative phases of the reconstructed columns; the i-probe decides unitary
    versus antiunitary.
    """
    _check_probe_dim(dim)
    eye = np.eye(dim, dtype=complex)
    probes = [RankOneProjection.from_vector(eye[:, i]) for i in range(dim)]
    for i in range(1, dim):
        probes.append(RankOneProjection.from_vector(eye[:, 0] + eye[:, i]))
    probes.append(RankOneProjection.from_vector(eye[:, 0] + 1j * eye[:, 1]))
    return probes


def wigner_reconstruct(
    images: Sequence[RankOneProjection],
    *,
    wigner_tol: float = WIGNER_TOL,
    reconstruct_tol: float = RECONSTRUCT_TOL,
    tols: Tolerances = DEFAULT_TOLS,
) -> SymmetryOp:
    """Reconstruct the implementing unitary/antiunitary from probe images.

    ``images`` lists the images of ``wigner_probes(dim)`` in canonical order.
    The input family must preserve all pairwise transition probabilities
    within ``wigner_tol``; the returned operator reproduces every probe image
    within ``reconstruct_tol`` (both violations raise ``NotAPreserverError``).
    The global phase is fixed so the first nonzero component of the image of
    e_1 is real and nonnegative.
    """
    images = list(images)
    if not images or len(images) % 2 != 0:
        raise ParameterError(f"expected 2*dim probe images, got {len(images)}")
    dim = len(images) // 2
    _check_probe_dim(dim)
    for img in images:
        if img.dim != dim:
            raise DimensionMismatchError(
                f"probe image dimension {img.dim} does not match probe family dimension {dim}"
            )
    probes = wigner_probes(dim)
    labels = probe_labels(dim)

    for a in range(len(probes)):
        for b in range(a + 1, len(probes)):
            want = transition_probability(probes[a], probes[b])
            got = transition_probability(images[a], images[b])
            if abs(want - got) > wigner_tol:
                raise NotAPreserverError(
                    f"probe pair ({labels[a]}, {labels[b]}): image transition {got:.9f} "
                    f"differs from {want:.9f} by {abs(want - got):.3e} > {wigner_tol:.1e}"
                )

    columns = np.zeros((dim, dim), dtype=complex)
    psi1 = images[0].vector
    columns[:, 0] = psi1
    for i in range(1, dim):
        base = images[i].vector
        target = images[dim + i - 1].vector  # image of (e1 + e_{i+1})/sqrt(2)
        anchor = np.vdot(psi1, target)
        if abs(anchor) < 0.1:
            raise DegenerateProbeError(
                f"image of {labels[dim + i - 1]} is (near) orthogonal to the image of e1; "
                "cannot fix the phase"
            )
        component = np.vdot(base, target)
        if abs(component) < 0.1:
            raise DegenerateProbeError(
                f"image of {labels[dim + i - 1]} is (near) orthogonal to the image of "
                f"{labels[i]}; cannot fix the phase"
            )
        phase = component / anchor
        columns[:, i] = (phase / abs(phase)) * base

    izz = images[-1].vector  # image of (e1 + i e2)/sqrt(2)
    plus = (columns[:, 0] + 1j * columns[:, 1]) / math.sqrt(2.0)
    minus = (columns[:, 0] - 1j * columns[:, 1]) / math.sqrt(2.0)
    fit_plus = float(abs(np.vdot(plus, izz)) ** 2)
    fit_minus = float(abs(np.vdot(minus, izz)) ** 2)
    if max(fit_plus, fit_minus) < 0.9:
        raise NotAPreserverError(
            f"the i-probe image matches neither orientation (overlaps {fit_plus:.6f} / {fit_minus:.6f})"
        )
    antiunitary = fit_minus > fit_plus

    for k in range(dim):
        if abs(columns[k, 0]) > tols.tol_num:
            phase = columns[k, 0] / abs(columns[k, 0])
            columns = columns * np.conj(phase)
            break

    op = SymmetryOp(matrix=columns, antiunitary=antiunitary)
    residual = max_probe_residual(op, images)
    if residual > reconstruct_tol:
        raise NotAPreserverError(
            f"reconstructed operator misses the probe images by {residual:.3e} > {reconstruct_tol:.1e}"
        )
    return op


def max_probe_residual(op: SymmetryOp, images: Sequence[RankOneProjection]) -> float:
    """Max-entry deviation between op-applied probes and the given images."""
    probes = wigner_probes(op.dim)
    if len(images) != len(probes):
        raise ParameterError(f"expected {len(probes)} probe images, got {len(images)}")
    worst = 0.0
    for probe, image in zip(probes, images):
        predicted = op.apply_projection(probe).matrix
        worst = max(worst, float(np.max(np.abs(predicted - image.matrix))))
    return worst


# ---------------------------------------------------------------------------
# Transition tables


@dataclass(frozen=True)
class TransitionTable:
    """Pairwise transition probabilities tr(P_i Q_j) of two projection families."""

    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise ValidationError("transition table must be a matrix")
        if float(values.min()) < -DEFAULT_TOLS.tol_num or float(values.max()) > 1.0 + DEFAULT_TOLS.tol_num:
            raise ValidationError("transition probabilities must lie in [0, 1]")
        object.__setattr__(self, "values", np.clip(values, 0.0, 1.0))

    def max_deviation(self, other: "TransitionTable") -> float:
        if self.values.shape != other.values.shape:
            raise DimensionMismatchError("transition tables have different shapes")
        return float(np.max(np.abs(self.values - other.values)))

    def is_doubly_stochastic(self, tol: float = DEFAULT_TOLS.tol_num) -> bool:
        """Rows and columns sum to 1; holds when both families are complete bases."""
        rows = self.values.sum(axis=1)
        cols = self.values.sum(axis=0)
        return bool(np.max(np.abs(rows - 1.0)) <= tol and np.max(np.abs(cols - 1.0)) <= tol)

    @classmethod
    def direct(cls, family: Sequence[RankOneProjection]) -> "TransitionTable":
        n = len(family)
        values = np.eye(n)
        for a in range(n):
            for b in range(a + 1, n):
                values[a, b] = values[b, a] = transition_probability(family[a], family[b])
        return cls(values=values)


def rank_two_mixture(
    lam: float,
    p: RankOneProjection,
    q: RankOneProjection,
    *,
    tols: Tolerances = DEFAULT_TOLS,
) -> DensityState:
    """The state lam P + (1 - lam) Q for orthogonal rank-one P, Q, lam in (0, 1/2).

    Built with its spectral decomposition attached directly, so no
    eigendecomposition runs (the spectrum is {1 - lam, lam, 0}).
    """
    _check_lambda(lam)
    if transition_probability(p, q) >= tols.tol_num:
        raise ParameterError("mixture requires orthogonal projections")
    mu = 1.0 - lam
    p_mat, q_mat = p.matrix, q.matrix
    matrix = hermitian_part(lam * p_mat + mu * q_mat)
    clusters = [SpectralCluster(mu, q_mat, 1), SpectralCluster(lam, p_mat, 1)]
    dim = p.dim
    if dim > 2:
        rest = np.eye(dim, dtype=complex) - p_mat - q_mat
        clusters.append(SpectralCluster(0.0, hermitian_part(rest), dim - 2))
    support = p_mat + q_mat
    spectral = SpectralDecomposition(dim=dim, clusters=tuple(clusters), support=hermitian_part(support))
    return DensityState(matrix=matrix, spectral=spectral)


def probe_transitions_via_divergence(
    f: GeneratorFunction,
    family: Sequence[RankOneProjection],
    kind: str,
    *,
    lam: float = 0.25,
    tols: Tolerances = DEFAULT_TOLS,
) -> TransitionTable:
    """Recover the pairwise transition table of a projection family from
    divergence values alone.

    Routes: Jensen values inverted by monotone bisection; rank-one Bregman
    values inverted linearly (finite f'(0)); for infinite f'(0) each pair
    (R, P) is probed against the rank-two mixture lam P + (1 - lam) Q, with Q
    the orthocomplement of P inside span(R, P) -- rank-one Bregman values are
    0/inf there and carry no transition information.
    """
    f = normalize(f)
    if kind not in ("bregman", "jensen"):
        raise ParameterError(f"kind must be 'bregman' or 'jensen', got {kind!r}")
    n = len(family)
    values = np.eye(n)
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            if kind == "jensen":
                j = jensen(f, family[a].to_state(tols), family[b].to_state(tols), tols=tols)
                values[a, b] = transition_from_jensen(f, j, tols=tols)
            elif f.finite_zero_slope:
                h = bregman_rank_one_pair(f, family[a], family[b], tols=tols)
                values[a, b] = transition_from_bregman(f, h, tols=tols)
            else:
                values[a, b] = _transition_via_rank_two(f, family[a], family[b], lam, tols)
    return TransitionTable(values=values)


def _transition_via_rank_two(
    f: NormalizedGenerator,
    r: RankOneProjection,
    p: RankOneProjection,
    lam: float,
    tols: Tolerances,
) -> float:
    overlap = np.vdot(p.vector, r.vector)
    if 1.0 - abs(overlap) ** 2 < tols.tol_num:
        return 1.0
    residue = r.vector - overlap * p.vector
    q = RankOneProjection.from_vector(residue)
    mixture = rank_two_mixture(lam, p, q, tols=tols)
    h = bregman(f, r.to_state(tols), mixture, tols=tols)
    return transition_from_bregman_rank_two(f, lam, h, tols=tols)


# ---------------------------------------------------------------------------
# Preserver verification harness


def _divergence_deviation(u: float, v: float) -> float:
    if math.isinf(u) and math.isinf(v):
        return 0.0
    if math.isinf(u) or math.isinf(v):
        return math.inf
    return abs(u - v)


@dataclass(frozen=True)
class PreserverVerification:
    """Outcome of empirically testing a map against the preserver theorems.

    A genuine preserver shows (a) vanishing divergence deviation on sampled
    pairs, (b) a reconstructible implementing operator, and (c) vanishing
    residual between the map and conjugation by that operator.
    """

    kind: str
    generator: str
    oracle: str
    dim: int
    seed: int
    sample_size: int
    divergence_tol: float
    max_divergence_deviation: float
    probe_images_rank_one: bool
    max_transition_recovery_deviation: float | None
    symmetry: SymmetryOp | None
    reconstruction_error: str | None
    max_probe_residual: float
    max_state_residual: float

    @property
    def divergence_preserved(self) -> bool:
        return self.max_divergence_deviation <= self.divergence_tol

    @property
    def reconstructed(self) -> bool:
        return self.symmetry is not None

    @property
    def antiunitary(self) -> bool | None:
        return None if self.symmetry is None else self.symmetry.antiunitary

    @property
    def passed(self) -> bool:
        return (
            self.divergence_preserved
            and self.reconstructed
            and self.max_probe_residual <= self.divergence_tol
            and self.max_state_residual <= self.divergence_tol
        )

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "generator": self.generator,
            "oracle": self.oracle,
            "dim": self.dim,
            "seed": self.seed,
            "sample_size": self.sample_size,
            "divergence_tol": float(self.divergence_tol),
            "max_divergence_deviation": float(self.max_divergence_deviation),
            "probe_images_rank_one": bool(self.probe_images_rank_one),
            "max_transition_recovery_deviation": (
                None
                if self.max_transition_recovery_deviation is None
                else float(self.max_transition_recovery_deviation)
            ),
            "antiunitary": None if self.antiunitary is None else bool(self.antiunitary),
            "reconstruction_error": self.reconstruction_error,
            "max_probe_residual": float(self.max_probe_residual),
            "max_state_residual": float(self.max_state_residual),
            "divergence_preserved": bool(self.divergence_preserved),
            "passed": bool(self.passed),
        }


def verify_preserver(
    f: GeneratorFunction,
    oracle: PreserverOracle,
    kind: str,
    sample_size: int = 20,
    seed: int = 0,
    *,
    divergence_tol: float = 1e-8,
    wigner_tol: float = WIGNER_TOL,
    reconstruct_tol: float = RECONSTRUCT_TOL,
    rank_one_tol: float = 1e-8,
    probe_via_divergence: bool = True,
    tols: Tolerances = DEFAULT_TOLS,
) -> PreserverVerification:
    """Empirically instantiate the preserver theorems for a candidate map.

    Measures the worst divergence deviation |D(phi A, phi B) - D(A, B)| over
    seeded sampled pairs (full-rank and pure), recovers the probe-image
    transition table from divergence values alone and compares it with the
    original table, reconstructs the implementing operator from the probe
    images, and measures how far the map is from conjugation by it.
    """
    f = normalize(f)
    if kind not in ("bregman", "jensen"):
        raise ParameterError(f"kind must be 'bregman' or 'jensen', got {kind!r}")
    rng = rng_for(seed)
    dim = oracle.dim

    inputs = [random_state(dim, rng=rng) for _ in range(2 * sample_size)]
    inputs.append(random_pure(dim, rng).to_state(tols))
    inputs.append(random_pure(dim, rng).to_state(tols))
    images = [oracle(state) for state in inputs]

    pair_indices = [(2 * k, 2 * k + 1) for k in range(sample_size)]
    pair_indices += [(len(inputs) - 2, len(inputs) - 1), (len(inputs) - 2, 0)]

    def divergence(a: DensityState, b: DensityState) -> float:
        if kind == "bregman":
            return bregman(f, a, b, tols=tols)
        return jensen(f, a, b, tols=tols)

    max_div_dev = 0.0
    for a, b in pair_indices:
        before = divergence(inputs[a], inputs[b])
        after = divergence(images[a], images[b])
        max_div_dev = max(max_div_dev, _divergence_deviation(before, after))

    probes = wigner_probes(dim)
    probe_images: list[RankOneProjection] = []
    images_rank_one = True
    reconstruction_error: str | None = None
    for probe in probes:
        image_state = oracle(probe.to_state(tols))
        try:
            probe_images.append(image_state.as_rank_one(rank_one_tol))
        except ValidationError as exc:
            images_rank_one = False
            reconstruction_error = f"probe image is not rank-one: {exc}"
            break

    transition_recovery_dev: float | None = None
    symmetry: SymmetryOp | None = None
    probe_residual = math.inf
    state_residual = math.inf

    if images_rank_one:
        if probe_via_divergence:
            recovered_original = probe_transitions_via_divergence(f, probes, kind, tols=tols)
            recovered_images = probe_transitions_via_divergence(f, probe_images, kind, tols=tols)
            transition_recovery_dev = recovered_images.max_deviation(recovered_original)
        try:
            symmetry = wigner_reconstruct(
                probe_images, wigner_tol=wigner_tol, reconstruct_tol=reconstruct_tol, tols=tols
            )
        except (NotAPreserverError, DegenerateProbeError) as exc:
            reconstruction_error = str(exc)
        if symmetry is not None:
            probe_residual = max_probe_residual(symmetry, probe_images)
            state_residual = 0.0
            for state, image in zip(inputs, images):
                predicted = symmetry.apply_matrix(state.matrix)
                state_residual = max(
                    state_residual, float(np.max(np.abs(predicted - image.matrix)))
                )

    return PreserverVerification(
        kind=kind,
        generator=f.name,
        oracle=oracle.label,
        dim=dim,
        seed=seed,
        sample_size=sample_size,
        divergence_tol=divergence_tol,
        max_divergence_deviation=max_div_dev,
        probe_images_rank_one=images_rank_one,
        max_transition_recovery_deviation=transition_recovery_dev,
        symmetry=symmetry,
        reconstruction_error=reconstruction_error,
        max_probe_residual=probe_residual,
        max_state_residual=state_residual,
    )
