"""Bregman divergence engine with exact extended-value semantics.

The divergence H_f(X, Y) = tr(f(X) - f(Y) - f'(Y)(X - Y)) extends from
positive definite to positive semidefinite arguments by continuity.  The
extension is *not* computed by numerical limiting -- limits are treacherous
near the infinite branch -- but by the closed computation rules:

* f'(0+) = -inf:  H_f = +inf unless supp X is contained in supp Y, in which
  case the spectral double sum runs over the nonzero spectrum of Y.
* f'(0+) finite:  the full double sum, with the declared f'(0) on the kernel.

Values are plain floats; ``math.inf`` is the infinite branch.  Tiny negative
results (rounding noise on a nonnegative quantity) are clamped to 0.
"""

from __future__ import annotations

import math

import numpy as np

from .config import DEFAULT_TOLS, Tolerances
from .errors import DimensionMismatchError, ParameterError, ValidationError
from .generators import GeneratorFunction, normalize
from .hermitian import (
    DensityState,
    RankOneProjection,
    apply_function,
    cluster_overlaps,
    trace_on_support,
    transition_probability,
)

__all__ = [
    "support_contained",
    "bregman",
    "bregman_trace_form",
    "bregman_rank_one_pair",
    "rank_two_offset",
    "bregman_rank_one_vs_rank_two",
]

INF = math.inf


def _clamp_nonneg(value: float, tol_num: float) -> float:
    value = float(value)
    if value < 0.0:
        if value < -tol_num:
            raise ValidationError(
                f"divergence evaluated to {value!r}; negative beyond -{tol_num:.1e} "
                "indicates invalid inputs"
            )
        return 0.0
    return value


def _check_dims(x: DensityState, y: DensityState) -> None:
    if x.dim != y.dim:
        raise DimensionMismatchError(f"state dimensions differ: {x.dim} vs {y.dim}")


def support_contained(x: DensityState, y: DensityState, *, tols: Tolerances = DEFAULT_TOLS) -> bool:
    """Whether supp X is contained in supp Y, via tr((I - supp_Y) X) < eps_supp.

    Basis-free and O(d^2); exactly the trace weight the kernel of Y carries in
    the spectral double sum.
    """
    _check_dims(x, y)
    complement = np.eye(y.dim, dtype=complex) - y.support
    leak = float(np.einsum("ij,ji->", complement, x.matrix).real)
    return leak < tols.eps_supp


def bregman(
    f: GeneratorFunction,
    x: DensityState,
    y: DensityState,
    *,
    tols: Tolerances = DEFAULT_TOLS,
) -> float:
    """Bregman f-divergence H_f(X, Y); ``math.inf`` on the infinite branch.

    Terms whose overlap tr(P_x Q_y) falls below ``tol_num`` are skipped: the
    formula assigns them weight zero, and keeping them only injects 0 * huge
    noise where f'(y) blows up near small y.
    """
    f = normalize(f)
    _check_dims(x, y)
    infinite_class = not f.finite_zero_slope
    if infinite_class and not support_contained(x, y, tols=tols):
        return INF

    overlaps = cluster_overlaps(x.spectral, y.spectral)
    xs = x.spectral.eigenvalues
    ys = y.spectral.eigenvalues
    total = 0.0
    for j, b in enumerate(ys):
        if infinite_class and b == 0.0:
            continue
        fb = f(b)
        sb = f.slope(b)
        for i, a in enumerate(xs):
            weight = overlaps[i, j]
            if weight < tols.tol_num:
                continue
            total += (f(a) - fb - sb * (a - b)) * weight
    return _clamp_nonneg(total, tols.tol_num)


def bregman_trace_form(
    f: GeneratorFunction,
    x: DensityState,
    y: DensityState,
    *,
    tols: Tolerances = DEFAULT_TOLS,
) -> float:
    """H_f via operator functions and a support-restricted trace.

    Independent route to the same value as :func:`bregman`: assembles
    f(X) - f(Y) - f'(Y)(X - Y) as matrices and takes the trace on supp Y
    (the full trace in the finite-derivative regime).  Kept public because the
    two routes cross-check each other.
    """
    f = normalize(f)
    _check_dims(x, y)
    if f.finite_zero_slope:
        fx = apply_function(x, f, tols=tols)
        fy = apply_function(y, f, tols=tols)
        dfy = apply_function(y, f.slope, tols=tols)
        expr = fx - fy - dfy @ (x.matrix - y.matrix)
        return _clamp_nonneg(float(np.trace(expr).real), tols.tol_num)

    if not support_contained(x, y, tols=tols):
        return INF
    fx = apply_function(x, f, tols=tols)
    fy = apply_function(y, f, tols=tols)
    # Derivative restricted to supp Y: the kernel cluster carries weight 0.
    dfy = np.zeros((y.dim, y.dim), dtype=complex)
    for c in y.spectral.clusters:
        if c.eigenvalue != 0.0:
            dfy += f.slope(c.eigenvalue) * c.projection
    expr = fx - fy - dfy @ (x.matrix - y.matrix)
    value = trace_on_support(expr, y.support, tols=tols)
    return _clamp_nonneg(value, tols.tol_num)


def bregman_rank_one_pair(
    f: GeneratorFunction,
    p: RankOneProjection,
    q: RankOneProjection,
    *,
    tols: Tolerances = DEFAULT_TOLS,
) -> float:
    """Closed form for two pure states: (1 - tr PQ) (f'(1) - f'(0)).

    In the infinite-derivative regime distinct rank-one supports are never
    nested, so the value is 0 for P = Q and +inf otherwise.
    """
    f = normalize(f)
    overlap = transition_probability(p, q)
    if 1.0 - overlap < tols.tol_num:
        return 0.0
    if not f.finite_zero_slope:
        return INF
    return _clamp_nonneg((1.0 - overlap) * (f.slope(1.0) - f.slope_at_zero), tols.tol_num)


def rank_two_offset(f: GeneratorFunction, lam: float) -> float:
    """The constant c = lam f'(lam) - f(lam) + mu f'(mu) - f(mu), mu = 1 - lam."""
    f = normalize(f)
    _check_lambda(lam)
    mu = 1.0 - lam
    return lam * f.slope(lam) - f(lam) + mu * f.slope(mu) - f(mu)


def _check_lambda(lam: float) -> None:
    if not 0.0 < lam < 0.5:
        raise ParameterError(f"rank-two weight must lie in (0, 1/2), got {lam!r}")


def bregman_rank_one_vs_rank_two(
    f: GeneratorFunction,
    r: RankOneProjection,
    lam: float,
    p: RankOneProjection,
    q: RankOneProjection,
    *,
    tols: Tolerances = DEFAULT_TOLS,
) -> float:
    """Closed form for H_f(R, lam P + mu Q) with P orthogonal to Q, mu = 1 - lam.

    Requires supp R inside span(P, Q): outside it the value is +inf in the
    infinite-derivative regime and the closed form simply does not apply in
    the finite one.
    """
    f = normalize(f)
    _check_lambda(lam)
    if transition_probability(p, q) >= tols.tol_num:
        raise ParameterError("reference projections P and Q must be orthogonal")
    tr_rp = transition_probability(r, p)
    tr_rq = transition_probability(r, q)
    leak = 1.0 - tr_rp - tr_rq
    if leak > tols.eps_supp:
        if not f.finite_zero_slope:
            return INF
        raise ParameterError(
            f"R leaks {leak:.3e} outside span(P, Q); the rank-two closed form does not apply"
        )
    mu = 1.0 - lam
    value = -f.slope(lam) * tr_rp - f.slope(mu) * tr_rq + rank_two_offset(f, lam)
    return _clamp_nonneg(value, tols.tol_num)
