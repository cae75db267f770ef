"""Jensen divergence engine.

J_f(A, B) = tr( (f(A) + f(B))/2 - f((A + B)/2) ).  Finite whenever f has a
finite limit at 0 -- the zero-derivative class is never consulted -- and
symmetric by construction.  The maximum over state pairs is M_f = -2 f(1/2),
attained exactly at orthogonal pure state pairs.
"""

from __future__ import annotations

import math

import numpy as np

from .config import DEFAULT_TOLS, Tolerances
from .errors import DimensionMismatchError, DomainError, ParameterError
from .generators import GeneratorFunction, normalize
from .hermitian import DensityState, apply_function
from .bregman import _clamp_nonneg, bregman

__all__ = [
    "jensen",
    "jensen_rank_one",
    "jensen_max_constant",
    "jensen_via_bregman",
    "midpoint_state",
]


def _require_finite_at_zero(f: GeneratorFunction) -> None:
    if not math.isfinite(f.value_at_zero):
        raise DomainError(f"generator {f.name!r} has no finite limit at 0; Jensen divergence undefined")


def midpoint_state(a: DensityState, b: DensityState, *, tols: Tolerances = DEFAULT_TOLS) -> DensityState:
    """The state (A + B)/2."""
    if a.dim != b.dim:
        raise DimensionMismatchError(f"state dimensions differ: {a.dim} vs {b.dim}")
    return DensityState.from_matrix((a.matrix + b.matrix) / 2.0, tols)


def jensen(
    f: GeneratorFunction,
    a: DensityState,
    b: DensityState,
    *,
    tols: Tolerances = DEFAULT_TOLS,
) -> float:
    """Jensen f-divergence J_f(A, B), evaluated through operator functions."""
    f = normalize(f)
    _require_finite_at_zero(f)
    mid = midpoint_state(a, b, tols=tols)
    fa = apply_function(a, f, tols=tols)
    fb = apply_function(b, f, tols=tols)
    fm = apply_function(mid, f, tols=tols)
    value = float(np.trace(0.5 * (fa + fb) - fm).real)
    return _clamp_nonneg(value, tols.tol_num)


def jensen_rank_one(f: GeneratorFunction, p: float, *, tols: Tolerances = DEFAULT_TOLS) -> float:
    """Closed form for pure states: J_f(P, Q) = -( f((1+sqrt(p))/2) + f((1-sqrt(p))/2) )

    with p = tr PQ.  Strictly decreasing in p, from M_f at p = 0 down to 0 at
    p = 1.
    """
    f = normalize(f)
    if p < -tols.tol_num or p > 1.0 + tols.tol_num:
        raise ParameterError(f"transition probability must lie in [0, 1], got {p!r}")
    p = min(max(p, 0.0), 1.0)
    root = math.sqrt(p)
    return -(f(0.5 * (1.0 + root)) + f(0.5 * (1.0 - root)))


def jensen_max_constant(f: GeneratorFunction) -> float:
    """M_f = -2 f(1/2): the global maximum of J_f over state pairs."""
    f = normalize(f)
    return -2.0 * f(0.5)


def jensen_via_bregman(
    f: GeneratorFunction,
    a: DensityState,
    b: DensityState,
    *,
    tols: Tolerances = DEFAULT_TOLS,
) -> float:
    """J_f(A, B) = ( H_f(A, (A+B)/2) + H_f(B, (A+B)/2) ) / 2.

    Both supports are contained in the midpoint support, so the Bregman calls
    are finite regardless of the generator's zero-derivative class.
    """
    f = normalize(f)
    _require_finite_at_zero(f)
    mid = midpoint_state(a, b, tols=tols)
    left = bregman(f, a, mid, tols=tols)
    right = bregman(f, b, mid, tols=tols)
    return 0.5 * (left + right)
