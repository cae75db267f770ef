"""Numerical tolerance configuration.

The finite/infinite divergence dichotomy is discontinuous in the eigenvalues,
so the zero decision is a single documented knob (``eps_supp``), kept separate
from the eigenvalue clustering width (``cluster_tol``).
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass

ENV_PREFIX = "STATEDIV_"


@dataclass(frozen=True)
class Tolerances:
    """Tolerances used by matrix validation and divergence computation.

    tol_herm    -- admissible deviation from M = M* (inputs are symmetrized
                   below this, rejected above)
    tol_psd     -- admissible negative eigenvalue magnitude for states
    tol_trace   -- admissible deviation of a state's trace from 1
    tol_num     -- generic comparison tolerance (projections, clamping, ...)
    eps_supp    -- eigenvalues below this count as exactly 0 for support
    cluster_tol -- eigenvalues closer than this are merged into one cluster
    """

    tol_herm: float = 1e-9
    tol_psd: float = 1e-9
    tol_trace: float = 1e-9
    tol_num: float = 1e-9
    eps_supp: float = 1e-10
    cluster_tol: float = 1e-8

    def replace(self, **kwargs: float) -> "Tolerances":
        return dataclasses.replace(self, **kwargs)

    def as_dict(self) -> dict[str, float]:
        return dataclasses.asdict(self)


DEFAULT_TOLS = Tolerances()


def tolerances_from_env(environ: dict[str, str] | None = None) -> Tolerances:
    """Build tolerances from STATEDIV_* environment variables.

    Recognized names: STATEDIV_TOL_HERM, STATEDIV_TOL_PSD, STATEDIV_TOL_TRACE,
    STATEDIV_TOL_NUM, STATEDIV_EPS_SUPP, STATEDIV_CLUSTER_TOL.  Unset names
    fall back to the defaults; explicit --tol-* CLI flags take precedence over
    the environment.
    """
    environ = os.environ if environ is None else environ
    overrides: dict[str, float] = {}
    for field in dataclasses.fields(Tolerances):
        raw = environ.get(ENV_PREFIX + field.name.upper())
        if raw is not None:
            overrides[field.name] = float(raw)
    return Tolerances(**overrides)
