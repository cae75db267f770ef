"""Named invariant suites with machine-readable, seed-deterministic reports.

Each suite samples seeded instances, measures worst-case deviations against
closed forms or independent routes, and returns a RunReport.  Reports are
deterministic given (inputs, seed, tolerances); wall time is measured but kept
out of the canonical serialization so that identical runs produce identical
bytes.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import logm

from .bregman import (
    bregman,
    bregman_rank_one_pair,
    bregman_rank_one_vs_rank_two,
    bregman_trace_form,
)
from .config import DEFAULT_TOLS, Tolerances
from .errors import ParameterError
from .generators import NormalizedGenerator, parse_generator
from .hermitian import DensityState, RankOneProjection, transition_probability
from .jensen import jensen, jensen_max_constant, jensen_rank_one, jensen_via_bregman
from .preserver import (
    conjugation_oracle,
    depolarizing_oracle,
    diagonal_oracle,
    probe_transitions_via_divergence,
    recover_rank_two_spectrum,
    rank_two_mixture,
    transition_from_bregman,
    transition_from_jensen,
    verify_preserver,
    wigner_probes,
    wigner_reconstruct,
    SymmetryOp,
)
from .sampling import haar_unitary, random_pure, random_state, rng_for

__all__ = ["CheckResult", "RunReport", "run_suite", "SUITE_NAMES"]

DEFAULT_GENERATORS = ("xlogx", "power:q=3/2", "quadratic")
DEFAULT_DIMS = (2, 3, 4)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    deviation: float | None
    tolerance: float | None
    detail: str = ""

    def to_dict(self) -> dict:
        def safe(v: float | None) -> "float | str | None":
            if v is None:
                return None
            v = float(v)
            return "inf" if math.isinf(v) else v

        return {
            "name": self.name,
            "passed": bool(self.passed),
            "deviation": safe(self.deviation),
            "tolerance": safe(self.tolerance),
            "detail": self.detail,
        }


@dataclass
class RunReport:
    command: str
    suite: str
    seed: int
    dims: tuple[int, ...]
    generators: tuple[str, ...]
    tolerances: dict
    checks: list[CheckResult] = field(default_factory=list)
    wall_time_s: float = 0.0

    @property
    def passed(self) -> bool:
        return all(bool(c.passed) for c in self.checks)

    def to_dict(self, include_timing: bool = False) -> dict:
        out = {
            "command": self.command,
            "suite": self.suite,
            "seed": self.seed,
            "dims": list(self.dims),
            "generators": list(self.generators),
            "tolerances": self.tolerances,
            "checks": [c.to_dict() for c in self.checks],
            "passed": self.passed,
        }
        if include_timing:
            out["wall_time_s"] = self.wall_time_s
        return out

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2)


def _pairs(dim: int, count: int, rng, *, floor: float = 1e-3):
    return [
        (random_state(dim, rng=rng, eigenvalue_floor=floor), random_state(dim, rng=rng, eigenvalue_floor=floor))
        for _ in range(count)
    ]


def _worst(devs) -> float:
    return max(devs) if devs else 0.0


# ---------------------------------------------------------------------------
# closed-forms suite


def _suite_closed_forms(
    report: RunReport, dims, generators: dict[str, NormalizedGenerator], seed: int, tols: Tolerances
) -> None:
    samples = 20
    quad = parse_generator("quadratic")
    xlogx = parse_generator("xlogx")

    devs_hs_b, devs_hs_j, devs_umegaki = [], [], []
    for dim in dims:
        rng = rng_for(seed + 1000 * dim)
        for a, b in _pairs(dim, samples, rng):
            diff = a.matrix - b.matrix
            hs = float(np.trace(diff @ diff).real)
            devs_hs_b.append(abs(bregman(quad, a, b, tols=tols) - hs))
            devs_hs_j.append(abs(jensen(quad, a, b, tols=tols) - hs / 4.0))
            umegaki = float(np.trace(a.matrix @ (logm(a.matrix) - logm(b.matrix))).real)
            devs_umegaki.append(abs(bregman(xlogx, a, b, tols=tols) - umegaki))
    report.checks.append(
        CheckResult("quadratic-bregman-hilbert-schmidt", _worst(devs_hs_b) <= 1e-10, _worst(devs_hs_b), 1e-10)
    )
    report.checks.append(
        CheckResult("quadratic-jensen-hilbert-schmidt", _worst(devs_hs_j) <= 1e-10, _worst(devs_hs_j), 1e-10)
    )
    report.checks.append(
        CheckResult("umegaki-operator-log", _worst(devs_umegaki) <= 1e-8, _worst(devs_umegaki), 1e-8)
    )

    for label, gen in generators.items():
        devs_trace, devs_jvb, devs_r1, devs_pair, devs_mix = [], [], [], [], []
        for dim in dims:
            rng = rng_for(seed + 2000 * dim)
            for a, b in _pairs(dim, samples, rng):
                devs_trace.append(abs(bregman(gen, a, b, tols=tols) - bregman_trace_form(gen, a, b, tols=tols)))
                devs_jvb.append(abs(jensen(gen, a, b, tols=tols) - jensen_via_bregman(gen, a, b, tols=tols)))
            if dim > 1:
                low_rank = random_state(dim, rank=max(1, dim - 1), rng=rng, eigenvalue_floor=1e-2)
                full = random_state(dim, rng=rng, eigenvalue_floor=1e-2)
                devs_trace.append(
                    abs(bregman(gen, low_rank, full, tols=tols) - bregman_trace_form(gen, low_rank, full, tols=tols))
                )
            for _ in range(samples):
                p, q = random_pure(dim, rng), random_pure(dim, rng)
                overlap = transition_probability(p, q)
                devs_r1.append(
                    abs(jensen(gen, p.to_state(), q.to_state(), tols=tols) - jensen_rank_one(gen, overlap, tols=tols))
                )
                if gen.finite_zero_slope:
                    closed = (1.0 - overlap) * (gen.slope(1.0) - gen.slope_at_zero)
                    devs_pair.append(abs(bregman_rank_one_pair(gen, p, q, tols=tols) - closed))
                lam = float(rng.uniform(0.05, 0.45))
                basis = haar_unitary(dim, rng)
                pp = RankOneProjection.from_vector(basis[:, 0])
                qq = RankOneProjection.from_vector(basis[:, 1])
                r_vec = basis[:, 0] * math.cos(0.7) + basis[:, 1] * math.sin(0.7) * np.exp(0.3j)
                rr = RankOneProjection.from_vector(r_vec)
                closed = bregman_rank_one_vs_rank_two(gen, rr, lam, pp, qq, tols=tols)
                general = bregman(gen, rr.to_state(), rank_two_mixture(lam, pp, qq, tols=tols), tols=tols)
                devs_mix.append(abs(closed - general))
        report.checks.append(
            CheckResult(f"bregman-trace-form[{label}]", _worst(devs_trace) <= 1e-8, _worst(devs_trace), 1e-8)
        )
        report.checks.append(
            CheckResult(f"jensen-via-bregman[{label}]", _worst(devs_jvb) <= 1e-8, _worst(devs_jvb), 1e-8)
        )
        report.checks.append(
            CheckResult(f"jensen-rank-one-law[{label}]", _worst(devs_r1) <= 1e-8, _worst(devs_r1), 1e-8)
        )
        if devs_pair:
            report.checks.append(
                CheckResult(f"bregman-rank-one-pair[{label}]", _worst(devs_pair) <= 1e-8, _worst(devs_pair), 1e-8)
            )
        report.checks.append(
            CheckResult(f"bregman-rank-two-closed-form[{label}]", _worst(devs_mix) <= 1e-8, _worst(devs_mix), 1e-8)
        )

        max_const = jensen_max_constant(gen)
        devs_max = []
        for dim in dims:
            rng = rng_for(seed + 3000 * dim)
            basis = haar_unitary(dim, rng)
            p = RankOneProjection.from_vector(basis[:, 0])
            q = RankOneProjection.from_vector(basis[:, 1])
            devs_max.append(abs(jensen(gen, p.to_state(), q.to_state(), tols=tols) - max_const))
        report.checks.append(
            CheckResult(
                f"jensen-max-at-orthogonal[{label}]", _worst(devs_max) <= 1e-10, _worst(devs_max), 1e-10
            )
        )


# ---------------------------------------------------------------------------
# preserver-roundtrip suite


def _suite_preserver(
    report: RunReport, dims, generators: dict[str, NormalizedGenerator], seed: int, tols: Tolerances
) -> None:
    lam_grid = np.linspace(0.02, 0.48, 12)

    for label, gen in generators.items():
        devs_j, devs_b, devs_r2, devs_spec = [], [], [], []
        for dim in dims:
            rng = rng_for(seed + 4000 * dim)
            for _ in range(10):
                p, q = random_pure(dim, rng), random_pure(dim, rng)
                truth = transition_probability(p, q)
                j_val = jensen(gen, p.to_state(), q.to_state(), tols=tols)
                devs_j.append(abs(transition_from_jensen(gen, j_val, tols=tols) - truth))
                if gen.finite_zero_slope:
                    h_val = bregman_rank_one_pair(gen, p, q, tols=tols)
                    devs_b.append(abs(transition_from_bregman(gen, h_val, tols=tols) - truth))
        recovered = probe_transitions_via_divergence(gen, wigner_probes(max(dims)), "bregman", tols=tols)
        direct = np.eye(len(wigner_probes(max(dims))))
        probes = wigner_probes(max(dims))
        for a in range(len(probes)):
            for b in range(len(probes)):
                if a != b:
                    direct[a, b] = transition_probability(probes[a], probes[b])
        devs_r2.append(float(np.max(np.abs(recovered.values - direct))))
        for lam in lam_grid:
            delta = gen.slope(1.0 - lam) - gen.slope(lam)
            devs_spec.append(abs(recover_rank_two_spectrum(gen, delta, tols=tols) - lam))
        report.checks.append(
            CheckResult(f"transition-from-jensen[{label}]", _worst(devs_j) <= 1e-6, _worst(devs_j), 1e-6)
        )
        if devs_b:
            report.checks.append(
                CheckResult(f"transition-from-bregman[{label}]", _worst(devs_b) <= 1e-8, _worst(devs_b), 1e-8)
            )
        report.checks.append(
            CheckResult(
                f"transitions-via-divergence[{label}]", _worst(devs_r2) <= 1e-6, _worst(devs_r2), 1e-6
            )
        )
        report.checks.append(
            CheckResult(f"spectrum-recovery[{label}]", _worst(devs_spec) <= 1e-8, _worst(devs_spec), 1e-8)
        )

    gen_cycle = list(generators.items())
    kinds = ("bregman", "jensen")
    devs_conj, flag_errors = [], 0
    devs_wigner = []
    for dim in dims:
        rng = rng_for(seed + 5000 * dim)
        for idx, antiunitary in enumerate((False, True, False, True)):
            op = SymmetryOp(matrix=haar_unitary(dim, rng), antiunitary=antiunitary)
            label, gen = gen_cycle[idx % len(gen_cycle)]
            kind = kinds[idx % 2]
            outcome = verify_preserver(
                gen, conjugation_oracle(op, tols), kind, sample_size=6, seed=seed + idx, tols=tols
            )
            devs_conj.append(outcome.max_divergence_deviation)
            devs_conj.append(outcome.max_probe_residual)
            devs_conj.append(outcome.max_state_residual)
            if outcome.antiunitary != antiunitary:
                flag_errors += 1
            images = [op.apply_projection(probe) for probe in wigner_probes(dim)]
            rebuilt = wigner_reconstruct(images, tols=tols)
            for _ in range(25):
                r = random_pure(dim, rng)
                devs_wigner.append(
                    float(np.max(np.abs(rebuilt.apply_matrix(r.matrix) - op.apply_matrix(r.matrix))))
                )
    report.checks.append(
        CheckResult("conjugation-verification", _worst(devs_conj) <= 1e-8, _worst(devs_conj), 1e-8)
    )
    report.checks.append(
        CheckResult("antiunitary-flags", flag_errors == 0, float(flag_errors), 0.0)
    )
    report.checks.append(
        CheckResult("wigner-roundtrip", _worst(devs_wigner) <= 1e-8, _worst(devs_wigner), 1e-8)
    )

    margins = []
    for dim in dims:
        label, gen = gen_cycle[dim % len(gen_cycle)]
        for oracle in (depolarizing_oracle(dim, 0.5, tols), diagonal_oracle(dim, tols)):
            outcome = verify_preserver(gen, oracle, "jensen", sample_size=6, seed=seed + dim, tols=tols)
            margins.append(outcome.max_divergence_deviation)
    worst_margin = min(margins) if margins else math.inf
    report.checks.append(
        CheckResult(
            "non-preservers-rejected",
            worst_margin > 1e-3,
            worst_margin,
            1e-3,
            "deviation must exceed tolerance for every non-conjugation map",
        )
    )


# ---------------------------------------------------------------------------
# convexity suite


def _suite_convexity(
    report: RunReport, dims, generators: dict[str, NormalizedGenerator], seed: int, tols: Tolerances
) -> None:
    samples = 40
    for label, gen in generators.items():
        min_gap = math.inf
        max_joint_violation = -math.inf
        for dim in dims:
            rng = rng_for(seed + 6000 * dim)
            for _ in range(samples):
                a = random_state(dim, rng=rng, eigenvalue_floor=1e-3)
                b = random_state(dim, rng=rng, eigenvalue_floor=1e-3)
                d = random_state(dim, rng=rng, eigenvalue_floor=1e-3)
                t = float(rng.uniform(0.1, 0.9))
                mix = DensityState.from_matrix(t * a.matrix + (1.0 - t) * b.matrix, tols)
                gap = (
                    t * bregman(gen, a, d, tols=tols)
                    + (1.0 - t) * bregman(gen, b, d, tols=tols)
                    - bregman(gen, mix, d, tols=tols)
                )
                min_gap = min(min_gap, gap)
                if gen.matrix_entropy_member:
                    a2 = random_state(dim, rng=rng, eigenvalue_floor=1e-3)
                    b2 = random_state(dim, rng=rng, eigenvalue_floor=1e-3)
                    mix_a = DensityState.from_matrix(t * a.matrix + (1.0 - t) * a2.matrix, tols)
                    mix_b = DensityState.from_matrix(t * b.matrix + (1.0 - t) * b2.matrix, tols)
                    violation = bregman(gen, mix_a, mix_b, tols=tols) - (
                        t * bregman(gen, a, b, tols=tols) + (1.0 - t) * bregman(gen, a2, b2, tols=tols)
                    )
                    max_joint_violation = max(max_joint_violation, violation)
        report.checks.append(
            CheckResult(
                f"strict-convexity-first-argument[{label}]",
                min_gap > 0.0,
                min_gap,
                0.0,
                "recorded value is the smallest sampled convexity gap (the f-dependent floor)",
            )
        )
        if gen.matrix_entropy_member:
            report.checks.append(
                CheckResult(
                    f"joint-convexity[{label}]",
                    max_joint_violation <= 1e-9,
                    max_joint_violation,
                    1e-9,
                    "largest sampled violation of the joint convexity inequality",
                )
            )


_SUITES = {
    "closed-forms": _suite_closed_forms,
    "preserver-roundtrip": _suite_preserver,
    "convexity": _suite_convexity,
}

SUITE_NAMES = tuple(_SUITES) + ("all",)


def run_suite(
    name: str,
    dims: tuple[int, ...] = DEFAULT_DIMS,
    seed: int = 0,
    generator_specs: tuple[str, ...] = DEFAULT_GENERATORS,
    *,
    command: str = "",
    tols: Tolerances = DEFAULT_TOLS,
) -> RunReport:
    """Run a named suite and return its deterministic report."""
    if name not in SUITE_NAMES:
        raise ParameterError(f"unknown suite {name!r}; available: {', '.join(SUITE_NAMES)}")
    if any(d < 2 for d in dims):
        raise ParameterError("suite dimensions must be >= 2")
    generators = {spec: parse_generator(spec) for spec in generator_specs}
    report = RunReport(
        command=command,
        suite=name,
        seed=seed,
        dims=tuple(dims),
        generators=tuple(generator_specs),
        tolerances=tols.as_dict(),
    )
    started = time.perf_counter()
    selected = _SUITES.values() if name == "all" else (_SUITES[name],)
    for suite_fn in selected:
        suite_fn(report, dims, generators, seed, tols)
    report.wall_time_s = time.perf_counter() - started
    return report
