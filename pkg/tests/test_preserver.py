import math

import numpy as np
import pytest

from statediv import (
    DegenerateProbeError,
    NotAPreserverError,
    OracleError,
    ParameterError,
    PreserverOracle,
    RangeError,
    RankOneProjection,
    SearchBudget,
    SymmetryOp,
    TransitionTable,
    ValidationError,
    bregman,
    bregman_rank_one_pair,
    conjugation_oracle,
    density_state,
    depolarizing_oracle,
    diagonal_oracle,
    haar_unitary,
    is_pure_by_max,
    jensen,
    jensen_max_constant,
    max_divergence_functional,
    max_probe_residual,
    parse_generator,
    probe_labels,
    probe_transitions_via_divergence,
    pure_reference_value,
    quadratic,
    random_pure,
    random_state,
    rank_two_mixture,
    rank_two_offset,
    recover_rank_two_spectrum,
    rng_for,
    std_entropy,
    transition_from_bregman,
    transition_from_bregman_rank_two,
    transition_from_jensen,
    transition_probability,
    transpose_oracle,
    verify_preserver,
    wigner_probes,
    wigner_reconstruct,
)
from conftest import mixed_state_with_gap, orthogonal_pure_pair

XLOGX = std_entropy()
QUAD = quadratic()
P15 = parse_generator("power:q=3/2")
FINITE_GENERATORS = [P15, QUAD]
ALL_GENERATORS = [XLOGX, P15, QUAD]


class TestTransitionFromBregman:
    def test_zero_divergence_means_equal(self):
        assert transition_from_bregman(QUAD, 0.0) == 1.0

    def test_quadratic_span_endpoint(self):
        # f'(1) - f'(0) = 2 for the quadratic generator.
        assert transition_from_bregman(QUAD, 2.0) == 0.0

    def test_quadratic_midpoint(self):
        assert transition_from_bregman(QUAD, 1.0) == pytest.approx(0.5, abs=1e-14)

    def test_out_of_range(self):
        with pytest.raises(RangeError):
            transition_from_bregman(QUAD, 2.5)
        with pytest.raises(RangeError):
            transition_from_bregman(QUAD, -0.5)

    def test_infinite_class_unsupported(self):
        with pytest.raises(ParameterError):
            transition_from_bregman(XLOGX, 0.3)

    @pytest.mark.parametrize("f", FINITE_GENERATORS, ids=lambda f: f.name)
    @pytest.mark.parametrize("dim", [2, 3, 5, 8])
    def test_roundtrip_random_pairs(self, f, dim):
        rng = rng_for(1300 + dim)
        for _ in range(10):
            p, q = random_pure(dim, rng), random_pure(dim, rng)
            h = bregman_rank_one_pair(f, p, q)
            assert transition_from_bregman(f, h) == pytest.approx(
                transition_probability(p, q), abs=1e-8
            )


class TestTransitionFromJensen:
    def test_endpoints(self):
        for f in ALL_GENERATORS:
            assert transition_from_jensen(f, 0.0) == pytest.approx(1.0, abs=1e-9)
            assert transition_from_jensen(f, jensen_max_constant(f)) == pytest.approx(0.0, abs=1e-9)

    def test_quadratic_quarter(self):
        # jensen_rank_one(quadratic, p) = (1 - p)/2, so j = 1/4 inverts to 1/2.
        assert transition_from_jensen(QUAD, 0.25) == pytest.approx(0.5, abs=1e-9)

    def test_out_of_range(self):
        with pytest.raises(RangeError):
            transition_from_jensen(QUAD, 0.6)
        with pytest.raises(RangeError):
            transition_from_jensen(QUAD, -0.1)

    @pytest.mark.parametrize("f", ALL_GENERATORS, ids=lambda f: f.name)
    @pytest.mark.parametrize("dim", [2, 3, 5, 8])
    def test_roundtrip_random_pairs(self, f, dim):
        rng = rng_for(1400 + dim)
        for _ in range(10):
            p, q = random_pure(dim, rng), random_pure(dim, rng)
            j = jensen(f, p.to_state(), q.to_state())
            assert transition_from_jensen(f, j) == pytest.approx(
                transition_probability(p, q), abs=1e-6
            )


class TestTransitionRankTwoDevice:
    @pytest.mark.parametrize("f", ALL_GENERATORS, ids=lambda f: f.name)
    def test_roundtrip_inside_span(self, f):
        rng = rng_for(141)
        for dim in (2, 3, 4):
            p, q = orthogonal_pure_pair(dim, rng)
            lam = 0.25
            for _ in range(5):
                theta = float(rng.uniform(0.0, math.pi / 2))
                r = RankOneProjection.from_vector(
                    math.cos(theta) * p.vector + math.sin(theta) * np.exp(0.9j) * q.vector
                )
                value = bregman(f, r.to_state(), rank_two_mixture(lam, p, q))
                recovered = transition_from_bregman_rank_two(f, lam, value)
                assert recovered == pytest.approx(transition_probability(r, p), abs=1e-8)

    def test_out_of_range(self):
        lam = 0.25
        high = -QUAD.slope(lam) + rank_two_offset(QUAD, lam)
        with pytest.raises(RangeError):
            transition_from_bregman_rank_two(QUAD, lam, high + 1.0)


class TestSpectrumRecovery:
    def test_quadratic_linear_gap(self):
        # delta = 2(1 - 2 lam), so delta = 1 gives lam = 1/4.
        assert recover_rank_two_spectrum(QUAD, 1.0) == pytest.approx(0.25, abs=1e-8)

    def test_xlogx_log_odds(self):
        # delta = log((1 - lam)/lam), so delta = log 3 gives lam = 1/4.
        assert recover_rank_two_spectrum(XLOGX, math.log(3.0)) == pytest.approx(0.25, abs=1e-8)

    def test_boundary_behavior(self):
        assert recover_rank_two_spectrum(XLOGX, 1e-6) == pytest.approx(0.5, abs=1e-5)

    @pytest.mark.parametrize("f", ALL_GENERATORS, ids=lambda f: f.name)
    def test_roundtrip_random_lambdas(self, f):
        rng = rng_for(151)
        for _ in range(25):
            lam = float(rng.uniform(0.01, 0.49))
            delta = f.slope(1.0 - lam) - f.slope(lam)
            assert recover_rank_two_spectrum(f, delta) == pytest.approx(lam, abs=1e-8)

    def test_range_errors(self):
        with pytest.raises(RangeError):
            recover_rank_two_spectrum(QUAD, 0.0)
        with pytest.raises(RangeError):
            recover_rank_two_spectrum(QUAD, -1.0)
        with pytest.raises(RangeError):
            recover_rank_two_spectrum(QUAD, 2.5)  # beyond f'(1) - f'(0) = 2


class TestRankTwoExtremalValues:
    @pytest.mark.parametrize("f", ALL_GENERATORS, ids=lambda f: f.name)
    def test_sampled_extremes_approach_closed_forms(self, f):
        rng = rng_for(161)
        p, q = orthogonal_pure_pair(3, rng)
        lam = 0.3
        mixture = rank_two_mixture(lam, p, q)
        offset = rank_two_offset(f, lam)
        top = -f.slope(lam) + offset
        bottom = -f.slope(1.0 - lam) + offset
        values = []
        for _ in range(500):
            theta = float(rng.uniform(0.0, math.pi / 2))
            phase = np.exp(1j * float(rng.uniform(0.0, 2 * math.pi)))
            r = RankOneProjection.from_vector(
                math.cos(theta) * p.vector + math.sin(theta) * phase * q.vector
            )
            values.append(bregman(f, r.to_state(), mixture))
        values = np.array(values)
        assert np.all(values <= top + 1e-9)
        assert np.all(values >= bottom - 1e-9)
        # sampling resolution: 500 draws come close to both extremes
        assert top - values.max() < 0.05 * (top - bottom)
        assert values.min() - bottom < 0.05 * (top - bottom)


class TestMaxDivergenceFunctional:
    def test_quadratic_pure_qubit(self):
        # max over the Bloch ball of tr(P - D)^2 is 2, at the antipodal pure state.
        pure = density_state(np.diag([1.0, 0.0]))
        assert max_divergence_functional(QUAD, pure) == pytest.approx(2.0, abs=1e-9)

    def test_quadratic_maximally_mixed_qubit(self):
        mixed = density_state(np.eye(2) / 2)
        assert max_divergence_functional(QUAD, mixed) == pytest.approx(0.5, abs=1e-9)

    @pytest.mark.parametrize("f", FINITE_GENERATORS, ids=lambda f: f.name)
    @pytest.mark.parametrize("dim", [2, 3])
    def test_pure_exceeds_maximally_mixed(self, f, dim):
        rng = rng_for(171)
        pure = random_pure(dim, rng).to_state()
        mixed = density_state(np.eye(dim) / dim)
        assert max_divergence_functional(f, pure) > max_divergence_functional(f, mixed)

    def test_infinite_class_rejected(self):
        with pytest.raises(ParameterError):
            max_divergence_functional(XLOGX, density_state(np.eye(2) / 2))

    def test_search_is_lower_bound_certified_by_samples(self):
        rng = rng_for(172)
        x = random_state(3, rng=rng)
        best = max_divergence_functional(QUAD, x)
        for _ in range(50):
            d = random_state(3, rng=rng)
            assert bregman(QUAD, x, d) <= best + 1e-9

    def test_deterministic_given_budget(self):
        rng = rng_for(173)
        x = random_state(3, rng=rng)
        budget = SearchBudget(n_random=64, refine_steps=10, seed=5)
        assert max_divergence_functional(P15, x, budget) == max_divergence_functional(
            P15, x, budget
        )


class TestPurityDetection:
    @pytest.mark.parametrize("f", FINITE_GENERATORS, ids=lambda f: f.name)
    @pytest.mark.parametrize("dim", [2, 3])
    def test_examples(self, f, dim):
        rng = rng_for(1800 + dim)
        ref = pure_reference_value(f, dim)
        assert is_pure_by_max(f, random_pure(dim, rng).to_state(), ref)
        assert not is_pure_by_max(f, density_state(np.eye(dim) / dim), ref)

    def test_slightly_mixed_rejected(self):
        rng = rng_for(181)
        basis = haar_unitary(3, rng)
        weights = np.array([0.9, 0.1, 0.0])
        matrix = (basis * weights) @ basis.conj().T
        state = density_state((matrix + matrix.conj().T) / 2)
        ref = pure_reference_value(QUAD, 3)
        assert not is_pure_by_max(QUAD, state, ref)

    @pytest.mark.parametrize("f", FINITE_GENERATORS, ids=lambda f: f.name)
    @pytest.mark.parametrize("dim", [2, 3])
    def test_separation_margin(self, f, dim):
        # Pure values cluster together; mixed values (eigenvalue gap >= 0.1)
        # stay strictly below all of them.
        rng = rng_for(1900 + dim)
        pure_values = [
            max_divergence_functional(f, random_pure(dim, rng).to_state()) for _ in range(10)
        ]
        mixed_values = [
            max_divergence_functional(f, mixed_state_with_gap(dim, rng)) for _ in range(10)
        ]
        assert min(pure_values) - max(mixed_values) > 0.01


class TestWignerProbes:
    def test_family_size_and_labels(self):
        for dim in (2, 3, 5):
            probes = wigner_probes(dim)
            labels = probe_labels(dim)
            assert len(probes) == 2 * dim
            assert len(labels) == 2 * dim
            assert labels[0] == "e1"
            assert labels[-1] == "e1+i*e2"

    def test_dim_one_rejected(self):
        with pytest.raises(ParameterError):
            wigner_probes(1)

    def test_transition_table_of_basis_part_is_doubly_stochastic(self):
        probes = wigner_probes(4)[:4]
        table = TransitionTable.direct(probes)
        assert table.is_doubly_stochastic()


class TestWignerReconstruct:
    def test_identity_images(self):
        probes = wigner_probes(3)
        op = wigner_reconstruct(probes)
        assert not op.antiunitary
        np.testing.assert_allclose(op.matrix, np.eye(3), atol=1e-9)

    def test_conjugated_images_detect_antiunitary(self):
        # Entrywise conjugation fixes the real probes and flips the i-probe.
        probes = wigner_probes(3)
        images = [RankOneProjection.from_vector(np.conj(p.vector)) for p in probes]
        op = wigner_reconstruct(images)
        assert op.antiunitary
        np.testing.assert_allclose(op.matrix, np.eye(3), atol=1e-9)

    @pytest.mark.parametrize("dim", [2, 3, 4, 5])
    @pytest.mark.parametrize("antiunitary", [False, True])
    def test_seeded_roundtrip(self, dim, antiunitary):
        rng = rng_for(2000 + dim + int(antiunitary))
        source = SymmetryOp(matrix=haar_unitary(dim, rng), antiunitary=antiunitary)
        images = [source.apply_projection(p) for p in wigner_probes(dim)]
        rebuilt = wigner_reconstruct(images)
        assert rebuilt.antiunitary == antiunitary
        worst = 0.0
        for _ in range(100):
            r = random_pure(dim, rng)
            worst = max(
                worst,
                float(np.max(np.abs(rebuilt.apply_matrix(r.matrix) - source.apply_matrix(r.matrix)))),
            )
        assert worst < 1e-8

    def test_phase_convention(self):
        rng = rng_for(201)
        source = SymmetryOp(matrix=haar_unitary(4, rng), antiunitary=False)
        images = [source.apply_projection(p) for p in wigner_probes(4)]
        rebuilt = wigner_reconstruct(images)
        first = rebuilt.matrix[np.argmax(np.abs(rebuilt.matrix[:, 0]) > 1e-9), 0]
        leading = next(x for x in rebuilt.matrix[:, 0] if abs(x) > 1e-9)
        assert abs(leading.imag) < 1e-9
        assert leading.real > 0

    def test_corrupted_probe_rejected(self):
        rng = rng_for(202)
        source = SymmetryOp(matrix=haar_unitary(3, rng), antiunitary=False)
        images = [source.apply_projection(p) for p in wigner_probes(3)]
        images[4] = random_pure(3, rng)  # replace one superposition image
        with pytest.raises(NotAPreserverError):
            wigner_reconstruct(images)

    def test_inconsistent_transitions_name_the_pair(self):
        probes = wigner_probes(2)
        images = list(probes)
        images[1] = probes[0]  # e2 mapped onto e1: transitions break
        with pytest.raises(NotAPreserverError, match="e1"):
            wigner_reconstruct(images)

    def test_degenerate_phase_probe(self):
        # Bypass the transition gate with a huge tolerance; the phase fix then
        # has nothing to hold on to and must flag degeneracy.
        eye = np.eye(2, dtype=complex)
        images = [
            RankOneProjection.from_vector(eye[:, 0]),
            RankOneProjection.from_vector(eye[:, 1]),
            RankOneProjection.from_vector(eye[:, 1]),  # superposition image orthogonal to psi1
            RankOneProjection.from_vector(eye[:, 0] + 1j * eye[:, 1]),
        ]
        with pytest.raises(DegenerateProbeError):
            wigner_reconstruct(images, wigner_tol=10.0)

    def test_wrong_count_rejected(self):
        with pytest.raises(ParameterError):
            wigner_reconstruct(wigner_probes(3)[:-1])


class TestTransitionsViaDivergence:
    @pytest.mark.parametrize("f", ALL_GENERATORS, ids=lambda f: f.name)
    @pytest.mark.parametrize("kind", ["bregman", "jensen"])
    def test_recovers_direct_table(self, f, kind):
        probes = wigner_probes(3)
        direct = TransitionTable.direct(probes)
        recovered = probe_transitions_via_divergence(f, probes, kind)
        assert recovered.max_deviation(direct) < 1e-6

    def test_case_one_uses_rank_two_probing(self):
        # xlogx rank-one Bregman values are 0/inf; the recovered table must
        # still match, which exercises the mixture device.
        rng = rng_for(211)
        family = [random_pure(3, rng) for _ in range(4)]
        direct = TransitionTable.direct(family)
        recovered = probe_transitions_via_divergence(XLOGX, family, "bregman")
        assert recovered.max_deviation(direct) < 1e-8


class TestVerifyPreserver:
    def test_unitary_conjugation_bregman_xlogx(self):
        rng = rng_for(221)
        op = SymmetryOp(matrix=haar_unitary(3, rng), antiunitary=False)
        outcome = verify_preserver(XLOGX, conjugation_oracle(op), "bregman", sample_size=8, seed=3)
        assert outcome.passed
        assert outcome.max_divergence_deviation < 1e-8
        assert outcome.max_state_residual < 1e-8
        assert outcome.max_probe_residual < 1e-8
        assert outcome.antiunitary is False
        assert outcome.max_transition_recovery_deviation < 1e-6

    def test_transpose_is_antiunitary_preserver(self):
        outcome = verify_preserver(XLOGX, transpose_oracle(3), "jensen", sample_size=8, seed=4)
        assert outcome.passed
        assert outcome.antiunitary is True
        assert outcome.max_divergence_deviation < 1e-8
        assert outcome.max_state_residual < 1e-8

    def test_depolarizing_flagged(self):
        outcome = verify_preserver(
            XLOGX, depolarizing_oracle(3, 0.5), "bregman", sample_size=8, seed=5
        )
        assert not outcome.passed
        assert outcome.max_divergence_deviation > 1e-3
        assert not outcome.probe_images_rank_one

    def test_diagonal_projection_flagged(self):
        outcome = verify_preserver(QUAD, diagonal_oracle(3), "jensen", sample_size=8, seed=6)
        assert not outcome.passed
        assert outcome.max_divergence_deviation > 1e-3

    def test_report_is_serializable(self):
        import json

        rng = rng_for(222)
        op = SymmetryOp(matrix=haar_unitary(2, rng), antiunitary=True)
        outcome = verify_preserver(P15, conjugation_oracle(op), "bregman", sample_size=4, seed=7)
        payload = json.dumps(outcome.to_dict())
        assert "antiunitary" in payload

    def test_bad_kind_rejected(self):
        rng = rng_for(223)
        op = SymmetryOp(matrix=haar_unitary(2, rng), antiunitary=False)
        with pytest.raises(ParameterError):
            verify_preserver(QUAD, conjugation_oracle(op), "hellinger")


class TestOracles:
    def test_oracle_validates_output_dimension(self):
        bad = PreserverOracle(dim=2, mapping=lambda s: density_state(np.eye(3) / 3), label="bad")
        with pytest.raises(OracleError):
            bad(density_state(np.eye(2) / 2))

    def test_oracle_validates_output_type(self):
        bad = PreserverOracle(dim=2, mapping=lambda s: s.matrix, label="bad")
        with pytest.raises(OracleError):
            bad(density_state(np.eye(2) / 2))

    def test_table_oracle_lookup(self):
        rng = rng_for(231)
        a, b = random_state(2, rng=rng), random_state(2, rng=rng)
        oracle = PreserverOracle.from_pairs([(a, b)])
        out = oracle(a)
        np.testing.assert_allclose(out.matrix, b.matrix)
        with pytest.raises(OracleError):
            oracle(density_state(np.eye(2) / 2))

    def test_symmetry_op_validation(self):
        with pytest.raises(ValidationError):
            SymmetryOp.from_matrix(np.ones((2, 2)))
        rng = rng_for(232)
        op = SymmetryOp.from_matrix(haar_unitary(3, rng), antiunitary=True)
        assert op.antiunitary
