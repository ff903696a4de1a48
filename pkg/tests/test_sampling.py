from itertools import combinations

import numpy as np
import pytest

from glctkit import (
    DETERMINISTIC_STRATEGIES,
    BandlimitSpec,
    GFT_PARAMS,
    GlctParams,
    SamplingOperator,
    SpectralSet,
    Strategy,
    ValidationError,
    adjacency,
    band_columns,
    bandlimit,
    build_operator,
    cycle_graph,
    exhaustive_select,
    greedy_select,
    is_perfectly_localized,
    is_qualified,
    nmse,
    random_geometric_graph,
    recover,
    recoverability_margin,
    recovery_operator,
    sample,
    sampled_adjacency,
    selection_objective,
    spectral_limiter,
)
from conftest import random_signal


class TestBandlimit:
    def test_full_band_is_identity(self, cycle32_op):
        rng = np.random.default_rng(0)
        y = random_signal(rng, 32)
        out = bandlimit(y, cycle32_op, BandlimitSpec(32))
        assert np.linalg.norm(out - y) / np.linalg.norm(y) < 1e-9

    def test_band_atom_unchanged(self, cycle32_op):
        spec = BandlimitSpec(4)
        atom = cycle32_op.inverse[:, 1]
        assert np.linalg.norm(bandlimit(atom, cycle32_op, spec) - atom) < 1e-8

    def test_out_of_band_atom_killed(self, cycle32_op):
        spec = BandlimitSpec(4)
        atom = cycle32_op.inverse[:, 10]
        assert np.linalg.norm(bandlimit(atom, cycle32_op, spec)) < 1e-8

    def test_output_is_band_localized(self, cycle32_op):
        rng = np.random.default_rng(1)
        spec = BandlimitSpec(4)
        x = bandlimit(random_signal(rng, 32), cycle32_op, spec)
        b = spectral_limiter(SpectralSet((0, 1, 2, 3), 32), cycle32_op)
        assert is_perfectly_localized(x, b, tol=1e-8)


class TestSample:
    def test_identity_ordering(self):
        d = SamplingOperator(tuple(range(3)), 3)
        x = np.array([5.0, 7.0, 9.0])
        assert np.array_equal(sample(x, d), x.astype(complex))

    def test_single_vertex(self):
        d = SamplingOperator((2,), 3)
        assert np.array_equal(sample(np.array([5.0, 7.0, 9.0]), d), np.array([9.0 + 0j]))

    def test_matrix_rows_are_one_hot(self):
        d = SamplingOperator((2, 0), 4)
        expected = np.zeros((2, 4))
        expected[0, 2] = expected[1, 0] = 1.0
        assert np.array_equal(d.matrix, expected)

    def test_duplicate_vertices_rejected(self):
        with pytest.raises(ValidationError):
            SamplingOperator((1, 1), 4)


class TestQualification:
    def test_fewer_samples_than_band_never_qualifies(self, cycle32_op):
        spec = BandlimitSpec(4)
        d = SamplingOperator((0, 1, 2), 32)
        assert not is_qualified(d, cycle32_op, spec)

    def test_all_vertices_always_qualify(self, cycle32_op):
        spec = BandlimitSpec(7)
        d = SamplingOperator(tuple(range(32)), 32)
        assert is_qualified(d, cycle32_op, spec)

    def test_exhaustive_determinant_oracle(self, cycle10_op):
        """Every 3-subset's qualification matches a plain determinant check
        of the corresponding square submatrix."""
        spec = BandlimitSpec(3)
        cols = band_columns(cycle10_op, spec)
        dets = []
        for subset in combinations(range(10), 3):
            det = abs(np.linalg.det(cols[list(subset), :]))
            dets.append(det)
            expected = det > 1e-12 * 0.24  # 0.24 bounds the largest observed det
            assert is_qualified(SamplingOperator(subset, 10), cycle10_op, spec) == expected
        assert max(dets) < 0.24

    def test_structurally_unqualified_set(self, two_triangle_graph):
        """All samples on one component leave the other component's band
        direction invisible."""
        op = build_operator(adjacency(two_triangle_graph), GFT_PARAMS)
        spec = BandlimitSpec(2)
        d = SamplingOperator((0, 1, 2), 6)
        assert not is_qualified(d, op, spec)


class TestRecovery:
    def test_square_qualified_inverts_exactly(self, cycle32_op):
        spec = BandlimitSpec(4)
        d = greedy_select(Strategy.MAX_SIG_MIN, cycle32_op, spec, 4)
        r = recovery_operator(d, cycle32_op, spec)
        assert r.qualified
        pinv_product = np.linalg.pinv(band_columns(cycle32_op, spec)[list(d.set), :], rcond=1e-10)
        product = pinv_product @ band_columns(cycle32_op, spec)[list(d.set), :]
        assert np.linalg.norm(product - np.eye(4)) < 1e-8

    def test_full_sampling_recovers_band_projector(self, cycle32_op):
        spec = BandlimitSpec(4)
        d = SamplingOperator(tuple(range(32)), 32)
        r = recovery_operator(d, cycle32_op, spec)
        b = spectral_limiter(SpectralSet((0, 1, 2, 3), 32), cycle32_op)
        assert np.linalg.norm(r.matrix @ d.matrix - b.matrix) < 1e-8

    def test_recovery_map_is_projection(self, cycle32_op):
        rng = np.random.default_rng(2)
        spec = BandlimitSpec(4)
        for m in (4, 6, 9):
            d = greedy_select(Strategy.MAX_VOL, cycle32_op, spec, m)
            r = recovery_operator(d, cycle32_op, spec)
            j = r.matrix @ d.matrix
            assert np.linalg.norm(j @ j - j) < 1e-7

    def test_perfect_recovery_of_bandlimited(self, cycle32_op):
        rng = np.random.default_rng(3)
        spec = BandlimitSpec(4)
        d = greedy_select(Strategy.MIN_FRO, cycle32_op, spec, 4)
        r = recovery_operator(d, cycle32_op, spec)
        for _ in range(5):
            x = bandlimit(random_signal(rng, 32), cycle32_op, spec)
            xr = recover(sample(x, d), r)
            assert np.linalg.norm(xr - x) / np.linalg.norm(x) < 1e-9

    def test_recover_zero_samples(self, cycle32_op):
        spec = BandlimitSpec(4)
        d = greedy_select(Strategy.MAX_SIG, cycle32_op, spec, 4)
        r = recovery_operator(d, cycle32_op, spec)
        assert np.array_equal(recover(np.zeros(4), r), np.zeros(32, dtype=complex))

    def test_noise_passes_through_linearly(self, cycle32_op):
        rng = np.random.default_rng(4)
        spec = BandlimitSpec(4)
        d = greedy_select(Strategy.MAX_SIG_MIN, cycle32_op, spec, 6)
        r = recovery_operator(d, cycle32_op, spec)
        x = bandlimit(random_signal(rng, 32), cycle32_op, spec)
        e = 0.01 * random_signal(rng, 6)
        xr = recover(sample(x, d) + e, r)
        assert np.allclose(xr, x + r.matrix @ e, atol=1e-10)

    def test_unqualified_recovery_warns_and_misses_null_direction(self, two_triangle_graph):
        op = build_operator(adjacency(two_triangle_graph), GFT_PARAMS)
        spec = BandlimitSpec(2)
        d = SamplingOperator((0, 1, 2), 6)
        with pytest.warns(UserWarning, match="not qualified"):
            r = recovery_operator(d, op, spec)
        assert not r.qualified
        # The invisible direction: second band atom lives on the other triangle.
        x = op.inverse[:, 1]
        assert nmse(x, recover(sample(x, d), r)) > 1e-3


class TestNmse:
    def test_exact_recovery_is_zero(self):
        x = np.array([1.0, 2.0])
        assert nmse(x, x) == 0.0

    def test_zero_estimate_is_one(self):
        x = np.array([1.0, 2.0])
        assert nmse(x, np.zeros(2)) == 1.0

    def test_double_estimate_is_one(self):
        x = np.array([1.0, 2.0])
        assert nmse(x, 2 * x) == 1.0

    def test_zero_reference_rejected(self):
        with pytest.raises(ValidationError):
            nmse(np.zeros(2), np.ones(2))


class TestRecoverabilityMargin:
    def test_full_sampling_margin_is_zero(self, cycle32_op):
        b = spectral_limiter(SpectralSet((0, 1, 2, 3), 32), cycle32_op)
        d = SamplingOperator(tuple(range(32)), 32)
        assert recoverability_margin(d, b) < 1e-9

    def test_empty_sampling_margin_is_one(self, cycle32_op):
        b = spectral_limiter(SpectralSet((0, 1, 2, 3), 32), cycle32_op)
        d = SamplingOperator((), 32)
        assert abs(recoverability_margin(d, b) - 1.0) < 1e-9

    def test_margin_equals_joint_eigenvalue_sqrt(self, cycle32_op):
        from glctkit import Limiter, joint_lambda_max

        b = spectral_limiter(SpectralSet((0, 1, 2, 3), 32), cycle32_op)
        d = SamplingOperator(tuple(range(0, 32, 2)), 32)
        margin = recoverability_margin(d, b)
        dbar = Limiter(d.complement_projector(), "vertex")
        assert margin == pytest.approx(np.sqrt(joint_lambda_max(b, dbar)), abs=1e-8)

    def test_margin_certifies_qualification(self, cycle32_op, two_triangle_graph):
        """margin < 1 exactly when the set is qualified, over assorted sets."""
        spec = BandlimitSpec(4)
        b = spectral_limiter(SpectralSet((0, 1, 2, 3), 32), cycle32_op)
        for m in (4, 5, 8, 16):
            d = greedy_select(Strategy.MAX_SIG_MIN, cycle32_op, spec, m)
            assert is_qualified(d, cycle32_op, spec)
            assert recoverability_margin(d, b) < 1 - 1e-9

        op = build_operator(adjacency(two_triangle_graph), GFT_PARAMS)
        spec2 = BandlimitSpec(2)
        b2 = spectral_limiter(SpectralSet((0, 1), 6), op)
        bad = SamplingOperator((0, 1, 2), 6)
        assert not is_qualified(bad, op, spec2)
        assert recoverability_margin(bad, b2) > 1 - 1e-9


class TestSampledAdjacency:
    def test_spectrum_matches_band_eigenvalues(self, cycle10_op):
        spec = BandlimitSpec(3)
        d = greedy_select(Strategy.MAX_SIG_MIN, cycle10_op, spec, 3)
        ams = sampled_adjacency(d, cycle10_op, spec, cycle10_op.basis.lam_a)
        got = np.sort_complex(np.linalg.eigvals(ams))
        want = np.sort_complex(cycle10_op.basis.lam_a[:3])
        assert np.abs(got - want).max() < 1e-8

    def test_shift_commutes_with_sampling(self, cycle10_op):
        spec = BandlimitSpec(3)
        d = greedy_select(Strategy.MAX_SIG_MIN, cycle10_op, spec, 3)
        lam_a = cycle10_op.basis.lam_a
        ams = sampled_adjacency(d, cycle10_op, spec, lam_a)
        shift = cycle10_op.inverse @ (lam_a[:, None] * cycle10_op.forward)
        rng = np.random.default_rng(6)
        for _ in range(20):
            x = bandlimit(random_signal(rng, 10), cycle10_op, spec)
            xs = sample(x, d)
            lhs = xs - ams @ xs
            rhs = sample(x - shift @ x, d)
            assert np.abs(lhs - rhs).max() < 1e-7

    def test_requires_square_qualified_set(self, cycle10_op):
        spec = BandlimitSpec(3)
        with pytest.raises(ValidationError):
            sampled_adjacency(
                SamplingOperator((0, 1, 2, 3), 10), cycle10_op, spec, cycle10_op.basis.lam_a
            )


class TestGreedySelect:
    def test_selecting_all_vertices(self, cycle10_op):
        spec = BandlimitSpec(3)
        for strategy in DETERMINISTIC_STRATEGIES:
            d = greedy_select(strategy, cycle10_op, spec, 10)
            assert sorted(d.set) == list(range(10))

    def test_all_strategies_recover_perfectly_at_band_size(self, cycle32_op):
        rng = np.random.default_rng(7)
        spec = BandlimitSpec(4)
        for strategy in DETERMINISTIC_STRATEGIES:
            d = greedy_select(strategy, cycle32_op, spec, 4)
            assert is_qualified(d, cycle32_op, spec)
            r = recovery_operator(d, cycle32_op, spec)
            x = bandlimit(random_signal(rng, 32), cycle32_op, spec)
            assert nmse(x, recover(sample(x, d), r)) < 1e-10

    @pytest.mark.parametrize("band", [4, 10])
    @pytest.mark.parametrize("graph_name", ["cycle32", "geometric100"])
    def test_perfect_recovery_matrix(self, graph_name, band, cycle32_op):
        """Every deterministic strategy at m equal to the band size recovers
        20 random bandlimited signals exactly, on both reference graphs."""
        if graph_name == "cycle32":
            op = cycle32_op
        else:
            g = random_geometric_graph(100, 0.2, 7)
            op = build_operator(adjacency(g), GlctParams(0.7, 50.0, 0.5, 0.5))
        spec = BandlimitSpec(band)
        rng = np.random.default_rng(8)
        signals = [bandlimit(random_signal(rng, op.n), op, spec) for _ in range(20)]
        for strategy in DETERMINISTIC_STRATEGIES:
            d = greedy_select(strategy, op, spec, band)
            assert is_qualified(d, op, spec)
            r = recovery_operator(d, op, spec)
            for x in signals:
                assert nmse(x, recover(sample(x, d), r)) < 1e-10

    def test_random_strategy_is_seeded(self, cycle32_op):
        spec = BandlimitSpec(4)
        d1 = greedy_select(Strategy.RANDOM, cycle32_op, spec, 6, seed=1)
        d2 = greedy_select(Strategy.RANDOM, cycle32_op, spec, 6, seed=1)
        d3 = greedy_select(Strategy.RANDOM, cycle32_op, spec, 6, seed=2)
        assert d1 == d2
        assert d1 != d3

    def test_threaded_scoring_matches_serial(self, cycle32_op):
        spec = BandlimitSpec(4)
        for strategy in (Strategy.MAX_SIG_MIN, Strategy.MIN_FRO):
            serial = greedy_select(strategy, cycle32_op, spec, 8, threads=1)
            threaded = greedy_select(strategy, cycle32_op, spec, 8, threads=4)
            assert serial == threaded

    def test_sample_count_validated(self, cycle32_op):
        with pytest.raises(ValidationError):
            greedy_select(Strategy.MAX_SIG, cycle32_op, BandlimitSpec(4), 33)

    def test_greedy_sets_are_nested(self, cycle32_op):
        spec = BandlimitSpec(4)
        d_small = greedy_select(Strategy.MAX_VOL, cycle32_op, spec, 4)
        d_large = greedy_select(Strategy.MAX_VOL, cycle32_op, spec, 8)
        assert d_large.set[:4] == d_small.set


class TestExhaustiveSelect:
    # Regression goldens: greedy and exhaustive objective ratios computed once
    # on the 10-cycle with band size 3 and frozen (exact reproduction expected).
    GOLDEN_RATIOS = {
        Strategy.MIN_FRO: 1.0401064252070467,
        Strategy.MAX_VOL: 1.0000000000000009,
        Strategy.MAX_SIG_MIN: 0.91119392279433,
        Strategy.MAX_SIG: 0.9999999999999992,
    }

    def test_exhaustive_never_worse_and_ratios_frozen(self, cycle10_op):
        spec = BandlimitSpec(3)
        for strategy, golden in self.GOLDEN_RATIOS.items():
            d_greedy = greedy_select(strategy, cycle10_op, spec, 3)
            d_exh = exhaustive_select(strategy, cycle10_op, spec, 3)
            obj_greedy = selection_objective(d_greedy.set, cycle10_op, spec, strategy)
            obj_exh = selection_objective(d_exh.set, cycle10_op, spec, strategy)
            assert obj_exh >= obj_greedy
            assert obj_greedy[1] / obj_exh[1] == golden

    def test_m_equals_n(self, cycle10_op):
        d = exhaustive_select(Strategy.MAX_VOL, cycle10_op, BandlimitSpec(3), 10)
        assert d.set == tuple(range(10))

    def test_matches_independent_determinant_maximization(self):
        g = cycle_graph(6)
        op = build_operator(adjacency(g), GFT_PARAMS)
        spec = BandlimitSpec(2)
        d = exhaustive_select(Strategy.MAX_VOL, op, spec, 2)
        cols = band_columns(op, spec)
        best = max(
            combinations(range(6), 2),
            key=lambda s: abs(np.linalg.det(cols[list(s), :])),
        )
        got = abs(np.linalg.det(cols[list(d.set), :]))
        want = abs(np.linalg.det(cols[list(best), :]))
        assert got == pytest.approx(want, abs=1e-12)

    def test_random_is_not_an_objective(self, cycle10_op):
        with pytest.raises(ValidationError, match="not an optimizing strategy"):
            exhaustive_select(Strategy.RANDOM, cycle10_op, BandlimitSpec(3), 3)

    def test_combinatorial_guard(self, cycle32_op):
        with pytest.raises(ValidationError, match="greedy"):
            exhaustive_select(Strategy.MAX_VOL, cycle32_op, BandlimitSpec(4), 16)


class TestInternalConsistency:
    def test_singular_values_match_gram_eigenvalues(self, cycle32_op):
        spec = BandlimitSpec(4)
        sub = band_columns(cycle32_op, spec)[[3, 7, 11, 19], :]
        sv2 = np.sort(np.linalg.svd(sub, compute_uv=False) ** 2)
        gram = np.sort(np.linalg.eigvalsh(sub.conj().T @ sub))
        assert np.abs(sv2 - gram).max() < 1e-10
