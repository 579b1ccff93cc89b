from __future__ import annotations

import math

import numpy as np
import pytest

from sparsetrain.core import rate_distortion, snr_zero
from sparsetrain.errors import DomainError
from sparsetrain.model import GainModel, ModelParams
from sparsetrain.theory import (
    fletcher_compare,
    mmse_hc_step,
    mmse_hg_exact,
    mmse_hg_theory,
    penalty_bound,
    rdf_ratio,
    rip_counts,
    theory_curves,
    training_mutual_info,
)

HC, HG = GainModel.CONSTANT, GainModel.GAUSSIAN


class TestStepMMSE:
    @pytest.mark.parametrize(("factor", "expected"), [(0.5, 1.0), (2.0, 0.0), (1.0, 0.5)])
    def test_values(self, wide_params, factor, expected):
        snr = factor * snr_zero(wide_params)
        assert mmse_hc_step(snr, wide_params, 0.25) == pytest.approx(expected)

    def test_band_edges(self, wide_params):
        snr0 = snr_zero(wide_params)
        assert mmse_hc_step(0.75 * snr0, wide_params) == pytest.approx(1.0)
        assert mmse_hc_step(1.25 * snr0, wide_params) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("epsilon", [0.0, 1.0, -0.1])
    def test_epsilon_range(self, wide_params, epsilon):
        with pytest.raises(DomainError):
            mmse_hc_step(0.01, wide_params, epsilon)

    def test_nonpositive_snr(self, wide_params):
        with pytest.raises(DomainError):
            mmse_hc_step(0.0, wide_params)


class TestGaussianGainMMSE:
    def test_value_at_critical_snr(self, wide_params):
        value = mmse_hg_theory(snr_zero(wide_params), wide_params)
        closed = math.erf(1 / math.sqrt(2)) - math.sqrt(2 / math.pi) * math.exp(-0.5)
        assert value == pytest.approx(0.198748, abs=1e-5)
        assert value == pytest.approx(closed, abs=1e-15)

    def test_quadrature_matches_closed_form(self, wide_params):
        snr0 = snr_zero(wide_params)
        for snr in np.geomspace(1e-3, 1e3, 100) * snr0:
            closed = mmse_hg_theory(snr, wide_params)
            integrated = mmse_hg_theory(snr, wide_params, quadrature=True)
            assert abs(closed - integrated) < 1e-8

    def test_limits(self, wide_params):
        snr0 = snr_zero(wide_params)
        assert mmse_hg_theory(1e6 * snr0, wide_params) < 1e-6
        assert mmse_hg_theory(1e-6 * snr0, wide_params) == pytest.approx(1.0, abs=1e-9)

    def test_strictly_decreasing_inside_unit_interval(self, wide_params):
        grid = np.geomspace(0.01, 100, 60) * snr_zero(wide_params)
        values = np.array([mmse_hg_theory(s, wide_params) for s in grid])
        assert np.all(np.diff(values) < 0)
        assert np.all((values > 0) & (values < 1))

    def test_known_points(self, wide_params):
        snr0 = snr_zero(wide_params)
        assert mmse_hg_theory(0.25 * snr0, wide_params) == pytest.approx(0.7385, abs=1e-4)
        assert mmse_hg_theory(4 * snr0, wide_params) == pytest.approx(0.0309, abs=1e-4)

    def test_nonpositive_snr(self, wide_params):
        with pytest.raises(DomainError):
            mmse_hg_theory(0.0, wide_params)


class TestExactScalarMMSE:
    def test_dense_prior_is_linear_estimation_error(self):
        params = ModelParams(k_c=64, k_d=8, path_count=8, gain_model=HG)
        snr = 0.05
        c2 = snr * params.k_c
        expected = 1 / (c2 / params.path_count + 1)
        assert mmse_hg_exact(snr, params) == pytest.approx(expected, rel=1e-6)

    def test_decreasing_and_bounded(self, wide_params):
        grid = np.array([0.25, 0.5, 1.0, 2.0, 4.0]) * snr_zero(wide_params)
        values = np.array([mmse_hg_exact(s, wide_params) for s in grid])
        assert np.all(np.diff(values) < 0)
        assert np.all((values > 0) & (values < 1))

    def test_tends_to_full_energy_at_low_snr(self, wide_params):
        assert mmse_hg_exact(1e-6 * snr_zero(wide_params), wide_params) == pytest.approx(
            1.0, abs=1e-3
        )


class TestMutualInformation:
    def test_hc_linear_below_band(self, wide_params):
        snr = 0.5 * snr_zero(wide_params)
        expected = 0.5 * wide_params.k_c * snr
        assert training_mutual_info(snr, wide_params, HC) == pytest.approx(expected, rel=1e-6)

    def test_hc_reaches_cap_above_band(self, wide_params):
        snr = 1.5 * snr_zero(wide_params)
        assert training_mutual_info(snr, wide_params, HC) == pytest.approx(
            rate_distortion(wide_params), rel=1e-9
        )

    def test_hg_below_hc_below_cap(self, wide_params):
        snr0 = snr_zero(wide_params)
        hc = training_mutual_info(snr0, wide_params, HC)
        hg = training_mutual_info(snr0, wide_params, HG)
        assert 0 < hg < hc < rate_distortion(wide_params)
        assert hc == pytest.approx(0.9375 * rate_distortion(wide_params), rel=1e-6)

    def test_hg_approaches_cap(self, wide_params):
        snr = 1e4 * snr_zero(wide_params)
        assert training_mutual_info(snr, wide_params, HG) == pytest.approx(
            rate_distortion(wide_params), rel=0.02
        )

    @pytest.mark.parametrize("model", [HC, HG])
    def test_non_decreasing_and_bounded(self, wide_params, model):
        grid = np.geomspace(0.05, 8, 30) * snr_zero(wide_params)
        values = np.array([training_mutual_info(s, wide_params, model) for s in grid])
        assert np.all(np.diff(values) >= -1e-9)
        assert np.all(values <= rate_distortion(wide_params) + 1e-12)

    def test_nonpositive_snr(self, wide_params):
        with pytest.raises(DomainError):
            training_mutual_info(-1.0, wide_params, HC)


class TestPenalty:
    def test_no_training(self, wide_params):
        bound = penalty_bound(0.0, wide_params, HC)
        assert bound["penalty"] == pytest.approx(rate_distortion(wide_params))
        assert bound["rdf_after"] == bound["penalty"]

    def test_hc_vanishes_above_band(self, wide_params):
        penalty = penalty_bound(2 * snr_zero(wide_params), wide_params, HC)["penalty"]
        assert penalty == pytest.approx(0.0, abs=1e-6)

    @pytest.mark.parametrize("model", [HC, HG])
    def test_non_increasing_nonnegative(self, wide_params, model):
        grid = np.linspace(0.0, 3.0, 40) * snr_zero(wide_params)
        values = np.array([penalty_bound(s, wide_params, model)["penalty"] for s in grid])
        assert np.all(values >= 0)
        assert np.all(np.diff(values) <= 1e-9)

    def test_gaussian_gains_pay_more(self, wide_params):
        for s in np.geomspace(0.05, 4, 20) * snr_zero(wide_params):
            hg = penalty_bound(s, wide_params, HG)["penalty"]
            hc = penalty_bound(s, wide_params, HC)["penalty"]
            assert hg >= hc - 1e-9

    def test_negative_snr(self, wide_params):
        with pytest.raises(DomainError):
            penalty_bound(-0.1, wide_params, HC)

    def test_rdf_ratio_shapes(self, wide_params):
        snr0 = snr_zero(wide_params)
        below = np.linspace(0.05, 0.7, 14) * snr0
        hc = np.array([rdf_ratio(s, wide_params, HC) for s in below])
        np.testing.assert_allclose(hc, 1 - below / snr0, rtol=1e-6)

        grid = np.linspace(0.1, 3.0, 30) * snr0
        hg = np.array([rdf_ratio(s, wide_params, HG) for s in grid])
        assert np.all(np.diff(hg, 2) > -1e-9)
        assert np.all(np.diff(hg) < 0)

    def test_rdf_ratio_without_sparsity(self):
        params = ModelParams(k_c=64, k_d=16, path_count=16)
        assert rdf_ratio(0.1, params, HC) == 0.0


class TestRipCounts:
    def test_harmonic(self):
        counts = rip_counts(ModelParams(k_c=4096, k_d=1024, path_count=8), 1.0, 1.0)
        assert counts["harmonic_m"] == 1245

    def test_gaussian(self, wide_params):
        assert rip_counts(wide_params, 1.0, 4.0)["gaussian_m"] == 419

    def test_single_path_log_guard(self):
        counts = rip_counts(ModelParams(k_c=4096, k_d=1024, path_count=1), 2.0, 1.0)
        assert counts["harmonic_m"] == math.ceil(2.0 * math.log(4096))

    def test_constants_must_be_positive(self, wide_params):
        with pytest.raises(DomainError):
            rip_counts(wide_params, 0.0, 1.0)


class TestFletcherComparison:
    def test_table_values(self):
        record = fletcher_compare(ModelParams(k_c=4096, k_d=1024, path_count=8), 0.1)
        assert record.fletcher_energy == pytest.approx(532.1, abs=0.2)
        assert record.ours_energy == pytest.approx(99.8, abs=0.1)
        assert record.energy_ratio == pytest.approx(5.33, abs=0.01)
        assert record.fletcher_measurements == pytest.approx(
            8 / 0.1 * 1.1 * 8 * math.log(4088)
        )
        assert record.ours_measurements == math.ceil(8 * math.log(512))

    def test_low_snr_measurements_diverge(self):
        params = ModelParams(k_c=4096, k_d=1024, path_count=8)
        low = fletcher_compare(params, 1e-6)
        assert low.fletcher_measurements > 1e8
        assert low.fletcher_measurements * 1e-6 == pytest.approx(
            low.fletcher_energy, rel=1e-5
        )

    def test_ratio_at_least_four_for_sparse_channels(self):
        for k_c in (1024, 4096, 16384):
            for paths in (2, 4, 8, 16):
                record = fletcher_compare(ModelParams(k_c=k_c, k_d=k_c // 4, path_count=paths), 0.01)
                assert record.energy_ratio >= 4

    def test_nonpositive_snr(self, wide_params):
        with pytest.raises(DomainError):
            fletcher_compare(wide_params, 0.0)


def test_theory_curves_cover_grid(wide_params):
    grid = np.array([0.5, 1.0, 2.0]) * snr_zero(wide_params)
    curves = theory_curves(wide_params, grid)
    assert [c.label for c in curves] == [
        "mmse_hc",
        "mmse_hg",
        "mi_hc",
        "mi_hg",
        "rdf_ratio_hc",
        "rdf_ratio_hg",
    ]
    for curve in curves:
        np.testing.assert_array_equal(curve.snr_grid, grid)
        assert curve.values.shape == grid.shape
    np.testing.assert_allclose(curves[0].values, [1.0, 0.5, 0.0], atol=1e-12)
