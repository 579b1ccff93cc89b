from __future__ import annotations

import math

import numpy as np
import pytest

from sparsetrain.core import (
    baron_bounds,
    binary_entropy,
    detection_threshold,
    rate_distortion,
    sample_channel,
    snr_zero,
)
from sparsetrain.errors import ConfigError, DomainError
from sparsetrain.model import GainModel, ModelParams, SamplingMode, Seed


class TestBinaryEntropy:
    def test_half_is_ln2(self):
        assert binary_entropy(0.5) == pytest.approx(math.log(2))

    def test_degenerate_ends(self):
        assert binary_entropy(0.0) == 0.0
        assert binary_entropy(1.0) == 0.0

    def test_sparse_value(self):
        assert binary_entropy(1 / 256) == pytest.approx(0.0255596, abs=1e-7)

    @pytest.mark.parametrize("p", [-0.01, 1.01, math.inf])
    def test_outside_unit_interval(self, p):
        with pytest.raises(DomainError):
            binary_entropy(p)

    def test_symmetric_concave_with_maximum_at_half(self):
        grid = np.linspace(0.0, 1.0, 101)
        values = np.array([binary_entropy(p) for p in grid])
        np.testing.assert_allclose(values, values[::-1], atol=1e-15)
        assert np.argmax(values) == 50
        assert np.all(np.diff(values, 2) < 0)


class TestModelParams:
    def test_zero_paths_rejected(self):
        with pytest.raises(ConfigError) as excinfo:
            ModelParams(k_c=64, k_d=16, path_count=0)
        assert excinfo.value.field == "path_count"

    def test_delay_spread_longer_than_channel(self):
        with pytest.raises(ConfigError) as excinfo:
            ModelParams(k_c=16, k_d=32, path_count=2)
        assert excinfo.value.field == "k_d"

    def test_unknown_gain_model(self):
        with pytest.raises(ConfigError) as excinfo:
            ModelParams(k_c=64, k_d=16, path_count=2, gain_model="rayleigh")
        assert excinfo.value.field == "gain_model"

    def test_string_enums_are_parsed(self):
        params = ModelParams(
            k_c=64, k_d=16, path_count=2, gain_model="gaussian", sampling_mode="fixed"
        )
        assert params.gain_model is GainModel.GAUSSIAN
        assert params.sampling_mode is SamplingMode.FIXED_COUNT


class TestSeed:
    def test_same_path_same_stream(self):
        a = Seed(7, (1, 2)).generator().random(5)
        b = Seed(7, (1, 2)).generator().random(5)
        np.testing.assert_array_equal(a, b)

    def test_children_differ(self):
        seed = Seed(7)
        a = seed.child(0).generator().random(5)
        b = seed.child(1).generator().random(5)
        assert not np.array_equal(a, b)

    def test_child_extends_path(self):
        assert Seed(3, (1,)).child(4, 5) == Seed(3, (1, 4, 5))

    @pytest.mark.parametrize("master", [-1, 2**64, 1.5])
    def test_labels_must_be_64_bit(self, master):
        with pytest.raises(ConfigError):
            Seed(master)


class TestSampleChannel:
    def test_full_support_when_every_tap_is_a_path(self):
        params = ModelParams(k_c=64, k_d=16, path_count=16)
        h = sample_channel(params, Seed(1))
        np.testing.assert_array_equal(h.support, np.arange(16))
        np.testing.assert_allclose(np.abs(h.gains), 1 / math.sqrt(16))

    def test_fixed_count_support_size(self, wide_params):
        params = ModelParams(
            k_c=wide_params.k_c,
            k_d=wide_params.k_d,
            path_count=16,
            sampling_mode=SamplingMode.FIXED_COUNT,
        )
        for trial in range(50):
            h = sample_channel(params, Seed(11, (trial,)))
            assert h.support.size == 16
            assert np.all(np.diff(h.support) > 0)
            assert h.support[-1] < params.k_d

    def test_bernoulli_mean_support_size(self, wide_params):
        trials = 10_000
        sizes = np.array(
            [sample_channel(wide_params, Seed(5, (t,))).support.size for t in range(trials)]
        )
        p = wide_params.activation_probability
        band = 4 * math.sqrt(wide_params.k_d * p * (1 - p) / trials)
        assert abs(sizes.mean() - 16) < band

    def test_constant_gains_are_signed_amplitudes(self, wide_params):
        h = sample_channel(wide_params, Seed(2))
        np.testing.assert_allclose(np.abs(h.gains), 0.25)
        assert np.all(h.support < wide_params.k_d)

    @pytest.mark.parametrize("gain_model", list(GainModel))
    def test_unit_expected_energy(self, gain_model):
        params = ModelParams(k_c=1024, k_d=256, path_count=8, gain_model=gain_model)
        energies = np.array(
            [sample_channel(params, Seed(9, (t,))).energy for t in range(10_000)]
        )
        se = energies.std(ddof=1) / math.sqrt(energies.size)
        assert abs(energies.mean() - 1.0) < 4 * se

    def test_deterministic(self, wide_params):
        a = sample_channel(wide_params, Seed(4, (3,)))
        b = sample_channel(wide_params, Seed(4, (3,)))
        np.testing.assert_array_equal(a.support, b.support)
        np.testing.assert_array_equal(a.gains, b.gains)


class TestInformationQuantities:
    def test_snr_zero(self, wide_params):
        assert snr_zero(wide_params) == pytest.approx(0.01277973, rel=1e-6)

    def test_snr_zero_vanishes_without_sparsity(self):
        assert snr_zero(ModelParams(k_c=64, k_d=16, path_count=16)) == 0.0

    def test_snr_zero_inverse_in_channel_length(self, wide_params):
        doubled = ModelParams(k_c=2 * wide_params.k_c, k_d=4096, path_count=16)
        assert snr_zero(doubled) == pytest.approx(snr_zero(wide_params) / 2)

    def test_rate_distortion(self, wide_params):
        rate = rate_distortion(wide_params)
        assert rate == pytest.approx(104.69, abs=0.01)
        assert rate == pytest.approx(16 * (math.log(4096 / 16) + 1), rel=0.02)

    def test_rate_distortion_without_sparsity(self):
        assert rate_distortion(ModelParams(k_c=64, k_d=16, path_count=16)) == 0.0

    def test_pure_functions(self, wide_params):
        assert snr_zero(wide_params) == snr_zero(wide_params)
        assert detection_threshold(wide_params) == detection_threshold(wide_params)


class TestBaronBounds:
    def test_unit_snr(self, wide_params):
        bounds = baron_bounds(wide_params, 1.0)
        assert bounds["min_measurements"] == 303
        assert bounds["min_energy"] == pytest.approx(2 * rate_distortion(wide_params))

    @pytest.mark.parametrize("snr", [1e-3, 0.1, 1.0, 10.0, 1e3])
    def test_measurement_energy_dominates(self, wide_params, snr):
        bounds = baron_bounds(wide_params, snr)
        assert bounds["min_measurements"] * snr >= bounds["min_energy"]

    def test_low_snr_limit(self, wide_params):
        snr = 1e-4
        bounds = baron_bounds(wide_params, snr)
        ratio = bounds["min_measurements"] * snr / bounds["min_energy"]
        assert 1.0 <= ratio < 1.001

    @pytest.mark.parametrize("snr", [0.0, -1.0])
    def test_nonpositive_snr(self, wide_params, snr):
        with pytest.raises(DomainError):
            baron_bounds(wide_params, snr)


class TestDetectionThreshold:
    def test_value(self, wide_params):
        assert detection_threshold(wide_params) == pytest.approx(3.6175, abs=1e-4)

    def test_independent_of_channel_length(self, wide_params):
        k_d, paths = wide_params.k_d, wide_params.path_count
        expected = math.sqrt(2 * k_d * binary_entropy(paths / k_d) / paths)
        assert detection_threshold(wide_params) == pytest.approx(expected)

    def test_equals_path_amplitude_at_critical_energy(self, wide_params):
        snr0 = snr_zero(wide_params)
        amplitude = math.sqrt(snr0 * wide_params.k_c) / math.sqrt(wide_params.path_count)
        assert amplitude == pytest.approx(detection_threshold(wide_params))
