from __future__ import annotations

import pytest

from sparsetrain.model import GainModel, ModelParams, SamplingMode, SweepPoint, SweepResult


@pytest.fixture
def wide_params() -> ModelParams:
    """k_c=16384, k_d=4096, L=16 constant-gain channel."""
    return ModelParams(k_c=16384, k_d=4096, path_count=16)


@pytest.fixture
def small_params() -> ModelParams:
    return ModelParams(
        k_c=256,
        k_d=64,
        path_count=4,
        sampling_mode=SamplingMode.FIXED_COUNT,
    )


@pytest.fixture
def gaussian_params() -> ModelParams:
    return ModelParams(
        k_c=256,
        k_d=64,
        path_count=4,
        gain_model=GainModel.GAUSSIAN,
        sampling_mode=SamplingMode.FIXED_COUNT,
    )


def make_sweep(snr, mse, std_err=None, snr0=float("nan")) -> SweepResult:
    """SweepResult with the given curve; precision and recall set to 1."""
    std_err = std_err if std_err is not None else [0.0] * len(snr)
    points = [
        SweepPoint(
            snr=float(s),
            mean_mse=float(m),
            std_err=float(e),
            mean_precision=1.0,
            mean_recall=1.0,
            n_trials=10,
        )
        for s, m, e in zip(snr, mse, std_err, strict=True)
    ]
    return SweepResult(points=points, snr_zero=snr0)
