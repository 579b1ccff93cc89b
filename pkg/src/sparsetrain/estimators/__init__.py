"""Channel estimators and their registry."""

from __future__ import annotations

from sparsetrain.errors import ConfigError
from sparsetrain.estimators.base import Estimator
from sparsetrain.estimators.evaluate import default_support_tol, evaluate_estimate
from sparsetrain.estimators.greedy import (
    IHTEstimator,
    OMPEstimator,
    iht_recover,
    omp_recover,
)
from sparsetrain.estimators.posterior import BGPosteriorEstimator, bg_posterior_mean
from sparsetrain.estimators.threshold import ThresholdEstimator, threshold_detect
from sparsetrain.model import ExperimentConfig, Method

__all__ = [
    "BGPosteriorEstimator",
    "Estimator",
    "IHTEstimator",
    "OMPEstimator",
    "ThresholdEstimator",
    "bg_posterior_mean",
    "build_estimator",
    "default_support_tol",
    "evaluate_estimate",
    "iht_recover",
    "omp_recover",
    "threshold_detect",
]


def build_estimator(config: ExperimentConfig) -> Estimator:
    """Return the estimator *config* asks for, tuned by its solver settings."""
    match config.estimator:
        case Method.THRESHOLD:
            return ThresholdEstimator()
        case Method.BG_POSTERIOR:
            return BGPosteriorEstimator()
        case Method.OMP:
            return OMPEstimator(
                sparsity=config.sparsity,
                known_sparsity=config.known_sparsity,
                delta=config.omp_delta,
            )
        case Method.IHT:
            return IHTEstimator(
                sparsity=config.sparsity, iterations=config.iht_iterations
            )
    raise ConfigError("estimator", f"unknown estimator {config.estimator!r}")
