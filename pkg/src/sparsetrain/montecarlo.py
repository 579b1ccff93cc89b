"""Deterministic Monte-Carlo trials and SNR sweeps.

Trial (i, j) draws every random quantity from ``Seed(master, (i, j))``:
child 0 samples the channel, child 1 the observation noise (and the Gaussian
compressing matrix), child 2 the harmonic subset. Here i indexes the sorted,
absolute SNR grid and j the trial, so any trial can be replayed on its own
and a sweep does not depend on how its trials are scheduled.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from sparsetrain.analysis import flag_anomalies
from sparsetrain.core import sample_channel, snr_zero
from sparsetrain.errors import ConfigError, DomainError
from sparsetrain.estimators import build_estimator, default_support_tol, evaluate_estimate
from sparsetrain.estimators.base import Estimator
from sparsetrain.model import (
    ChannelEstimate,
    ChannelRealization,
    EvaluationReport,
    ExperimentConfig,
    Scheme,
    Seed,
    SweepPoint,
    SweepResult,
)
from sparsetrain.signals import (
    frequency_observe,
    gaussian_observe,
    impulse_observe,
    sample_frequency_subset,
)
from sparsetrain.theory import rip_counts

logger = logging.getLogger(__name__)

THREADS_ENV = "SPARSETRAIN_THREADS"

CHANNEL_STREAM = 0
OBSERVATION_STREAM = 1
SUBSET_STREAM = 2


def resolve_snr_grid(config: ExperimentConfig) -> np.ndarray:
    """Absolute per-symbol SNRs of *config*, sorted ascending."""
    grid = np.sort(np.asarray(config.snr_grid, dtype=float))
    if config.snr_relative:
        grid = grid * snr_zero(config.params)
        if np.any(grid <= 0):
            raise ConfigError(
                "snr_relative", "SNR₀ is zero for these params; give an absolute grid"
            )
    return grid


def resolve_measurements(config: ExperimentConfig) -> int | None:
    """Measurement count m of a compressed scheme, None for impulse probing.

    An explicit ``measurements`` wins; otherwise m is ``rip_constant`` times
    the harmonic (or Gaussian) RIP count, clipped to k_c for harmonic training.
    """
    if config.scheme is Scheme.IMPULSE:
        return None
    if config.measurements is not None:
        return config.measurements
    counts = rip_counts(config.params, config.rip_constant, config.rip_constant)
    if config.scheme is Scheme.FREQUENCY:
        return min(counts["harmonic_m"], config.params.k_c)
    return counts["gaussian_m"]


def config_hash(config: ExperimentConfig) -> str:
    """SHA-256 of the canonical JSON form of *config*."""
    canonical = json.dumps(config.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def resolve_workers(workers: int | None = None) -> int:
    """Worker count: *workers* if given, else ``SPARSETRAIN_THREADS``, else all CPUs."""
    if workers is None:
        raw = os.environ.get(THREADS_ENV, "").strip()
        try:
            workers = int(raw) if raw else 0
        except ValueError:
            raise ConfigError(THREADS_ENV, f"must be an integer, got {raw!r}") from None
    if workers < 0:
        raise ConfigError("threads", f"must be >= 0, got {workers}")
    return workers or os.cpu_count() or 1


@dataclass
class TrialOutcome:
    """One trial's channel, estimate and score."""

    snr: float
    channel: ChannelRealization
    estimate: ChannelEstimate
    report: EvaluationReport


@dataclass(frozen=True)
class _TrialPlan:
    """Everything a trial needs that is fixed across a sweep."""

    config: ExperimentConfig
    grid: np.ndarray
    measurements: int | None
    estimator: Estimator
    support_tol: float
    noise_std: float

    @classmethod
    def from_config(cls, config: ExperimentConfig) -> _TrialPlan:
        return cls(
            config=config,
            grid=resolve_snr_grid(config),
            measurements=resolve_measurements(config),
            estimator=build_estimator(config),
            support_tol=default_support_tol(config.params, config.estimator),
            noise_std=0.0 if config.noiseless else 1.0,
        )

    def run(self, snr_index: int, trial_index: int) -> TrialOutcome:
        config = self.config
        params = config.params
        if not 0 <= snr_index < self.grid.size:
            raise DomainError(f"snr_index {snr_index} outside [0, {self.grid.size})")
        if not 0 <= trial_index < config.trials_per_point:
            raise DomainError(
                f"trial_index {trial_index} outside [0, {config.trials_per_point})"
            )

        seed = Seed(config.master_seed, (snr_index, trial_index))
        snr = float(self.grid[snr_index])
        h = sample_channel(params, seed.child(CHANNEL_STREAM))
        noise_seed = seed.child(OBSERVATION_STREAM)

        match config.scheme:
            case Scheme.IMPULSE:
                obs = impulse_observe(h, snr, noise_seed, noise_std=self.noise_std)
            case Scheme.FREQUENCY:
                subset = sample_frequency_subset(
                    params.k_c, self.measurements, seed.child(SUBSET_STREAM)
                )
                obs = frequency_observe(
                    h, snr, subset, noise_seed, noise_std=self.noise_std
                )
            case Scheme.GAUSSIAN:
                obs = gaussian_observe(
                    h,
                    snr,
                    self.measurements,
                    params.k_d,
                    noise_seed,
                    noise_std=self.noise_std,
                )

        estimate = self.estimator.estimate(obs, params)
        report = evaluate_estimate(h, estimate, self.support_tol)
        return TrialOutcome(snr=snr, channel=h, estimate=estimate, report=report)


def simulate_trial(
    config: ExperimentConfig, snr_index: int, trial_index: int
) -> TrialOutcome:
    """Run one trial and keep its channel and estimate alongside the score."""
    return _TrialPlan.from_config(config).run(snr_index, trial_index)


def run_trial(
    config: ExperimentConfig, snr_index: int, trial_index: int
) -> EvaluationReport:
    """Simulate, estimate and score trial *trial_index* at grid point *snr_index*."""
    return simulate_trial(config, snr_index, trial_index).report


def _standard_error(values: np.ndarray) -> float:
    if values.size < 2:
        return 0.0
    return float(np.std(values, ddof=1) / math.sqrt(values.size))


def run_sweep(config: ExperimentConfig, workers: int | None = None) -> SweepResult:
    """Run every (snr, trial) pair of *config* and aggregate per SNR point.

    Trials may run on several threads; each writes to its own slot, so the
    result is the same for any worker count.
    """
    plan = _TrialPlan.from_config(config)
    n_points, n_trials = plan.grid.size, config.trials_per_point
    workers = resolve_workers(workers)
    logger.info(
        "Sweep: %d SNR points x %d trials, %s/%s, %d worker(s)",
        n_points,
        n_trials,
        config.scheme,
        config.estimator,
        workers,
    )

    errors = np.empty((n_points, n_trials))
    precision = np.empty((n_points, n_trials))
    recall = np.empty((n_points, n_trials))

    def fill(snr_index: int) -> None:
        for trial_index in range(n_trials):
            report = plan.run(snr_index, trial_index).report
            errors[snr_index, trial_index] = report.squared_error
            precision[snr_index, trial_index] = report.support_precision
            recall[snr_index, trial_index] = report.support_recall

    if workers == 1 or n_points == 1:
        for snr_index in range(n_points):
            fill(snr_index)
    else:
        with ThreadPoolExecutor(max_workers=min(workers, n_points)) as pool:
            # list() re-raises the first trial error
            list(pool.map(fill, range(n_points)))

    points = []
    for i, snr in enumerate(plan.grid):
        point = SweepPoint(
            snr=float(snr),
            mean_mse=float(np.mean(errors[i])),
            std_err=_standard_error(errors[i]),
            mean_precision=float(np.mean(precision[i])),
            mean_recall=float(np.mean(recall[i])),
            n_trials=n_trials,
        )
        logger.debug(
            "snr=%.6g mse=%.4g±%.2g precision=%.3f recall=%.3f",
            point.snr,
            point.mean_mse,
            point.std_err,
            point.mean_precision,
            point.mean_recall,
        )
        points.append(point)

    result = SweepResult(
        points=points,
        snr_zero=snr_zero(config.params),
        config_hash=config_hash(config),
        master_seed=config.master_seed,
    )
    flag_anomalies(result)
    return result
