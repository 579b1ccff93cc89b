"""Post-sweep analysis: transition location, empirical I-MMSE, trend checks."""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.stats import spearmanr

from sparsetrain.core import rate_distortion, snr_zero
from sparsetrain.errors import DomainError
from sparsetrain.model import (
    EmpiricalInformation,
    ModelParams,
    SweepResult,
    TheoryCurve,
    TransitionEstimate,
)

logger = logging.getLogger(__name__)

ANOMALY_BOUND = 2.0
NEAR_ZERO_FRACTION = 0.05


def _curve_arrays(curve: SweepResult | TheoryCurve) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(curve, SweepResult):
        return curve.snr, curve.mean_mse
    return curve.snr_grid, curve.values


def locate_transition(
    curve: SweepResult | TheoryCurve, level: float = 0.5
) -> TransitionEstimate:
    """SNR where the curve first falls through *level*, linearly interpolated.

    Only a crossing from above counts: the first pair of neighbouring points
    with ``mse[i] >= level > mse[i+1]``.
    """
    snr, mse = _curve_arrays(curve)
    for i in range(snr.size - 1):
        upper, lower = mse[i], mse[i + 1]
        if upper >= level > lower:
            if upper == level:
                return TransitionEstimate(level=level, snr=float(snr[i]))
            fraction = (upper - level) / (upper - lower)
            crossing = snr[i] + fraction * (snr[i + 1] - snr[i])
            return TransitionEstimate(level=level, snr=float(crossing))
    logger.info("No transition through %.3g in range", level)
    return TransitionEstimate(level=level)


def empirical_mutual_info(
    result: SweepResult, params: ModelParams
) -> EmpiricalInformation:
    """(k_c/2)·∫₀^snr mean_mse ds by the trapezoid rule, capped at R.

    The first measured MSE is held constant on [0, snr₁]. The penalty curve is
    R minus the information. Grids whose first point lies above 5% of SNR₀
    miss part of the integral; the result flags them.
    """
    snr, mse = result.snr, result.mean_mse
    if snr.size == 0:
        raise DomainError("empty sweep")
    rate = rate_distortion(params)
    near_zero = bool(snr[0] <= NEAR_ZERO_FRACTION * snr_zero(params))
    if not near_zero:
        logger.warning(
            "Sweep starts at %.4g, above %.0f%% of SNR₀; mutual information is underestimated",
            snr[0],
            100 * NEAR_ZERO_FRACTION,
        )

    grid = np.concatenate(([0.0], snr))
    values = np.concatenate(([mse[0]], mse))
    area = cumulative_trapezoid(values, grid, initial=0.0)[1:]
    information = np.minimum(0.5 * params.k_c * area, rate)
    return EmpiricalInformation(
        information=TheoryCurve(snr_grid=snr, values=information, label="mi_empirical"),
        penalty=TheoryCurve(snr_grid=snr, values=rate - information, label="penalty_empirical"),
        starts_near_zero=near_zero,
    )


def spearman_trend(result: SweepResult) -> float:
    """Spearman rank correlation of (snr, mean_mse); nan when undefined."""
    if len(result.points) < 2:
        return math.nan
    mse = result.mean_mse
    if np.all(mse == mse[0]):
        return math.nan
    rho, _ = spearmanr(result.snr, mse)
    return float(rho)


def flag_anomalies(result: SweepResult, bound: float = ANOMALY_BOUND) -> list[int]:
    """Indices of points whose mean MSE exceeds *bound* for unit-energy channels."""
    flagged = [i for i, p in enumerate(result.points) if p.mean_mse > bound]
    for i in flagged:
        point = result.points[i]
        logger.warning(
            "Anomalous mean MSE %.4g at snr=%.6g (bound %.3g)",
            point.mean_mse,
            point.snr,
            bound,
        )
    return flagged


def is_monotone(
    values: np.ndarray,
    std_err: np.ndarray | None = None,
    *,
    sigmas: float = 3.0,
    increasing: bool = False,
) -> bool:
    """Whether *values* never move against the given direction by more than noise.

    A step may go the wrong way by at most *sigmas* combined standard errors
    of its two endpoints; without *std_err* the check is exact.
    """
    values = np.asarray(values, dtype=float)
    steps = np.diff(values)
    if increasing:
        steps = -steps
    if std_err is None:
        slack = np.zeros_like(steps)
    else:
        se = np.asarray(std_err, dtype=float)
        slack = sigmas * np.hypot(se[:-1], se[1:])
    return bool(np.all(steps <= slack))
