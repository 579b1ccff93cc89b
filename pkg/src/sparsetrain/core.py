"""Channel sampling and closed-form information quantities.

All entropies and rates are in nats.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy.special import entr

from sparsetrain.errors import DomainError
from sparsetrain.model import (
    ChannelRealization,
    GainModel,
    ModelParams,
    SamplingMode,
    Seed,
)

logger = logging.getLogger(__name__)


def binary_entropy(p: float) -> float:
    """Return H_b(p) = −p·ln p − (1−p)·ln(1−p), with 0·ln 0 taken as 0."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"probability must lie in [0, 1], got {p}")
    return float(entr(p) + entr(1.0 - p))


def sample_channel(params: ModelParams, seed: Seed) -> ChannelRealization:
    """Draw one sparse channel realization.

    Bernoulli mode activates each of the first k_d taps independently with
    probability L/k_d; FixedCount mode draws exactly L distinct delays.
    """
    rng = seed.generator()
    if params.sampling_mode is SamplingMode.BERNOULLI:
        active = rng.random(params.k_d) < params.activation_probability
        support = np.flatnonzero(active)
    else:
        support = np.sort(rng.choice(params.k_d, size=params.path_count, replace=False))

    amplitude = 1.0 / math.sqrt(params.path_count)
    if params.gain_model is GainModel.CONSTANT:
        signs = 2.0 * rng.integers(0, 2, size=support.size) - 1.0
        gains = amplitude * signs
    else:
        gains = rng.normal(0.0, amplitude, size=support.size)

    return ChannelRealization(
        length=params.k_c, support=support.astype(np.int64), gains=gains
    )


def snr_zero(params: ModelParams) -> float:
    """Return the critical per-symbol SNR₀ = 2·k_d·H_b(L/k_d)/k_c."""
    return 2.0 * rate_distortion(params) / params.k_c


def rate_distortion(params: ModelParams) -> float:
    """Return k_d·H_b(L/k_d), the leading term of R_h(η₀)."""
    return params.k_d * binary_entropy(params.activation_probability)


def baron_bounds(params: ModelParams, snr: float) -> dict[str, float]:
    """Lower bounds on measurement count and training energy.

    ``min_measurements`` is R/(½·ln(1+snr)) rounded up; ``min_energy`` is 2R.
    """
    if snr <= 0:
        raise DomainError(f"snr must be positive, got {snr}")
    rate = rate_distortion(params)
    capacity = 0.5 * math.log1p(snr)
    return {
        "min_measurements": math.ceil(rate / capacity),
        "min_energy": 2.0 * rate,
    }


def detection_threshold(params: ModelParams) -> float:
    """Return T = √(k_c·SNR₀/L), the amplitude an active tap must clear."""
    return math.sqrt(params.k_c * snr_zero(params) / params.path_count)
