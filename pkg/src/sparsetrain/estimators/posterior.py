"""Scalar Bernoulli–Gaussian posterior mean for Gaussian-gain channels."""

from __future__ import annotations

import math

import numpy as np
from scipy.special import expit
from scipy.stats import norm

from sparsetrain.model import ChannelEstimate, ImpulseObservation, Method, ModelParams


class BGPosteriorEstimator:
    """Per-tap posterior mean under the Bernoulli–Gaussian channel prior."""

    method = Method.BG_POSTERIOR

    def can_handle(self, observation: object) -> bool:
        return isinstance(observation, ImpulseObservation)

    def estimate(
        self, observation: ImpulseObservation, params: ModelParams
    ) -> ChannelEstimate:
        return bg_posterior_mean(observation, params)


def posterior_terms(
    y: np.ndarray,
    *,
    amplitude: float,
    activation: float,
    variance: float,
    noise_std: float = 1.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Return (activity, mean) of h given y = amplitude·h + noise_std·n.

    The prior is h = 0 with probability 1−activation, else Normal(0, variance).
    Under the two hypotheses y is zero-mean Gaussian with variance
    ``noise_std²`` or ``amplitude²·variance + noise_std²``; the activity is the
    posterior probability of the second, from their likelihood ratio. Given
    activity, h|y is Gaussian with mean ``amplitude·variance·y/(amplitude²·variance + noise_std²)``,
    so ``E[h|y] = activity·that``.
    """
    y = np.asarray(y, dtype=float)
    active_var = amplitude**2 * variance + noise_std**2
    with np.errstate(divide="ignore"):
        log_prior = math.log(activation) - np.log1p(-activation)
    log_odds = (
        log_prior
        + norm.logpdf(y, scale=math.sqrt(active_var))
        - norm.logpdf(y, scale=noise_std)
    )
    activity = expit(log_odds)
    shrink = amplitude * variance / active_var
    return activity, activity * shrink * y


def bg_posterior_mean(obs: ImpulseObservation, params: ModelParams) -> ChannelEstimate:
    """E[h_i | y_i] for every tap i < k_d; taps beyond the delay spread stay zero.

    Detected support reports taps whose posterior activity is at least ½.
    """
    amplitude = math.sqrt(obs.snr * obs.samples.size)
    leading = obs.samples[: params.k_d]
    estimate = np.zeros(obs.samples.size)

    if obs.noise_std == 0:
        # Noiseless samples pin h exactly.
        estimate[: params.k_d] = leading / amplitude
        detected = np.flatnonzero(leading)
    else:
        activity, mean = posterior_terms(
            leading,
            amplitude=amplitude,
            activation=params.activation_probability,
            variance=1.0 / params.path_count,
            noise_std=obs.noise_std,
        )
        estimate[: params.k_d] = mean
        detected = np.flatnonzero(activity >= 0.5)

    return ChannelEstimate(
        estimate=estimate, detected_support=detected, method=Method.BG_POSTERIOR
    )
