"""Hard-threshold detection for impulse probing of constant-magnitude channels."""

from __future__ import annotations

import math

import numpy as np

from sparsetrain.core import detection_threshold
from sparsetrain.model import ChannelEstimate, ImpulseObservation, Method, ModelParams


class ThresholdEstimator:
    """Declare a tap active when its sample clears the detection threshold T."""

    method = Method.THRESHOLD

    def can_handle(self, observation: object) -> bool:
        return isinstance(observation, ImpulseObservation)

    def estimate(
        self, observation: ImpulseObservation, params: ModelParams
    ) -> ChannelEstimate:
        return threshold_detect(observation, params)


def threshold_detect(obs: ImpulseObservation, params: ModelParams) -> ChannelEstimate:
    """Keep taps i < k_d with |y_i| ≥ T and give them magnitude exactly 1/√L.

    Only delays and signs are unknown under the constant-magnitude model, so
    the detected sign is all the estimate takes from the sample.
    """
    threshold = detection_threshold(params)
    leading = obs.samples[: params.k_d]
    detected = np.flatnonzero(np.abs(leading) >= threshold)

    estimate = np.zeros(obs.samples.size)
    estimate[detected] = np.sign(leading[detected]) / math.sqrt(params.path_count)
    return ChannelEstimate(
        estimate=estimate, detected_support=detected, method=Method.THRESHOLD
    )
