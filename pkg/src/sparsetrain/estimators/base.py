"""Estimator protocol shared by all channel estimators."""

from __future__ import annotations

from typing import Protocol

from sparsetrain.model import ChannelEstimate, Method, ModelParams


class Estimator(Protocol):
    """Protocol for channel estimators."""

    method: Method

    def can_handle(self, observation: object) -> bool:
        """Return True if this estimator applies to the given observation."""
        ...

    def estimate(self, observation: object, params: ModelParams) -> ChannelEstimate:
        """Estimate the channel that produced *observation*."""
        ...
