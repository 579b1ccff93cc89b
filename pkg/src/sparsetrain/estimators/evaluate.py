"""Score an estimate against the true channel."""

from __future__ import annotations

import math

import numpy as np

from sparsetrain.errors import DomainError
from sparsetrain.model import (
    ChannelEstimate,
    ChannelRealization,
    EvaluationReport,
    Method,
    ModelParams,
)


def default_support_tol(params: ModelParams, method: Method) -> float:
    """Magnitude above which an estimated tap counts as detected.

    Half the path magnitude 1/√L for the impulse-probing estimators (the
    posterior mean is dense, so a tiny tolerance would count every tap), and
    1e-6 for the solver outputs, which are exactly zero off their support.
    """
    if method in (Method.THRESHOLD, Method.BG_POSTERIOR):
        return 1.0 / (2.0 * math.sqrt(params.path_count))
    return 1e-6


def evaluate_estimate(
    h: ChannelRealization, est: ChannelEstimate, support_tol: float
) -> EvaluationReport:
    """Return ‖h − ĥ‖² with support precision and recall.

    An empty detection has precision 1; an empty true support has recall 1.
    """
    truth = h.to_vector()
    if truth.shape != est.estimate.shape:
        raise DomainError(
            f"length mismatch: channel {truth.size}, estimate {est.estimate.size}"
        )
    squared_error = float(np.sum((truth - est.estimate) ** 2))

    detected = set(np.flatnonzero(np.abs(est.estimate) > support_tol).tolist())
    actual = set(np.flatnonzero(truth).tolist())
    hits = len(detected & actual)
    precision = hits / len(detected) if detected else 1.0
    recall = hits / len(actual) if actual else 1.0
    return EvaluationReport(
        squared_error=squared_error,
        support_precision=precision,
        support_recall=recall,
    )
