"""Greedy sparse recovery from compressed measurements: OMP and IHT.

Both solvers work on the m×k_d sensing dictionary of the observation, i.e.
only the delays inside the delay spread are candidates. Channels are real,
so coefficients are projected onto the reals before they are reported.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from sparsetrain.model import (
    ChannelEstimate,
    FrequencyObservation,
    GaussianObservation,
    Method,
    ModelParams,
)

logger = logging.getLogger(__name__)

CompressedObservation = FrequencyObservation | GaussianObservation


class OMPEstimator:
    """Orthogonal matching pursuit; *sparsity* defaults to L when it is known."""

    method = Method.OMP

    def __init__(
        self,
        *,
        sparsity: int | None = None,
        known_sparsity: bool = True,
        delta: float = 0.0,
    ):
        self._sparsity = sparsity
        self._known_sparsity = known_sparsity
        self._delta = delta

    def can_handle(self, observation: object) -> bool:
        return isinstance(observation, FrequencyObservation | GaussianObservation)

    def estimate(
        self, observation: CompressedObservation, params: ModelParams
    ) -> ChannelEstimate:
        sparsity = self._sparsity
        if sparsity is None and self._known_sparsity:
            sparsity = params.path_count
        return omp_recover(observation, params, sparsity, delta=self._delta)


class IHTEstimator:
    """Iterative hard thresholding with a fixed 1/‖A‖² step."""

    method = Method.IHT

    def __init__(self, *, sparsity: int | None = None, iterations: int = 100):
        self._sparsity = sparsity
        self._iterations = iterations

    def can_handle(self, observation: object) -> bool:
        return isinstance(observation, FrequencyObservation | GaussianObservation)

    def estimate(
        self, observation: CompressedObservation, params: ModelParams
    ) -> ChannelEstimate:
        sparsity = self._sparsity or params.path_count
        return iht_recover(observation, params, sparsity, self._iterations)


def omp_recover(
    obs: CompressedObservation,
    params: ModelParams,
    sparsity: int | None,
    *,
    delta: float = 0.0,
) -> ChannelEstimate:
    """Recover a sparse channel by orthogonal matching pursuit.

    Each iteration adds the dictionary column most correlated with the
    residual and re-solves least squares on the selected set. The loop stops
    after *sparsity* picks, or once the residual norm reaches the noise floor
    ``noise_std·√m·(1+delta)``. ``sparsity=None`` relies on the floor alone.
    """
    dictionary = obs.dictionary(params.k_d)
    y = np.asarray(obs.measurements)
    m = y.size
    y_norm = float(np.linalg.norm(y))
    floor = max(obs.noise_std * math.sqrt(m) * (1.0 + delta), 1e-9 * y_norm)

    max_picks = params.k_d if sparsity is None else min(sparsity, params.k_d)
    rank_deficient = max_picks > m and sparsity is not None
    if rank_deficient:
        logger.warning(
            "OMP asked for %d atoms from only %d measurements", max_picks, m
        )

    col_norms = np.linalg.norm(dictionary, axis=0)
    col_norms[col_norms == 0] = 1.0

    support: list[int] = []
    coef = np.zeros(0, dtype=dictionary.dtype)
    residual = y.astype(dictionary.dtype, copy=True)
    residual_norms = [y_norm]

    for _ in range(max_picks):
        if residual_norms[-1] <= floor:
            break
        correlation = np.abs(dictionary.conj().T @ residual) / col_norms
        correlation[support] = -1.0
        support.append(int(np.argmax(correlation)))

        atoms = dictionary[:, support]
        coef, _, rank, _ = np.linalg.lstsq(atoms, y, rcond=None)
        if rank < len(support):
            rank_deficient = True
        residual = y - atoms @ coef
        residual_norms.append(float(np.linalg.norm(residual)))

    order = np.argsort(support)
    detected = np.asarray(support, dtype=np.int64)[order]
    estimate = np.zeros(obs.k_c)
    estimate[detected] = np.real(coef)[order]

    imaginary_residue = float(np.linalg.norm(np.imag(coef))) if support else 0.0
    logger.debug(
        "OMP picked %d atoms, residual %.4g -> %.4g",
        len(support),
        residual_norms[0],
        residual_norms[-1],
    )
    return ChannelEstimate(
        estimate=estimate,
        detected_support=detected,
        method=Method.OMP,
        residual_norms=residual_norms,
        imaginary_residue=imaginary_residue,
        rank_deficient=rank_deficient,
    )


def iht_recover(
    obs: CompressedObservation,
    params: ModelParams,
    sparsity: int,
    iterations: int,
    *,
    tol: float = 1e-12,
) -> ChannelEstimate:
    """Recover a sparse channel by iterative hard thresholding.

    x ← H_s(Re(x + μ·Aᴴ(y − A·x))) with μ = 1/‖A‖² and H_s keeping the
    *sparsity* largest magnitudes. Stops early once an update changes x by
    less than *tol* relative to its norm.
    """
    dictionary = obs.dictionary(params.k_d)
    y = np.asarray(obs.measurements)
    step = 1.0 / _spectral_norm_sq(dictionary)

    x = np.zeros(params.k_d)
    residual_norms = [float(np.linalg.norm(y))]
    for _ in range(iterations):
        gradient = dictionary.conj().T @ (y - dictionary @ x)
        updated = _keep_largest(np.real(x + step * gradient), sparsity)
        change = float(np.linalg.norm(updated - x))
        x = updated
        residual_norms.append(float(np.linalg.norm(y - dictionary @ x)))
        if change <= tol * max(float(np.linalg.norm(x)), np.finfo(float).tiny):
            break

    estimate = np.zeros(obs.k_c)
    estimate[: params.k_d] = x
    return ChannelEstimate(
        estimate=estimate,
        detected_support=np.flatnonzero(x),
        method=Method.IHT,
        residual_norms=residual_norms,
    )


def _keep_largest(v: np.ndarray, count: int) -> np.ndarray:
    """Zero all but the *count* largest-magnitude entries of *v*."""
    if count >= v.size:
        return v
    keep = np.argpartition(np.abs(v), -count)[-count:]
    out = np.zeros_like(v)
    out[keep] = v[keep]
    return out


def _spectral_norm_sq(a: np.ndarray, *, iterations: int = 200, rtol: float = 1e-10) -> float:
    """Largest eigenvalue of AᴴA by power iteration from a fixed start."""
    v = np.ones(a.shape[1], dtype=a.dtype) / math.sqrt(a.shape[1])
    estimate = 0.0
    for _ in range(iterations):
        w = a.conj().T @ (a @ v)
        norm_w = float(np.linalg.norm(w))
        if norm_w == 0:
            return 1.0
        v = w / norm_w
        if abs(norm_w - estimate) <= rtol * norm_w:
            return norm_w
        estimate = norm_w
    return estimate
