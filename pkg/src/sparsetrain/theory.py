"""Theoretical MMSE, mutual-information, penalty and measurement-count curves.

Mutual information follows the I-MMSE relation with the total training
energy made explicit: I(snr) = (k_c/2)·∫₀^snr mmse(s) ds, in nats, capped at
the rate-distortion value R since training cannot reveal more about h than
its description needs.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad
from scipy.special import erf
from scipy.stats import norm

from sparsetrain.core import rate_distortion, snr_zero
from sparsetrain.errors import DomainError
from sparsetrain.estimators.posterior import posterior_terms
from sparsetrain.model import ComparisonRecord, GainModel, ModelParams, TheoryCurve

DEFAULT_EPSILON = 0.25


def _check_snr(snr: float) -> None:
    if snr <= 0:
        raise DomainError(f"snr must be positive, got {snr}")


def _step(snr: float, snr0: float, epsilon: float) -> float:
    low, high = (1.0 - epsilon) * snr0, (1.0 + epsilon) * snr0
    if snr <= low:
        return 1.0
    if snr >= high:
        return 0.0
    return (high - snr) / (high - low)


def _hg_closed_form(snr: float, snr0: float) -> float:
    if snr <= 0:
        return 1.0
    a = math.sqrt(snr0 / snr)
    return float(erf(a / math.sqrt(2.0)) - a * math.sqrt(2.0 / math.pi) * math.exp(-a * a / 2))


def mmse_hc_step(
    snr: float, params: ModelParams, epsilon: float = DEFAULT_EPSILON
) -> float:
    """Step-shaped MMSE of a constant-magnitude channel.

    1 up to (1−ε)·SNR₀, 0 from (1+ε)·SNR₀ on, linear in between (so exactly ½
    at SNR₀).
    """
    _check_snr(snr)
    if not 0 < epsilon < 1:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon}")
    return _step(snr, snr_zero(params), epsilon)


def mmse_hg_theory(snr: float, params: ModelParams, *, quadrature: bool = False) -> float:
    """Wideband MMSE of a Gaussian-gain channel: ∫_{−a}^{a} s²·φ(s) ds, a = √(SNR₀/snr).

    Path gains whose normalized magnitude stays below a cannot be told from
    noise and are lost. The closed form erf(a/√2) − a·√(2/π)·e^(−a²/2) is used
    unless *quadrature* asks for direct integration of the density.
    """
    _check_snr(snr)
    snr0 = snr_zero(params)
    if not quadrature:
        return _hg_closed_form(snr, snr0)
    a = math.sqrt(snr0 / snr)
    value, _ = quad(
        lambda s: s * s * norm.pdf(s), 0.0, a, epsabs=1e-14, epsrel=1e-12, limit=200
    )
    return 2.0 * value


def mmse_hg_exact(snr: float, params: ModelParams) -> float:
    """Finite-size Bayes MMSE of impulse probing a Bernoulli–Gaussian channel.

    Sums the scalar MMSE p·σ² − E[E[h|y]²] over the k_d leading taps, with
    y = √(snr·k_c)·h + n and the expectation over the mixture law of y taken
    by quadrature. This is the error :func:`bg_posterior_mean` achieves on
    Bernoulli-sampled channels.
    """
    _check_snr(snr)
    amplitude = math.sqrt(snr * params.k_c)
    p = params.activation_probability
    variance = 1.0 / params.path_count
    active_std = math.sqrt(amplitude**2 * variance + 1.0)

    def second_moment(y: float) -> float:
        _, mean = posterior_terms(
            np.array([y]), amplitude=amplitude, activation=p, variance=variance
        )
        density = (1.0 - p) * norm.pdf(y) + p * norm.pdf(y, scale=active_std)
        return float(mean[0] ** 2 * density)

    edges = np.linspace(0.0, 12.0 * active_std, 25)
    total = sum(
        quad(second_moment, lo, hi, epsabs=1e-14, epsrel=1e-10, limit=200)[0]
        for lo, hi in zip(edges[:-1], edges[1:], strict=True)
    )
    per_tap = p * variance - 2.0 * total
    return params.k_d * max(per_tap, 0.0)


def training_mutual_info(
    snr: float,
    params: ModelParams,
    model: GainModel,
    epsilon: float = DEFAULT_EPSILON,
) -> float:
    """(k_c/2)·∫₀^snr mmse(s) ds for the hc step or the hg curve, capped at R."""
    _check_snr(snr)
    snr0 = snr_zero(params)
    model = GainModel(model)
    if model is GainModel.CONSTANT:
        breaks = [(1.0 - epsilon) * snr0, (1.0 + epsilon) * snr0]

        def integrand(s: float) -> float:
            return _step(s, snr0, epsilon)
    else:
        breaks = [snr0]

        def integrand(s: float) -> float:
            return _hg_closed_form(s, snr0)

    points = [b for b in breaks if 0 < b < snr] or None
    area, _ = quad(integrand, 0.0, snr, points=points, epsabs=1e-13, epsrel=1e-10, limit=200)
    return min(0.5 * params.k_c * area, rate_distortion(params))


def penalty_bound(
    snr: float,
    params: ModelParams,
    model: GainModel,
    epsilon: float = DEFAULT_EPSILON,
) -> dict[str, float]:
    """Upper bound on the penalty term and the rate distortion after training.

    Both are R − I(snr) at this level of approximation, floored at 0.
    """
    if snr < 0:
        raise DomainError(f"snr must be nonnegative, got {snr}")
    information = 0.0 if snr == 0 else training_mutual_info(snr, params, model, epsilon)
    remaining = max(0.0, rate_distortion(params) - information)
    return {"penalty": remaining, "rdf_after": remaining}


def rdf_ratio(
    snr: float,
    params: ModelParams,
    model: GainModel,
    epsilon: float = DEFAULT_EPSILON,
) -> float:
    """Rate distortion after training relative to its untrained value."""
    rate = rate_distortion(params)
    if rate == 0:
        return 0.0
    return penalty_bound(snr, params, model, epsilon)["rdf_after"] / rate


def rip_counts(
    params: ModelParams, c_harmonic: float, c_gaussian: float
) -> dict[str, int]:
    """Measurement counts for harmonic and i.i.d. Gaussian compressing matrices.

    harmonic: c·L·ln(k_c)·max(1, ln L)⁴; gaussian: c·R. The log guard keeps
    the harmonic count from vanishing when L ≤ e.
    """
    if c_harmonic <= 0 or c_gaussian <= 0:
        raise DomainError("RIP constants must be positive")
    log_l = max(1.0, math.log(params.path_count))
    harmonic = c_harmonic * params.path_count * math.log(params.k_c) * log_l**4
    return {
        "harmonic_m": math.ceil(harmonic),
        "gaussian_m": math.ceil(c_gaussian * rate_distortion(params)),
    }


def fletcher_compare(
    params: ModelParams, snr: float, measurement_constant: float = 1.0
) -> ComparisonRecord:
    """Training cost of exact pattern recovery next to almost-perfect recovery."""
    _check_snr(snr)
    k_c, paths = params.k_c, params.path_count
    if paths >= k_c:
        raise DomainError("comparison needs L < k_c")
    log_spread = math.log(k_c - paths)
    log_ratio = math.log(k_c / paths)
    return ComparisonRecord(
        k_c=k_c,
        path_count=paths,
        snr=snr,
        fletcher_measurements=8.0 / snr * (1.0 + snr) * paths * log_spread,
        fletcher_energy=8.0 * paths * log_spread,
        ours_measurements=math.ceil(measurement_constant * paths * log_ratio),
        ours_energy=2.0 * paths * log_ratio,
    )


def theory_curves(
    params: ModelParams, snr_grid: np.ndarray, epsilon: float = DEFAULT_EPSILON
) -> list[TheoryCurve]:
    """MMSE, mutual-information and RDF-ratio curves of hc and hg over *snr_grid*."""
    grid = np.asarray(snr_grid, dtype=float)
    hc, hg = GainModel.CONSTANT, GainModel.GAUSSIAN

    def curve(label: str, fn) -> TheoryCurve:
        return TheoryCurve(snr_grid=grid, values=[fn(float(s)) for s in grid], label=label)

    return [
        curve("mmse_hc", lambda s: mmse_hc_step(s, params, epsilon)),
        curve("mmse_hg", lambda s: mmse_hg_theory(s, params)),
        curve("mi_hc", lambda s: training_mutual_info(s, params, hc, epsilon)),
        curve("mi_hg", lambda s: training_mutual_info(s, params, hg, epsilon)),
        curve("rdf_ratio_hc", lambda s: rdf_ratio(s, params, hc, epsilon)),
        curve("rdf_ratio_hg", lambda s: rdf_ratio(s, params, hg, epsilon)),
    ]
