"""Training signals and the noisy cyclic channel.

Harmonic vectors follow f^(i)_k = exp(2πj·i·k/k_c)/√k_c with 0-based i and k,
so they are the eigenvectors of cyclic convolution and
``h ⊛ f^(i) = λ_i·f^(i)`` with ``λ_i = Σ_k h_k·exp(−2πj·i·k/k_c)``.
"""

from __future__ import annotations

import math

import numpy as np

from sparsetrain.errors import DomainError
from sparsetrain.model import (
    ChannelRealization,
    FrequencyObservation,
    FrequencySubset,
    GaussianObservation,
    ImpulseObservation,
    Seed,
)


def _check_snr(snr: float) -> None:
    if snr <= 0:
        raise DomainError(f"snr must be positive, got {snr}")


def circular_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Cyclic convolution of two equal-length vectors via the FFT.

    The result is real when both inputs are real.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 1:
        raise DomainError(f"length mismatch: {a.shape} vs {b.shape}")
    c = np.fft.ifft(np.fft.fft(a) * np.fft.fft(b))
    if np.isrealobj(a) and np.isrealobj(b):
        return c.real
    return c


def impulse_signal(k_c: int) -> np.ndarray:
    """The impulse probe √k_c·e_0; its energy is k_c."""
    x = np.zeros(k_c)
    x[0] = math.sqrt(k_c)
    return x


def impulse_observe(
    h: ChannelRealization, snr: float, seed: Seed, *, noise_std: float = 1.0
) -> ImpulseObservation:
    """Probe *h* with an impulse: samples = √(snr·k_c)·h + z, z real N(0, 1)."""
    _check_snr(snr)
    rng = seed.generator()
    noise = rng.standard_normal(h.length)
    samples = math.sqrt(snr * h.length) * h.to_vector() + noise_std * noise
    return ImpulseObservation(samples=samples, snr=snr, noise_std=noise_std)


def sample_frequency_subset(k_c: int, m: int, seed: Seed) -> FrequencySubset:
    """Choose m distinct harmonic indices uniformly without replacement."""
    if not 1 <= m <= k_c:
        raise DomainError(f"need 1 <= m <= k_c, got m={m}, k_c={k_c}")
    rng = seed.generator()
    indices = np.sort(rng.choice(k_c, size=m, replace=False))
    return FrequencySubset(k_c=k_c, indices=indices)


def harmonic_rows(subset: FrequencySubset) -> np.ndarray:
    """The m×k_c matrix F whose rows are the selected harmonic vectors."""
    phase = np.outer(subset.indices, np.arange(subset.k_c)) / subset.k_c
    return np.exp(2j * np.pi * phase) / math.sqrt(subset.k_c)


def frequency_signal(subset: FrequencySubset) -> np.ndarray:
    """x_f = √(k_c/m)·Σ_{i∈Q} f^(i); ‖x_f‖² = k_c for every subset."""
    indicator = np.zeros(subset.k_c)
    indicator[subset.indices] = 1.0
    # Σ_i exp(2πj·i·k/k_c) over the subset is k_c·ifft(indicator).
    return math.sqrt(subset.k_c / subset.m) * math.sqrt(subset.k_c) * np.fft.ifft(
        indicator
    )


def dft_eigenvalues(h: ChannelRealization, subset: FrequencySubset) -> np.ndarray:
    """λ_i for each harmonic index in *subset*."""
    return np.fft.fft(h.to_vector())[subset.indices]


def project_onto_harmonics(y: np.ndarray, subset: FrequencySubset) -> np.ndarray:
    """Inner products ⟨y, f^(i)⟩ for the selected harmonics (F·y)."""
    return np.fft.fft(y)[subset.indices] / math.sqrt(subset.k_c)


def snr_f(k_c: int, m: int, snr: float) -> float:
    """Per-measurement SNR of the projected frequency measurements."""
    if not 1 <= m <= k_c:
        raise DomainError(f"need 1 <= m <= k_c, got m={m}, k_c={k_c}")
    _check_snr(snr)
    return k_c / m * snr


def _complex_noise(rng: np.random.Generator, size: int) -> np.ndarray:
    """Circular complex Gaussian, unit total variance (½ per component)."""
    return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / math.sqrt(2.0)


def frequency_observe(
    h: ChannelRealization,
    snr: float,
    subset: FrequencySubset,
    seed: Seed,
    *,
    noise_std: float = 1.0,
) -> FrequencyObservation:
    """Simulate the projected measurements directly in the measurement domain."""
    _check_snr(snr)
    if subset.k_c != h.length:
        raise DomainError(f"subset is for k_c={subset.k_c}, channel has {h.length}")
    rng = seed.generator()
    scale = math.sqrt(snr * subset.k_c / subset.m)
    measurements = scale * dft_eigenvalues(h, subset) + noise_std * _complex_noise(
        rng, subset.m
    )
    return FrequencyObservation(
        subset=subset, measurements=measurements, snr=snr, noise_std=noise_std
    )


def train_frequency_time_domain(
    h: ChannelRealization,
    snr: float,
    subset: FrequencySubset,
    seed: Seed,
    *,
    noise_std: float = 1.0,
) -> np.ndarray:
    """Received time-domain training √snr·(x_f ⊛ h) + z with complex white z.

    Projecting the result with :func:`project_onto_harmonics` yields
    measurements distributed as :func:`frequency_observe` produces them.
    """
    _check_snr(snr)
    rng = seed.generator()
    received = math.sqrt(snr) * circular_convolve(frequency_signal(subset), h.to_vector())
    return received + noise_std * _complex_noise(rng, h.length)


def gaussian_observe(
    h: ChannelRealization,
    snr: float,
    m: int,
    k_d: int,
    seed: Seed,
    *,
    noise_std: float = 1.0,
) -> GaussianObservation:
    """Measure *h* through an m×k_c i.i.d. Gaussian matrix with entry variance 1/k_c.

    Only the first k_d columns are drawn since h vanishes beyond its delay
    spread; each full row still has unit expected energy, so the total training
    energy is snr·k_c as for the harmonic schemes.
    """
    _check_snr(snr)
    if m < 1:
        raise DomainError(f"m must be positive, got {m}")
    if np.any(h.support >= k_d):
        raise DomainError("channel support exceeds the delay spread")
    rng = seed.generator()
    matrix = rng.standard_normal((m, k_d)) / math.sqrt(h.length)
    scale = math.sqrt(snr * h.length / m)
    measurements = scale * (matrix @ h.to_vector()[:k_d]) + noise_std * rng.standard_normal(m)
    return GaussianObservation(
        matrix=matrix,
        measurements=measurements,
        snr=snr,
        k_c=h.length,
        noise_std=noise_std,
    )
