"""Data model shared by channel sampling, training, estimation and sweeps."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np

from sparsetrain.errors import ConfigError

_UINT64 = 2**64


class GainModel(StrEnum):
    """Law of the active path gains."""

    CONSTANT = "constant"  # ±1/√L equiprobable (hc)
    GAUSSIAN = "gaussian"  # Normal(0, 1/L) (hg)


class SamplingMode(StrEnum):
    """How the active delays are drawn."""

    BERNOULLI = "bernoulli"
    FIXED_COUNT = "fixed"


class Scheme(StrEnum):
    """Training scheme used by an experiment."""

    IMPULSE = "impulse"
    FREQUENCY = "frequency"
    GAUSSIAN = "gaussian"  # i.i.d. Gaussian compressing matrix


class Method(StrEnum):
    """Channel estimation method."""

    THRESHOLD = "threshold"
    BG_POSTERIOR = "bg_posterior"
    OMP = "omp"
    IHT = "iht"


IMPULSE_METHODS = frozenset({Method.THRESHOLD, Method.BG_POSTERIOR})
COMPRESSED_METHODS = frozenset({Method.OMP, Method.IHT})


def _require_int(name: str, value: object, minimum: int = 1) -> None:
    if isinstance(value, bool) or not isinstance(value, int | np.integer):
        raise ConfigError(name, f"must be an integer, got {value!r}")
    if value < minimum:
        raise ConfigError(name, f"must be >= {minimum}, got {value}")


@dataclass(frozen=True)
class ModelParams:
    """Discrete channel dimensions and path statistics."""

    k_c: int  # total channel length, w·t_c
    k_d: int  # delay-spread length, w·t_d
    path_count: int  # expected number of active paths L
    gain_model: GainModel = GainModel.CONSTANT
    sampling_mode: SamplingMode = SamplingMode.BERNOULLI

    def __post_init__(self) -> None:
        _require_int("k_c", self.k_c)
        _require_int("k_d", self.k_d)
        _require_int("path_count", self.path_count)
        if self.k_d > self.k_c:
            raise ConfigError("k_d", f"must not exceed k_c ({self.k_d} > {self.k_c})")
        if self.path_count > self.k_d:
            raise ConfigError(
                "path_count", f"must not exceed k_d ({self.path_count} > {self.k_d})"
            )
        try:
            object.__setattr__(self, "gain_model", GainModel(self.gain_model))
        except ValueError:
            raise ConfigError(
                "gain_model", f"unknown gain model {self.gain_model!r}"
            ) from None
        try:
            object.__setattr__(self, "sampling_mode", SamplingMode(self.sampling_mode))
        except ValueError:
            raise ConfigError(
                "sampling_mode", f"unknown sampling mode {self.sampling_mode!r}"
            ) from None

    @property
    def activation_probability(self) -> float:
        """Probability p = L/k_d that a leading tap is an active path."""
        return self.path_count / self.k_d


@dataclass(frozen=True)
class Seed:
    """A master seed plus a derivation path of 64-bit labels.

    Derived streams are a pure function of ``(master, path)``: the pair is fed
    to :class:`numpy.random.SeedSequence` as entropy and spawn key.
    """

    master: int
    path: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        for label in (self.master, *self.path):
            if isinstance(label, bool) or not isinstance(label, int | np.integer):
                raise ConfigError("seed", f"labels must be integers, got {label!r}")
            if not 0 <= label < _UINT64:
                raise ConfigError("seed", f"label {label} is not a 64-bit unsigned value")

    def child(self, *labels: int) -> Seed:
        return Seed(self.master, self.path + tuple(int(x) for x in labels))

    def generator(self) -> np.random.Generator:
        sequence = np.random.SeedSequence(entropy=self.master, spawn_key=self.path)
        return np.random.default_rng(sequence)


@dataclass
class ChannelRealization:
    """Sparse real channel vector of length k_c, stored as support + gains."""

    length: int
    support: np.ndarray  # sorted delay indices, all < k_d
    gains: np.ndarray  # amplitudes aligned with support

    def to_vector(self) -> np.ndarray:
        h = np.zeros(self.length)
        h[self.support] = self.gains
        return h

    @property
    def energy(self) -> float:
        return float(np.sum(self.gains**2))


@dataclass
class FrequencySubset:
    """The m harmonic indices composing a frequency-domain training signal."""

    k_c: int
    indices: np.ndarray  # strictly increasing, in [0, k_c)

    def __post_init__(self) -> None:
        idx = np.asarray(self.indices, dtype=np.int64)
        if idx.ndim != 1 or idx.size < 1 or idx.size > self.k_c:
            raise ConfigError("indices", f"need 1..{self.k_c} indices, got {idx.size}")
        if np.any(np.diff(idx) <= 0):
            raise ConfigError("indices", "must be strictly increasing")
        if idx[0] < 0 or idx[-1] >= self.k_c:
            raise ConfigError("indices", f"must lie in [0, {self.k_c})")
        self.indices = idx

    @property
    def m(self) -> int:
        return int(self.indices.size)


@dataclass
class ImpulseObservation:
    """Noisy impulse response: √(snr·k_c)·h + z."""

    samples: np.ndarray  # real, length k_c
    snr: float
    noise_std: float = 1.0  # 0 in noiseless test mode


@dataclass
class FrequencyObservation:
    """Projected frequency-domain measurements √(snr·k_c/m)·λ + ẑ."""

    subset: FrequencySubset
    measurements: np.ndarray  # complex, length m
    snr: float
    noise_std: float = 1.0

    @property
    def k_c(self) -> int:
        return self.subset.k_c

    @property
    def scale(self) -> float:
        return math.sqrt(self.snr * self.k_c / self.subset.m)

    def dictionary(self, k_d: int) -> np.ndarray:
        """Return the m×k_d partial-harmonic sensing matrix (delays < k_d)."""
        phase = np.outer(self.subset.indices, np.arange(k_d)) / self.k_c
        return self.scale * np.exp(-2j * np.pi * phase)


@dataclass
class GaussianObservation:
    """Measurements through an i.i.d. Gaussian compressing matrix."""

    matrix: np.ndarray  # m×k_d, entries Normal(0, 1/k_c)
    measurements: np.ndarray  # real, length m
    snr: float
    k_c: int
    noise_std: float = 1.0

    @property
    def scale(self) -> float:
        return math.sqrt(self.snr * self.k_c / self.matrix.shape[0])

    def dictionary(self, k_d: int) -> np.ndarray:
        return self.scale * self.matrix[:, :k_d]


@dataclass
class ChannelEstimate:
    """Estimated channel vector plus the support an estimator reports."""

    estimate: np.ndarray  # real, length k_c
    detected_support: np.ndarray
    method: Method
    residual_norms: list[float] = field(default_factory=list)
    imaginary_residue: float = 0.0  # ‖Im‖ dropped when taking the real part
    rank_deficient: bool = False


@dataclass(frozen=True)
class EvaluationReport:
    """Squared error and support detection quality of one estimate."""

    squared_error: float
    support_precision: float
    support_recall: float


@dataclass
class TheoryCurve:
    """Values of a theoretical (or integrated empirical) quantity over an SNR grid."""

    snr_grid: np.ndarray
    values: np.ndarray
    label: str

    def __post_init__(self) -> None:
        self.snr_grid = np.asarray(self.snr_grid, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.snr_grid.shape != self.values.shape:
            raise ConfigError("values", "must align with snr_grid")
        if np.any(np.diff(self.snr_grid) <= 0):
            raise ConfigError("snr_grid", "must be strictly increasing")


@dataclass(frozen=True)
class ComparisonRecord:
    """Exact-pattern-recovery training cost against almost-perfect recovery."""

    k_c: int
    path_count: int
    snr: float
    fletcher_measurements: float  # (8/snr)·(1+snr)·L·ln(k_c−L)
    fletcher_energy: float  # ≈ 8·L·ln(k_c−L)
    ours_measurements: int  # ceil(c·L·ln(k_c/L))
    ours_energy: float  # 2·L·ln(k_c/L)

    @property
    def energy_ratio(self) -> float:
        return self.fletcher_energy / self.ours_energy


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a Monte-Carlo sweep depends on, seed included."""

    params: ModelParams
    snr_grid: tuple[float, ...]
    scheme: Scheme = Scheme.IMPULSE
    estimator: Method = Method.THRESHOLD
    snr_relative: bool = True  # grid given in multiples of SNR₀
    trials_per_point: int = 100
    master_seed: int = 0
    epsilon: float = 0.25
    measurements: int | None = None
    rip_constant: float | None = None  # m from the harmonic RIP count when set
    noiseless: bool = False
    sparsity: int | None = None  # defaults to L
    known_sparsity: bool = True
    omp_delta: float = 0.0
    iht_iterations: int = 100
    rip_harmonic_constant: float = 1.0
    rip_gaussian_constant: float = 4.0
    measurement_constant: float = 1.0

    def __post_init__(self) -> None:
        if not isinstance(self.params, ModelParams):
            raise ConfigError("params", "must be a ModelParams")
        try:
            object.__setattr__(self, "scheme", Scheme(self.scheme))
        except ValueError:
            raise ConfigError("scheme", f"unknown scheme {self.scheme!r}") from None
        try:
            object.__setattr__(self, "estimator", Method(self.estimator))
        except ValueError:
            raise ConfigError(
                "estimator", f"unknown estimator {self.estimator!r}"
            ) from None

        grid = tuple(self.snr_grid)
        if not grid:
            raise ConfigError("snr_grid", "must not be empty")
        for value in grid:
            if isinstance(value, bool) or not isinstance(value, int | float):
                raise ConfigError("snr_grid", f"entries must be numbers, got {value!r}")
            if not math.isfinite(value) or value <= 0:
                raise ConfigError("snr_grid", f"entries must be positive, got {value}")
        if len(set(grid)) != len(grid):
            raise ConfigError("snr_grid", "entries must be distinct")
        object.__setattr__(self, "snr_grid", tuple(float(x) for x in grid))

        _require_int("trials_per_point", self.trials_per_point)
        _require_int("master_seed", self.master_seed, minimum=0)
        if self.master_seed >= _UINT64:
            raise ConfigError("master_seed", "must fit in 64 bits")
        _require_int("iht_iterations", self.iht_iterations)
        if not 0 < self.epsilon < 1:
            raise ConfigError("epsilon", f"must lie in (0, 1), got {self.epsilon}")
        if self.omp_delta < 0:
            raise ConfigError("omp_delta", f"must be >= 0, got {self.omp_delta}")
        for name in (
            "rip_harmonic_constant",
            "rip_gaussian_constant",
            "measurement_constant",
        ):
            if getattr(self, name) <= 0:
                raise ConfigError(name, "must be positive")
        if self.sparsity is not None:
            _require_int("sparsity", self.sparsity)

        if self.scheme is Scheme.IMPULSE:
            if self.estimator not in IMPULSE_METHODS:
                raise ConfigError(
                    "estimator",
                    f"{self.estimator} needs compressed measurements, not impulse probing",
                )
            if (
                self.estimator is Method.THRESHOLD
                and self.params.gain_model is not GainModel.CONSTANT
            ):
                raise ConfigError(
                    "estimator", "threshold detection assumes constant-magnitude gains"
                )
        else:
            if self.estimator not in COMPRESSED_METHODS:
                raise ConfigError(
                    "estimator", f"{self.estimator} needs impulse probing"
                )
            if self.measurements is None and self.rip_constant is None:
                raise ConfigError(
                    "measurements", f"{self.scheme} training needs measurements or rip_constant"
                )
            if self.measurements is not None:
                _require_int("measurements", self.measurements)
                if self.scheme is Scheme.FREQUENCY and self.measurements > self.params.k_c:
                    raise ConfigError(
                        "measurements", f"must not exceed k_c ({self.params.k_c})"
                    )
            elif self.rip_constant <= 0:
                raise ConfigError("rip_constant", "must be positive")

    def to_dict(self) -> dict:
        """Plain JSON-compatible mirror of this config."""
        return {
            "params": {
                "k_c": int(self.params.k_c),
                "k_d": int(self.params.k_d),
                "path_count": int(self.params.path_count),
                "gain_model": self.params.gain_model.value,
                "sampling_mode": self.params.sampling_mode.value,
            },
            "scheme": self.scheme.value,
            "estimator": self.estimator.value,
            "snr_grid": list(self.snr_grid),
            "snr_relative": self.snr_relative,
            "trials_per_point": int(self.trials_per_point),
            "master_seed": int(self.master_seed),
            "epsilon": self.epsilon,
            "measurements": self.measurements,
            "rip_constant": self.rip_constant,
            "noiseless": self.noiseless,
            "sparsity": self.sparsity,
            "known_sparsity": self.known_sparsity,
            "omp_delta": self.omp_delta,
            "iht_iterations": int(self.iht_iterations),
            "rip_harmonic_constant": self.rip_harmonic_constant,
            "rip_gaussian_constant": self.rip_gaussian_constant,
            "measurement_constant": self.measurement_constant,
        }


@dataclass(frozen=True)
class SweepPoint:
    """Aggregated trials at one SNR."""

    snr: float
    mean_mse: float
    std_err: float
    mean_precision: float
    mean_recall: float
    n_trials: int


@dataclass
class SweepResult:
    """Empirical MSE curve of a sweep, with provenance."""

    points: list[SweepPoint] = field(default_factory=list)
    snr_zero: float = math.nan
    config_hash: str = ""
    master_seed: int = 0

    @property
    def snr(self) -> np.ndarray:
        return np.array([p.snr for p in self.points], dtype=float)

    @property
    def mean_mse(self) -> np.ndarray:
        return np.array([p.mean_mse for p in self.points], dtype=float)

    @property
    def std_err(self) -> np.ndarray:
        return np.array([p.std_err for p in self.points], dtype=float)


@dataclass(frozen=True)
class TransitionEstimate:
    """Where an MSE curve first drops through *level*; ``snr`` is None if it never does."""

    level: float
    snr: float | None = None

    @property
    def found(self) -> bool:
        return self.snr is not None


@dataclass
class EmpiricalInformation:
    """Mutual information integrated from a measured MSE curve, and its penalty."""

    information: TheoryCurve
    penalty: TheoryCurve
    starts_near_zero: bool = True
