"""Read experiment configuration documents (JSON or YAML) into ExperimentConfig."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, fields
from pathlib import Path

from sparsetrain.errors import ConfigError
from sparsetrain.model import ExperimentConfig, GainModel, Method, ModelParams, Scheme

logger = logging.getLogger(__name__)

_PARAM_KEYS = {"k_c", "k_d", "path_count", "gain_model", "sampling_mode"}
_REQUIRED_PARAM_KEYS = ("k_c", "k_d", "path_count")
_CONFIG_KEYS = {f.name for f in fields(ExperimentConfig)} | {"out"}
_BOOL_KEYS = ("snr_relative", "noiseless", "known_sparsity")
_REAL_KEYS = (
    "epsilon",
    "omp_delta",
    "rip_constant",
    "rip_harmonic_constant",
    "rip_gaussian_constant",
    "measurement_constant",
)


@dataclass(frozen=True)
class LoadedConfig:
    """A validated experiment plus the output path the document asks for."""

    experiment: ExperimentConfig
    out: Path | None = None


def read_document(path: Path) -> dict:
    """Parse *path* as YAML when its suffix says so, as JSON otherwise."""
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise ConfigError("config", f"{path} is not UTF-8 text: {e.reason}") from None
    if path.suffix.lower() in (".yaml", ".yml"):
        import yaml

        try:
            doc = yaml.safe_load(text)
        except yaml.YAMLError as e:
            raise ConfigError("config", f"invalid YAML in {path}: {e}") from None
    else:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError("config", f"invalid JSON in {path}: {e}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config", f"{path} must hold a mapping at the top level")
    return doc


def _default_estimator(scheme: Scheme, gain_model: GainModel) -> Method:
    if scheme is not Scheme.IMPULSE:
        return Method.OMP
    if gain_model is GainModel.GAUSSIAN:
        return Method.BG_POSTERIOR
    return Method.THRESHOLD


def _parse_params(raw: object) -> ModelParams:
    if not isinstance(raw, dict):
        raise ConfigError("params", "must be a mapping")
    unknown = sorted(set(raw) - _PARAM_KEYS)
    if unknown:
        raise ConfigError(f"params.{unknown[0]}", "unknown key")
    for key in _REQUIRED_PARAM_KEYS:
        if key not in raw:
            raise ConfigError(f"params.{key}", "is required")
    try:
        return ModelParams(**raw)
    except ConfigError as e:
        raise ConfigError(f"params.{e.field}", e.reason) from None


def config_from_dict(
    doc: dict, *, seed: int | None = None, trials: int | None = None
) -> LoadedConfig:
    """Validate a configuration mapping; *seed* and *trials* override its values."""
    unknown = sorted(set(doc) - _CONFIG_KEYS)
    if unknown:
        raise ConfigError(unknown[0], "unknown key")
    if "params" not in doc:
        raise ConfigError("params", "is required")
    if "snr_grid" not in doc:
        raise ConfigError("snr_grid", "is required")

    values = dict(doc)
    out = values.pop("out", None)
    if out is not None and not isinstance(out, str):
        raise ConfigError("out", "must be a path string")
    params = _parse_params(values.pop("params"))

    grid = values.pop("snr_grid")
    if not isinstance(grid, list):
        raise ConfigError("snr_grid", "must be a list of numbers")
    for key in _BOOL_KEYS:
        if key in values and not isinstance(values[key], bool):
            raise ConfigError(key, f"must be true or false, got {values[key]!r}")
    for key in _REAL_KEYS:
        value = values.get(key)
        if value is not None and (
            isinstance(value, bool) or not isinstance(value, int | float)
        ):
            raise ConfigError(key, f"must be a number, got {value!r}")

    if seed is not None:
        values["master_seed"] = seed
    if trials is not None:
        values["trials_per_point"] = trials

    scheme = values.get("scheme", Scheme.IMPULSE)
    try:
        scheme = Scheme(scheme)
    except ValueError:
        raise ConfigError("scheme", f"unknown scheme {scheme!r}") from None
    values["scheme"] = scheme
    values.setdefault("estimator", _default_estimator(scheme, params.gain_model))

    experiment = ExperimentConfig(params=params, snr_grid=tuple(grid), **values)
    logger.debug("Loaded config: %s", experiment.to_dict())
    return LoadedConfig(experiment=experiment, out=Path(out) if out else None)


def load_config(
    path: Path,
    *,
    seed: int | None = None,
    trials: int | None = None,
    out: Path | None = None,
) -> LoadedConfig:
    """Read and validate the experiment document at *path*.

    *seed*, *trials* and *out* take precedence over the document's
    ``master_seed``, ``trials_per_point`` and ``out``.
    """
    loaded = config_from_dict(read_document(path), seed=seed, trials=trials)
    if out is not None:
        return LoadedConfig(experiment=loaded.experiment, out=out)
    return loaded
