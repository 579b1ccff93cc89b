"""Orchestrators behind the CLI subcommands: theory, simulate, sweep, compare, plot.

Each returns the text meant for stdout and writes any requested files.
"""

from __future__ import annotations

import logging
from pathlib import Path

from sparsetrain import montecarlo
from sparsetrain.analysis import locate_transition
from sparsetrain.core import baron_bounds, detection_threshold, rate_distortion, snr_zero
from sparsetrain.errors import ConfigError
from sparsetrain.model import ComparisonRecord, ExperimentConfig, TheoryCurve
from sparsetrain.renderer.svg import Series, render_svg
from sparsetrain.renderer.table import (
    SWEEP_COLUMNS,
    THEORY_COLUMNS,
    compare_csv,
    float_column,
    read_csv_file,
    read_table,
    sweep_csv,
    theory_csv,
    write_text,
)
from sparsetrain.theory import fletcher_compare, rip_counts, theory_curves

logger = logging.getLogger(__name__)

DEFAULT_PLOT_SERIES = {
    SWEEP_COLUMNS: ("mean_mse",),
    THEORY_COLUMNS: ("mmse_hc", "mmse_hg"),
}


def _key_values(values: dict[str, float | int]) -> str:
    lines = []
    for key, value in values.items():
        text = str(value) if isinstance(value, int) else f"{value:.9g}"
        lines.append(f"{key}={text}")
    return "\n".join(lines) + "\n"


def theory_summary(
    config: ExperimentConfig, *, baron_snr: float = 1.0
) -> dict[str, float | int]:
    """Scalar theory figures of *config*'s channel dimensions."""
    params = config.params
    bounds = baron_bounds(params, baron_snr)
    counts = rip_counts(params, config.rip_harmonic_constant, config.rip_gaussian_constant)
    return {
        "SNR0": snr_zero(params),
        "R": rate_distortion(params),
        "T": detection_threshold(params),
        "baron_snr": baron_snr,
        "min_measurements": int(bounds["min_measurements"]),
        "min_energy": bounds["min_energy"],
        "harmonic_m": counts["harmonic_m"],
        "gaussian_m": counts["gaussian_m"],
    }


def compute_theory_curves(config: ExperimentConfig) -> list[TheoryCurve]:
    grid = montecarlo.resolve_snr_grid(config)
    return theory_curves(config.params, grid, config.epsilon)


def run_theory(
    config: ExperimentConfig,
    *,
    out: Path | None = None,
    svg: Path | None = None,
    baron_snr: float = 1.0,
) -> str:
    """Summarize the theory figures; the curves go to *out* (CSV) and *svg*."""
    summary = theory_summary(config, baron_snr=baron_snr)
    if out is not None or svg is not None:
        curves = compute_theory_curves(config)
        snr0 = summary["SNR0"]
        if out is not None:
            write_text(theory_csv(curves, snr0), out)
            logger.info("Wrote %s", out)
        if svg is not None:
            by_label = {c.label: c for c in curves}
            series = [
                Series(label, by_label[label].snr_grid / snr0, by_label[label].values)
                for label in ("mmse_hc", "mmse_hg")
            ]
            write_text(render_svg(series, title="Theoretical MMSE", y_label="MMSE"), svg)
            logger.info("Wrote %s", svg)
    return _key_values(summary)


def run_simulate(config: ExperimentConfig, snr_index: int, trial_index: int) -> str:
    """One trial, reported field by field."""
    outcome = montecarlo.simulate_trial(config, snr_index, trial_index)
    report = outcome.report
    values: dict[str, float | int] = {
        "snr": outcome.snr,
        "snr_over_snr0": outcome.snr / snr_zero(config.params),
        "active_paths": int(outcome.channel.support.size),
        "channel_energy": outcome.channel.energy,
        "detected_paths": int(outcome.estimate.detected_support.size),
        "squared_error": report.squared_error,
        "support_precision": report.support_precision,
        "support_recall": report.support_recall,
    }
    text = _key_values(values)
    text += "true_support=" + " ".join(str(i) for i in outcome.channel.support) + "\n"
    text += "detected_support=" + " ".join(
        str(i) for i in outcome.estimate.detected_support
    ) + "\n"
    if outcome.estimate.rank_deficient:
        text += "rank_deficient=true\n"
    return text


def run_sweep(
    config: ExperimentConfig,
    *,
    out: Path | None = None,
    svg: Path | None = None,
    workers: int | None = None,
) -> str:
    """Run the sweep; return its CSV unless *out* takes it."""
    result = montecarlo.run_sweep(config, workers=workers)
    transition = locate_transition(result)
    if transition.found:
        logger.info(
            "MSE falls through %.2g at snr=%.6g (%.3g x SNR0)",
            transition.level,
            transition.snr,
            transition.snr / result.snr_zero,
        )
    text = sweep_csv(result)
    if svg is not None:
        series = [Series("mean_mse", result.snr / result.snr_zero, result.mean_mse)]
        write_text(render_svg(series, title="Empirical MSE", y_label="MSE"), svg)
        logger.info("Wrote %s", svg)
    if out is not None:
        write_text(text, out)
        logger.info("Wrote %s", out)
        return ""
    return text


def compare_records(config: ExperimentConfig) -> list[ComparisonRecord]:
    return [
        fletcher_compare(config.params, float(snr), config.measurement_constant)
        for snr in montecarlo.resolve_snr_grid(config)
    ]


def run_compare(config: ExperimentConfig, *, out: Path | None = None) -> str:
    """Energy comparison at every grid SNR; return its CSV unless *out* takes it."""
    text = compare_csv(compare_records(config))
    if out is not None:
        write_text(text, out)
        logger.info("Wrote %s", out)
        return ""
    return text


def run_plot(
    csv_path: Path, out: Path, *, series: list[str] | None = None
) -> Path:
    """Chart columns of a sweep or theory CSV against snr_over_snr0."""
    header, rows = read_table(read_csv_file(csv_path))
    columns = tuple(header)
    if columns not in DEFAULT_PLOT_SERIES:
        raise ConfigError("csv", f"{csv_path} is not a sweep or theory table")
    names = series or list(DEFAULT_PLOT_SERIES[columns])
    for name in names:
        if name not in columns[2:]:
            raise ConfigError("series", f"unknown column {name!r}")

    x = float_column(rows, 1)
    lines = [Series(name, x, float_column(rows, columns.index(name))) for name in names]
    is_sweep = columns == SWEEP_COLUMNS
    title = "Empirical MSE" if is_sweep else "Theory curves"
    write_text(render_svg(lines, title=title, y_label="MSE" if is_sweep else "value"), out)
    logger.info("Wrote %s", out)
    return out
