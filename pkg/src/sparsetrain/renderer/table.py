"""CSV emission and read-back for sweeps, theory curves and comparisons.

Every file has a header row, one record per line terminated by "\\n", and
reals written with 9 significant digits.
"""

from __future__ import annotations

import csv
import io
import math
from collections.abc import Callable, Iterable, Sequence
from pathlib import Path

from sparsetrain.errors import ConfigError
from sparsetrain.model import ComparisonRecord, SweepPoint, SweepResult, TheoryCurve

SWEEP_COLUMNS = (
    "snr",
    "snr_over_snr0",
    "mean_mse",
    "std_err",
    "mean_precision",
    "mean_recall",
    "n_trials",
)
THEORY_COLUMNS = (
    "snr",
    "snr_over_snr0",
    "mmse_hc",
    "mmse_hg",
    "mi_hc",
    "mi_hg",
    "rdf_ratio_hc",
    "rdf_ratio_hg",
)
COMPARE_COLUMNS = (
    "k_c",
    "L",
    "snr",
    "fletcher_measurements",
    "fletcher_energy",
    "ours_energy",
    "ours_measurements",
    "energy_ratio",
)


def format_number(value: float | int) -> str:
    if isinstance(value, int):
        return str(value)
    return f"{value:.9g}"


def _relative(snr: float, snr0: float) -> float:
    if not math.isfinite(snr0) or snr0 <= 0:
        return math.nan
    return snr / snr0


def _to_csv(columns: Sequence[str], rows: Iterable[Sequence[float | int]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        if len(row) != len(columns):
            raise ValueError(f"row has {len(row)} fields, header has {len(columns)}")
        writer.writerow([format_number(v) for v in row])
    return buffer.getvalue()


def sweep_csv(result: SweepResult) -> str:
    return _to_csv(
        SWEEP_COLUMNS,
        (
            (
                p.snr,
                _relative(p.snr, result.snr_zero),
                p.mean_mse,
                p.std_err,
                p.mean_precision,
                p.mean_recall,
                int(p.n_trials),
            )
            for p in result.points
        ),
    )


def theory_csv(curves: Sequence[TheoryCurve], snr0: float) -> str:
    """One row per grid SNR with a column for each curve of THEORY_COLUMNS."""
    by_label = {c.label: c for c in curves}
    missing = [name for name in THEORY_COLUMNS[2:] if name not in by_label]
    if missing:
        raise ValueError(f"missing theory curves: {', '.join(missing)}")
    grid = by_label["mmse_hc"].snr_grid
    return _to_csv(
        THEORY_COLUMNS,
        (
            (float(s), _relative(float(s), snr0))
            + tuple(float(by_label[name].values[i]) for name in THEORY_COLUMNS[2:])
            for i, s in enumerate(grid)
        ),
    )


def compare_csv(records: Iterable[ComparisonRecord]) -> str:
    return _to_csv(
        COMPARE_COLUMNS,
        (
            (
                int(r.k_c),
                int(r.path_count),
                r.snr,
                r.fletcher_measurements,
                r.fletcher_energy,
                r.ours_energy,
                int(r.ours_measurements),
                r.energy_ratio,
            )
            for r in records
        ),
    )


def write_text(text: str, path: Path) -> None:
    """Write *text* byte for byte; parent directories are created."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(text.encode("utf-8"))


def read_csv_file(path: Path) -> str:
    """Text of the CSV at *path*; undecodable bytes are a ``csv`` error."""
    try:
        return path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise ConfigError("csv", f"{path} is not UTF-8 text: {e.reason}") from None


def read_table(text: str) -> tuple[list[str], list[list[str]]]:
    """Split CSV *text* into its header and rows, checking every row's arity."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ConfigError("csv", "missing header row")
    header, body = rows[0], rows[1:]
    for number, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise ConfigError("csv", f"line {number} has {len(row)} fields, expected {len(header)}")
    return header, body


def parse_cell(
    value: str, line: int, convert: Callable[[str], float] = float
) -> float:
    """Convert one CSV cell, naming its line on failure."""
    try:
        return convert(value)
    except ValueError:
        raise ConfigError("csv", f"line {line}: {value!r} is not a number") from None


def float_column(body: Sequence[Sequence[str]], index: int) -> list[float]:
    """Column *index* of a table body as floats; body rows start on line 2."""
    return [parse_cell(row[index], line) for line, row in enumerate(body, start=2)]


def read_sweep_csv(text: str) -> SweepResult:
    """Parse the output of :func:`sweep_csv` back into a SweepResult."""
    header, body = read_table(text)
    if tuple(header) != SWEEP_COLUMNS:
        raise ConfigError("csv", f"not a sweep table: header {','.join(header)}")
    points = []
    snr0 = math.nan
    for line, row in enumerate(body, start=2):
        snr, relative, mse, se, precision, recall = (parse_cell(v, line) for v in row[:6])
        if math.isnan(snr0) and math.isfinite(relative) and relative > 0:
            snr0 = snr / relative
        points.append(
            SweepPoint(
                snr=snr,
                mean_mse=mse,
                std_err=se,
                mean_precision=precision,
                mean_recall=recall,
                n_trials=parse_cell(row[6], line, int),
            )
        )
    return SweepResult(points=points, snr_zero=snr0)
