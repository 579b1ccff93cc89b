"""Command-line interface for sparsetrain."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from sparsetrain import pipeline
from sparsetrain.config import load_config
from sparsetrain.errors import SparseTrainError

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with status 1."""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _add_config_options(parser: argparse.ArgumentParser, *, out_help: str) -> None:
    parser.add_argument(
        "-c",
        "--config",
        type=Path,
        required=True,
        help="Experiment document (.json, .yaml or .yml)",
    )
    parser.add_argument(
        "--seed", type=int, default=None, help="Override master_seed"
    )
    parser.add_argument(
        "--trials", type=int, default=None, help="Override trials_per_point"
    )
    parser.add_argument("-o", "--out", type=Path, default=None, help=out_help)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="sparsetrain",
        description="Training-energy experiments for sparse multipath channels at low SNR.",
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="store_true",
        help="Enable verbose (debug) output",
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="command")

    theory = commands.add_parser(
        "theory", help="SNR₀, rate distortion, bounds and theory curves"
    )
    _add_config_options(theory, out_help="Write the theory curves to this CSV")
    theory.add_argument(
        "--svg", type=Path, default=None, help="Also chart the MMSE curves as SVG"
    )
    theory.add_argument(
        "--baron-snr",
        type=float,
        default=1.0,
        help="SNR at which to report the measurement lower bound (default: 1)",
    )

    simulate = commands.add_parser("simulate", help="Run and report a single trial")
    _add_config_options(simulate, out_help="Write the report to this file")
    simulate.add_argument(
        "--snr-index", type=int, default=0, help="Index into the sorted SNR grid"
    )
    simulate.add_argument("--trial-index", type=int, default=0, help="Trial number")

    sweep = commands.add_parser("sweep", help="Monte-Carlo sweep to CSV")
    _add_config_options(sweep, out_help="Write the sweep CSV here (default: stdout)")
    sweep.add_argument(
        "--svg", type=Path, default=None, help="Also chart the MSE curve as SVG"
    )
    sweep.add_argument(
        "--threads",
        type=int,
        default=None,
        help="Worker threads (default: $SPARSETRAIN_THREADS, else all CPUs)",
    )

    compare = commands.add_parser(
        "compare", help="Training energy against exact pattern recovery"
    )
    _add_config_options(compare, out_help="Write the comparison CSV here (default: stdout)")

    plot = commands.add_parser("plot", help="Chart a sweep or theory CSV as SVG")
    plot.add_argument("csv", type=Path, help="CSV written by sweep or theory")
    plot.add_argument("-o", "--out", type=Path, required=True, help="SVG output path")
    plot.add_argument(
        "--series",
        nargs="+",
        default=None,
        help="Columns to draw (default: mean_mse, or mmse_hc and mmse_hg)",
    )
    return parser


def _dispatch(args: argparse.Namespace) -> str:
    if args.command == "plot":
        pipeline.run_plot(args.csv, args.out, series=args.series)
        return ""

    loaded = load_config(args.config, seed=args.seed, trials=args.trials, out=args.out)
    config = loaded.experiment
    match args.command:
        case "theory":
            return pipeline.run_theory(
                config, out=loaded.out, svg=args.svg, baron_snr=args.baron_snr
            )
        case "simulate":
            text = pipeline.run_simulate(config, args.snr_index, args.trial_index)
            if loaded.out is not None:
                loaded.out.parent.mkdir(parents=True, exist_ok=True)
                loaded.out.write_text(text, encoding="utf-8")
                return ""
            return text
        case "sweep":
            return pipeline.run_sweep(
                config, out=loaded.out, svg=args.svg, workers=args.threads
            )
        case "compare":
            return pipeline.run_compare(config, out=loaded.out)
    raise AssertionError(f"unhandled command {args.command!r}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_INVALID

    logging.basicConfig(level=logging.WARNING, format="%(message)s")
    if args.verbose:
        logging.getLogger("sparsetrain").setLevel(logging.DEBUG)

    try:
        text = _dispatch(args)
    except SparseTrainError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO

    if text:
        sys.stdout.write(text)
    return EXIT_OK
