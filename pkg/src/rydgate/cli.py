"""Command-line entry point: ``rydgate <subcommand> [options]``.

Every subcommand builds its dataset from the merged configuration, writes
``<subcommand>_<hash>.csv`` (or ``.json``) plus a PNG rendering into the
output directory, and prints a short summary. Exit status is 0 on success,
2 for invalid input and 3 when a numerical procedure fails.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .config import ENV_PREFIX, FORMATS, RunConfig, load_config
from .datasets import BUILDERS
from .errors import NumericalError, ValidationError
from .gate import normalize_regime
from .report import write_report

SUBCOMMANDS = tuple(BUILDERS) + ("all",)
EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed '{text}'") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rydgate",
        description="Error budgets for neutral-atom qubits and Rydberg gates.",
        epilog=f"Environment variables {ENV_PREFIX}<SECTION>_<KEY> override config-file values.",
    )
    parser.add_argument("--version", action="version", version=f"rydgate {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="TOML or JSON configuration file")
    common.add_argument("--out", metavar="DIR", help="output directory (default: results)")
    common.add_argument("--format", choices=FORMATS, help="data file format (default: csv)")
    common.add_argument("--seed", type=_seed, help="random seed for sampled quantities")
    common.add_argument("--regime", choices=("large-rabi", "large-dd"),
                        help="gate regime for gate-opt and simulate")
    common.add_argument("--no-plots", action="store_true", help="skip PNG rendering")
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common], help=f"write the {name} dataset"
                       if name != "all" else "run every subcommand with one configuration")
    return parser


def _overrides(args) -> dict:
    out: dict = {}
    run = out.setdefault("run", {})
    if args.out is not None:
        run["output_dir"] = args.out
    if args.format is not None:
        run["output_format"] = args.format
    if args.seed is not None:
        run["seed"] = args.seed
    if args.no_plots:
        run["plots"] = False
    if args.regime is not None:
        # Let the regime pick its own default Rabi frequency and shift.
        out["gate"] = {"regime": normalize_regime(args.regime)}
    return out


def run(subcommand: str, cfg: RunConfig, stream=None) -> list:
    """Build and write one subcommand's dataset (or all of them); return the written paths."""
    stream = stream or sys.stdout
    names = list(BUILDERS) if subcommand == "all" else [subcommand]
    if subcommand not in SUBCOMMANDS:
        raise ValidationError(f"unknown subcommand '{subcommand}'")
    config_hash = cfg.hash()
    written = []
    for name in names:
        report = BUILDERS[name](cfg)
        meta = {
            "rydgate": __version__,
            "subcommand": name,
            "config-hash": config_hash,
            "seed": cfg.run.seed,
            "regime": cfg.gate.regime,
        }
        paths = write_report(report, cfg.run.output_dir, config_hash, meta,
                             cfg.run.output_format, cfg.run.plots)
        written += paths
        print(f"[{name}] -> {paths[0]}", file=stream)
        for line in report.summary:
            print(f"  {line}", file=stream)
    return written


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, overrides=_overrides(args))
        run(args.subcommand, cfg)
    except ValidationError as exc:
        print(f"rydgate: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as exc:
        print(f"rydgate: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
