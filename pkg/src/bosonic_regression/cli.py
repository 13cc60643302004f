"""Command-line entry point: ``bosonic-regression <subcommand> [options]``.

Exit codes: 0 success, 1 config/schema/data error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import experiments
from .errors import (
    BosonicRegressionError,
    IntegrationUnstableError,
    TruncationNotConvergedError,
)

COMMANDS = {
    "sweep": experiments.run_sweep,
    "overlay": experiments.run_overlay,
    "catalyst": experiments.run_catalyst_comparison,
    "qubo": experiments.run_qubo_report,
    "spectrum": experiments.run_spectrum,
    "lsq": experiments.run_lsq,
}


def _grid(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None


def _truncation(text: str):
    return text if text == "auto" else int(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bosonic-regression", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func in COMMANDS.items():
        p = sub.add_parser(name, help=(func.__doc__ or name).strip().splitlines()[0])
        p.add_argument("-c", "--config", help="TOML config file")
        p.add_argument("--preset", help="iris-m1, iris-m2, penguins-m3 or random")
        p.add_argument("--output-dir", "-o")
        p.add_argument("--T-grid", type=_grid, help="comma-separated annealing times")
        p.add_argument("--chi-grid", type=_grid, help="comma-separated Kerr strengths")
        p.add_argument("--d", type=_truncation, help="Fock truncation per mode, or 'auto'")
        p.add_argument("--workers", type=int)
        p.add_argument(
            "--set",
            dest="sets",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override any dotted config key (value parsed as TOML)",
        )
        if name == "overlay":
            p.add_argument("--T", dest="overlay_T", type=float)
            p.add_argument("--chi", dest="overlay_chi", type=float)
    return parser


def _overrides(args: argparse.Namespace) -> dict:
    values = {}
    for item in args.sets:
        if "=" not in item:
            raise experiments.ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, raw = item.split("=", 1)
        values[key.strip()] = experiments.parse_value(raw.strip())
    flags = {
        "preset": args.preset,
        "output_dir": args.output_dir,
        "anneal.T_grid": args.T_grid,
        "anneal.chi_grid": args.chi_grid,
        "truncation.d": args.d,
        "workers": args.workers,
        "overlay.T": getattr(args, "overlay_T", None),
        "overlay.chi": getattr(args, "overlay_chi", None),
    }
    values.update({k: v for k, v in flags.items() if v is not None})
    return values


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = experiments.load_config(args.config, _overrides(args))
        outputs = COMMANDS[args.command](cfg)
    except (IntegrationUnstableError, TruncationNotConvergedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (BosonicRegressionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for kind, path in outputs.items():
        print(f"{kind}: {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
