"""Command-line entry point: ``forwardreg {regress,bandit,drift,bounds}``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import yaml

from .harness import (
    PRESETS,
    ConfigError,
    ExperimentConfig,
    bounds_table,
    emit_bounds_csv,
    load_config,
    load_preset,
    run_experiment,
    write_outputs,
)

KIND_FOR = {"regress": ("regression",), "bandit": ("bandit",), "drift": ("nonstationary",)}


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 unsigned bits, got {text}")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="forwardreg", description="Online regression and linear-bandit experiments.")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "regress": "online regression runs (presets fig1, fig2)",
        "bandit": "stationary linear bandits (preset fig3)",
        "drift": "drifting linear bandits (presets abrupt, slow)",
        "bounds": "tabulate bound evaluators on a grid of horizons",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--config", type=Path, help="YAML experiment config")
        src.add_argument("--preset", choices=PRESETS, help="bundled experiment config")
        p.add_argument("--out", type=Path, required=True, help="output directory")
        p.add_argument("--seed", type=_u64, help="override master_seed")
        p.add_argument("--replicates", type=_positive, help="override the replicate count")
        if name != "bounds":
            p.add_argument("--jobs", type=_positive, default=1, help="worker processes (output does not depend on it)")
            p.add_argument("--traces", action="store_true", help="also write per-replicate traces.csv")
            p.add_argument("--svg", action="store_true", help="also write a summary.svg line chart")
    return parser


def _load(args) -> ExperimentConfig:
    cfg = load_preset(args.preset) if args.preset else load_config(args.config)
    raw = cfg.to_dict()
    if args.seed is not None:
        raw["master_seed"] = args.seed
    if args.replicates is not None:
        raw["replicates"] = args.replicates
    if getattr(args, "traces", False):
        raw["outputs"]["traces"] = True
    if getattr(args, "svg", False):
        raw["outputs"]["svg"] = True
    return ExperimentConfig.from_dict(raw)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load(args)
        if args.command == "bounds":
            args.out.mkdir(parents=True, exist_ok=True)
            path = emit_bounds_csv(bounds_table(cfg), args.out / "bounds.csv")
            print(path)
            return 0
        if cfg.kind not in KIND_FOR[args.command]:
            raise ConfigError(f"'{args.command}' runs {KIND_FOR[args.command][0]} configs, this one is {cfg.kind!r}")
        result = run_experiment(cfg, n_jobs=args.jobs)
        for path in write_outputs(result, args.out):
            print(path)
    except (ConfigError, yaml.YAMLError) as exc:
        print(f"forwardreg: config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"forwardreg: I/O error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
