"""Command-line scenario runner.

Runs either a JSON config file or a named preset, writing one CSV grid and
one JSON manifest per scenario.  Exit codes: 0 success, 2 configuration
error, 3 when some sweep cells failed but the run completed.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .scenarios import (
    PRESET_NAMES,
    ScenarioConfigError,
    load_scenario_file,
    preset,
    run_scenario,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARTIAL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pktqkd",
        description="Simulate QKD frame transport and report optimized "
        "finite-key rates over parameter sweeps.",
    )
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", type=Path, help="JSON scenario file")
    source.add_argument(
        "--preset", choices=PRESET_NAMES, help="named published parameter grid"
    )
    parser.add_argument(
        "--scale", type=float, default=1.0,
        help="multiply per-pair frame targets (default 1.0)",
    )
    parser.add_argument(
        "--seed", type=int, default=None, help="override every scenario's master seed"
    )
    parser.add_argument(
        "--workers", type=int, default=1, help="concurrent simulation processes"
    )
    parser.add_argument(
        "--out", type=Path, default=None,
        help="output directory (overrides any config value)",
    )
    parser.add_argument(
        "--emit", choices=("csv", "json", "both"), default="both",
        help="which artifacts to write (default both)",
    )
    return parser


def _load_configs(args) -> list:
    if args.preset is not None:
        configs = preset(args.preset)
    else:
        configs = load_scenario_file(args.config)
    if args.scale != 1.0:
        if not args.scale > 0:
            raise ScenarioConfigError("--scale must be positive")
        configs = [
            replace(c, frames_per_pair=max(1, round(c.frames_per_pair * args.scale)))
            for c in configs
        ]
    if args.seed is not None:
        configs = [replace(c, seed=args.seed) for c in configs]
    if args.out is not None:
        configs = [replace(c, output=str(args.out)) for c in configs]
    return configs


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.workers < 1:
        print("error: --workers must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        configs = _load_configs(args)
    except ScenarioConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    any_failures = False
    for config in configs:
        try:
            result = run_scenario(config, workers=args.workers, emit=args.emit)
        except ScenarioConfigError as exc:
            print(f"error: {config.name}: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        wrote = [p for p in (result.csv_path, result.manifest_path) if p]
        where = f" -> {', '.join(wrote)}" if wrote else ""
        print(f"{config.name}: {len(result.rows)} rows, "
              f"{len(result.failures)} failed cells{where}")
        for failure in result.failures:
            print(f"  failed: {failure}", file=sys.stderr)
        any_failures = any_failures or bool(result.failures)
    return EXIT_PARTIAL if any_failures else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
