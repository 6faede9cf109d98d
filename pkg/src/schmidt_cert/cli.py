"""Command line front end.

    schmidt-cert <experiment> [--config FILE] [--seed N] [--out DIR] [--threads N]

Experiments: fig2, fermion, mu-scan, complexity-scan, certify.  The config
file is JSON with the keys of :class:`~schmidt_cert.experiments
.ExperimentConfig`; command line options override the file.  Exit codes:
0 success, 2 configuration error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import ConfigError, ResourceError
from .experiments import EXPERIMENTS, RUNNERS, ExperimentConfig


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schmidt-cert",
        description="Schmidt-number certification experiments by random Pauli sampling",
    )
    parser.add_argument("experiment", choices=EXPERIMENTS)
    parser.add_argument("--config", type=Path, default=None, help="JSON config file")
    parser.add_argument("--seed", type=int, default=0, help="master seed (u64)")
    parser.add_argument("--out", type=str, default="out", help="output directory")
    parser.add_argument("--threads", type=int, default=1, help="parallelism cap")
    return parser


def load_config(experiment: str, path: Path | None, seed: int, out: str, threads: int) -> ExperimentConfig:
    raw = {}
    if path is not None:
        try:
            raw = json.loads(Path(path).read_text())
        except FileNotFoundError as exc:
            raise ConfigError(f"config file not found: {path}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config file must contain a JSON object")
    raw.update({"seed": seed, "out_dir": out, "threads": threads})
    return ExperimentConfig.from_dict(experiment, raw)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.experiment, args.config, args.seed, args.out, args.threads)
        result = RUNNERS[cfg.experiment](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return 3
    print(json.dumps(result, indent=2, sort_keys=True, default=str))
    return 0


if __name__ == "__main__":
    sys.exit(main())
