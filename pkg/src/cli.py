"""Command-line interface for the surrogate experiments.

Usage:
    python -m src.cli hull --config experiment.env
    python -m src.cli all --seed 11 --out results/seed11
    python -m src.cli train --set gpr.n_inducing=40

Exit codes: 0 success, 1 other library error, 2 configuration error, 3 numeric failure.
"""

import argparse
import logging
import sys
from typing import Dict, List, Optional

from src import __version__
from src.config import KEYS, Config, ExperimentConfig
from src.exceptions import ConfigError, NumericError, SurrogateError
from src.scripts.build_hull import run_hull
from src.scripts.common import setup_logging
from src.scripts.evaluate_models import run_evaluate
from src.scripts.generate_data import run_gen_data
from src.scripts.run_sweep import run_sweep
from src.scripts.sample_invariants import run_sample
from src.scripts.train_models import run_train

logger = logging.getLogger(__name__)

COMMANDS = {
    "hull": (run_hull, "build the admissible invariant hull"),
    "sample": (run_sample, "anneal the space-filling invariant designs"),
    "gen-data": (run_gen_data, "evaluate the law and write training datasets"),
    "train": (run_train, "fit one surrogate per dataset"),
    "evaluate": (run_evaluate, "stress error of every surrogate on a fresh test set"),
    "sweep": (run_sweep, "extrapolation sweep along a single-component load path"),
}
PIPELINE = ("hull", "sample", "gen-data", "train", "evaluate", "sweep")


def _overrides(pairs: List[str]) -> Dict[str, str]:
    overrides = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep:
            raise ConfigError(f"Expected KEY=VALUE, got {pair!r}")
        overrides[key.strip()] = value.strip()
    return overrides


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="file of dotted.key=value settings")
    common.add_argument("--seed", type=int, help="base seed replacing every seeds.* setting")
    common.add_argument(
        "--paper-scale", action="store_true", help="full test, cloud and annealing budgets"
    )
    common.add_argument("--out", metavar="DIR", help="output directory (output.dir)")
    common.add_argument(
        "--set",
        metavar="KEY=VALUE",
        action="append",
        default=[],
        help="override one setting, may be repeated",
    )
    common.add_argument("--log-level", default=Config.LOG_LEVEL, help="DEBUG, INFO, WARNING, ERROR")

    parser = argparse.ArgumentParser(
        prog="invariant-gpr",
        description="Physics-informed kriging surrogates for hyperelastic laws",
        epilog="Settings: " + ", ".join(sorted(KEYS)),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        commands.add_parser(name, parents=[common], help=help_text)
    commands.add_parser("all", parents=[common], help="run every stage in order")
    return parser


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    overrides = _overrides(args.set)
    if args.out:
        overrides["output.dir"] = args.out
    return ExperimentConfig.load(
        args.config, overrides=overrides, paper_scale=args.paper_scale, seed=args.seed
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code."""
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level.upper())

    try:
        cfg = load_config(args)
        logger.info(f"Config hash: {cfg.config_hash}")
        stages = PIPELINE if args.command == "all" else (args.command,)
        for name in stages:
            COMMANDS[name][0](cfg)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return ConfigError.exit_code
    except NumericError as e:
        logger.error(f"Numerical failure ({type(e).__name__}): {e}")
        return NumericError.exit_code
    except SurrogateError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return SurrogateError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
