"""Helpers shared by the pipeline stages: logging setup, artifact paths and stage banners."""

import logging
from contextlib import contextmanager
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Tuple

import colorlog
import numpy as np

from src.config import Config, ExperimentConfig
from src.exceptions import ConfigError
from src.mechanics.tensors import MaterialKind
from src.models.base import check_hash, read_meta
from src.sampling.design import DomainBounds, cauchy_green_of, lhs_sample, tplhd_sample

CLASSICAL = "classical"
INVARIANT = "invariant"
INVARIANT_SF = "invariant_sf"
DATASETS = (CLASSICAL, INVARIANT, INVARIANT_SF)


def setup_logging(log_level: str = "INFO"):
    """Configure colored logging for the application.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR)
    """
    handler = colorlog.StreamHandler()
    handler.setFormatter(
        colorlog.ColoredFormatter(
            Config.LOG_FORMAT,
            datefmt=Config.LOG_DATEFMT,
            log_colors={
                "DEBUG": "cyan",
                "INFO": "green",
                "WARNING": "yellow",
                "ERROR": "red",
                "CRITICAL": "red,bg_white",
            },
        )
    )

    logger = logging.getLogger()
    logger.handlers = [handler]
    logger.setLevel(log_level)


@contextmanager
def stage(name: str):
    """Log a banner with start time, end time and duration around a pipeline stage."""
    logger = logging.getLogger(f"src.scripts.{name}")
    start_time = datetime.now()
    logger.info("=" * 80)
    logger.info(f"{name} started at: {start_time.strftime('%Y-%m-%d %H:%M:%S')}")
    yield logger
    end_time = datetime.now()
    logger.info(f"{name} completed at: {end_time.strftime('%Y-%m-%d %H:%M:%S')}")
    logger.info(f"Duration: {end_time - start_time}")
    logger.info("=" * 80)


@dataclass(frozen=True)
class OutputPaths:
    """Locations of every artifact below one output directory."""

    root: Path

    @property
    def hull(self) -> Path:
        return self.root / "hull.json"

    def samples(self, kind: MaterialKind) -> Path:
        return self.root / f"samples_{MaterialKind(kind).value}.csv"

    def dataset(self, name: str) -> Path:
        return self.root / f"{name}.csv"

    def model(self, name: str) -> Path:
        return self.root / "models" / f"{name}.json"

    @property
    def errors(self) -> Path:
        return self.root / "errors.csv"

    @property
    def sweep(self) -> Path:
        return self.root / "sweep.csv"


def output_paths(cfg: ExperimentConfig) -> OutputPaths:
    return OutputPaths(cfg.output_dir)


def domain_bounds(cfg: ExperimentConfig) -> DomainBounds:
    return DomainBounds(cfg["domain.delta"])


def sampled_gradients(cfg: ExperimentConfig, n: int, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    """LHS deformation gradients with det F > 0 and their C tensors."""
    f = lhs_sample(domain_bounds(cfg), n, seed)
    f = f[np.linalg.det(f) > 0.0]
    return f, cauchy_green_of(f)


def training_gradients(cfg: ExperimentConfig) -> Tuple[np.ndarray, np.ndarray]:
    """Training design: the undeformed state followed by sample.n_train gradients with det F > 0.

    The identity row comes first so that duplicate filtering always keeps it, and any
    design point equal to it is dropped.
    """
    if cfg["sample.design"] == "tplhd":
        f = tplhd_sample(domain_bounds(cfg), cfg["sample.n_train"])
    else:
        f = lhs_sample(domain_bounds(cfg), cfg["sample.n_train"], cfg["seeds.sample"])
    keep = (np.linalg.det(f) > 0.0) & np.any(f != np.eye(3), axis=(1, 2))
    f = np.concatenate([np.eye(3)[None, :, :], f[keep]])
    return f, cauchy_green_of(f)


def require(path: Path, stage_name: str):
    """Raise ConfigError if an upstream artifact is missing."""
    if not path.exists():
        raise ConfigError(f"{path} not found, run the {stage_name} stage first")


def require_meta(path: Path, cfg: ExperimentConfig, stage_name: str) -> dict:
    """Metadata of an upstream CSV, checked against the current config hash."""
    require(path, stage_name)
    meta = read_meta(path)
    check_hash(cfg.config_hash, meta, path.name)
    return meta
