"""Extrapolation sweep script.

Drives every trained surrogate and the law along a single-component load path that
runs well past the training box:
- Mooney-Rivlin: F = I + F11 e1 (x) E1, F11 in [-0.8, 0.8]
- Bonet: F = I + F12 e1 (x) E2, F12 in [-1, 1]

Usage:
    python -m src.scripts.run_sweep
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.config import Config, ExperimentConfig
from src.exceptions import ConfigError
from src.mechanics.laws import law_from_config
from src.mechanics.tensors import VOIGT_LABELS, right_cauchy_green, to_voigt
from src.models.base import write_csv
from src.scripts.common import DATASETS, output_paths, setup_logging, stage
from src.scripts.train_models import load_model


@dataclass(frozen=True)
class LoadPath:
    """One entry of F varied over a range, all others held at the identity."""

    label: str
    index: Tuple[int, int]
    lower: float
    upper: float

    def values(self, steps: int) -> np.ndarray:
        return np.linspace(self.lower, self.upper, steps)

    def gradient(self, value: float) -> np.ndarray:
        f = np.eye(3)
        f[self.index] += value
        return f


LOAD_PATHS = {
    "mooney_rivlin": LoadPath("F11", (0, 0), -0.8, 0.8),
    "bonet": LoadPath("F12", (0, 1), -1.0, 1.0),
}


def sweep_columns(path: LoadPath, names) -> Tuple[str, ...]:
    columns = [path.label] + [f"S_true_{label}" for label in VOIGT_LABELS]
    for name in names:
        columns += [f"S_{name}_{label}" for label in VOIGT_LABELS]
    return tuple(columns + [f"error_{name}" for name in names])


def run_sweep(cfg: ExperimentConfig) -> np.ndarray:
    """Write sweep.csv: load parameter, true stress, stress per model, error norm per model.

    Raises:
        ConfigError: If no model has been trained
    """
    law = law_from_config(cfg)
    paths = output_paths(cfg)
    path = LOAD_PATHS[law.name]
    names = [name for name in DATASETS if paths.model(name).exists()]
    if not names:
        raise ConfigError(f"No models in {paths.root}, run the train stage first")

    with stage("run_sweep") as logger:
        values = path.values(cfg["sweep.steps"])
        c = np.stack([right_cauchy_green(path.gradient(v)) for v in values])
        true = np.array([to_voigt(law.stress(ci)) for ci in c])

        predicted = [
            load_model(cfg, name).predict_stress_batch(c, workers=cfg["parallel.workers"])
            for name in names
        ]
        errors = [np.linalg.norm(p - true, axis=1) for p in predicted]
        rows = np.column_stack([values, true, *predicted, *errors])

        delta = cfg["domain.delta"]
        inside = np.abs(values) <= delta
        for name, err in zip(names, errors):
            logger.info(
                f"{name}: max error {np.max(err[inside], initial=0.0):.4g} inside +/-{delta}, "
                f"{np.max(err[~inside], initial=0.0):.4g} outside"
            )

        meta = {
            "config_hash": cfg.config_hash,
            "law": law.to_dict(),
            "parameter": path.label,
            "range": [path.lower, path.upper],
            "steps": cfg["sweep.steps"],
            "training_boundary": [-delta, delta],
            "models": names,
        }
        write_csv(paths.sweep, sweep_columns(path, names), rows, meta)
        logger.info(f"Wrote {len(rows):,} sweep steps to {paths.sweep}")
    return rows


def main():
    """Main entry point for the sweep script."""
    setup_logging(Config.LOG_LEVEL)
    run_sweep(ExperimentConfig.load())


if __name__ == "__main__":
    main()
