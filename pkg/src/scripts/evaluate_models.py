"""Model evaluation script.

Compares every trained surrogate against the law on a fresh LHS test set and writes
the root mean square stress error per model to errors.csv.

Usage:
    python -m src.scripts.evaluate_models
"""

import time

import numpy as np

from src.config import Config, ExperimentConfig
from src.exceptions import ConfigError
from src.mechanics.laws import law_from_config
from src.mechanics.tensors import to_voigt
from src.models.records import ErrorReport, ErrorRow
from src.models.surrogate import stress_error
from src.scripts.common import DATASETS, output_paths, sampled_gradients, setup_logging, stage
from src.scripts.generate_data import stresses
from src.scripts.train_models import load_model


def run_evaluate(cfg: ExperimentConfig) -> ErrorReport:
    """Evaluate the stored models and write errors.csv.

    Raises:
        ConfigError: If no model has been trained
        HashMismatch: If a model was trained under another configuration
    """
    law = law_from_config(cfg)
    paths = output_paths(cfg)
    names = [name for name in DATASETS if paths.model(name).exists()]
    if not names:
        raise ConfigError(f"No models in {paths.root}, run the train stage first")

    with stage("evaluate_models") as logger:
        _, c = sampled_gradients(cfg, cfg["sample.n_test"], cfg["seeds.test"])
        true = np.array([to_voigt(s) for s in stresses(law, c)])
        logger.info(f"Test points: {len(c):,}")

        report = ErrorReport(
            meta={
                "config_hash": cfg.config_hash,
                "n_test": len(c),
                "seed": cfg["seeds.test"],
                "law": law.to_dict(),
            }
        )
        for name in names:
            model = load_model(cfg, name)
            start = time.perf_counter()
            predicted = model.predict_stress_batch(c, workers=cfg["parallel.workers"])
            seconds = time.perf_counter() - start if cfg["evaluate.timings"] else 0.0
            e_s, e_s_normalized = stress_error(predicted, true)
            report.add(ErrorRow(name, model.n_train, e_s, e_s_normalized, seconds))
            logger.info(
                f"{name}: E_S = {e_s:.6g} (normalized {e_s_normalized:.3e}), "
                f"N = {model.n_train:,}, {seconds:.2f}s"
            )

        report.save(paths.errors)
        logger.info(f"Wrote {paths.errors}")
    return report


def main():
    """Main entry point for the evaluation script."""
    setup_logging(Config.LOG_LEVEL)
    run_evaluate(ExperimentConfig.load())


if __name__ == "__main__":
    main()
