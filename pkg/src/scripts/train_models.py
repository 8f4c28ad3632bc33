"""Surrogate training script.

Fits one surrogate per dataset written by the data generation stage and stores it as
models/<dataset>.json.

Usage:
    python -m src.scripts.train_models
"""

import time
from typing import Dict

from src.config import Config, ExperimentConfig
from src.exceptions import ConfigError
from src.mechanics.laws import law_from_config
from src.models.base import check_hash, load_json, save_json
from src.models.records import Dataset
from src.models.surrogate import MappingKind, SurrogateModel, train_surrogate
from src.regression.gpr import GprConfig
from src.regression.lagpr import LaGprConfig
from src.scripts.common import CLASSICAL, DATASETS, output_paths, require_meta, setup_logging, stage


def run_train(cfg: ExperimentConfig) -> Dict[str, SurrogateModel]:
    """Train every available dataset.

    Raises:
        ConfigError: If no dataset has been generated
        HashMismatch: If a dataset belongs to another configuration
    """
    law = law_from_config(cfg)
    paths = output_paths(cfg)
    gpr_config = GprConfig.from_experiment(cfg)
    lagpr_config = LaGprConfig.from_experiment(cfg)
    names = [name for name in DATASETS if paths.dataset(name).exists()]
    if not names:
        raise ConfigError(f"No datasets in {paths.root}, run the gen-data stage first")

    models: Dict[str, SurrogateModel] = {}
    with stage("train_models") as logger:
        for name in names:
            require_meta(paths.dataset(name), cfg, "gen-data")
            dataset = Dataset.load(paths.dataset(name))
            kind = MappingKind.for_material(law.kind)
            if name == CLASSICAL:
                kind = MappingKind.CLASSICAL

            start = time.perf_counter()
            model = train_surrogate(
                kind,
                dataset.inputs,
                dataset.outputs,
                gpr_config,
                lagpr_config,
                a0=law.a0,
                provenance={"config_hash": cfg.config_hash, "dataset": name, "law": law.to_dict()},
            )
            save_json(paths.model(name), model.to_dict())
            logger.info(
                f"Trained {name} ({kind.value}) on {len(dataset):,} points "
                f"in {time.perf_counter() - start:.2f}s"
            )
            models[name] = model
        logger.info(f"Total models trained: {len(models)}")
    return models


def load_model(cfg: ExperimentConfig, name: str) -> SurrogateModel:
    """Stored surrogate of this config.

    Raises:
        HashMismatch: If the model was trained under another configuration
    """
    path = output_paths(cfg).model(name)
    model = SurrogateModel.from_dict(load_json(path))
    check_hash(cfg.config_hash, model.provenance, path.name)
    return model


def main():
    """Main entry point for the training script."""
    setup_logging(Config.LOG_LEVEL)
    run_train(ExperimentConfig.load())


if __name__ == "__main__":
    main()
