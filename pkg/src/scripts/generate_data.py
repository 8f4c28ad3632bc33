"""Training data generation script.

Evaluates the ground-truth law on sampled deformations and writes one table per
mapping:
- classical.csv: F, C and S for the identity and every training design sample
- invariant.csv: invariants and generator coefficients of the deduplicated design
- invariant_sf.csv: the same for the stored space-filling design

Usage:
    python -m src.scripts.generate_data
"""

import logging
from typing import Dict, Tuple

import numpy as np

from src.config import Config, ExperimentConfig
from src.mechanics.coeffs import extract_iso, extract_transiso
from src.mechanics.laws import Law, law_from_config
from src.mechanics.tensors import MaterialKind, to_voigt
from src.models.records import (
    C_COLUMNS,
    F_COLUMNS,
    S_COLUMNS,
    Dataset,
    coefficient_columns,
    invariant_columns,
    load_sample_set,
)
from src.sampling.design import dedupe_indices, invariants_of
from src.scripts.common import (
    CLASSICAL,
    INVARIANT,
    INVARIANT_SF,
    output_paths,
    require_meta,
    setup_logging,
    stage,
    training_gradients,
)

logger = logging.getLogger(__name__)

EXTRACTION_COLUMNS = ("residual", "rank")


def stresses(law: Law, c: np.ndarray) -> np.ndarray:
    """Law stresses at a stack of C tensors, shape (n, 3, 3)."""
    return np.stack([law.stress(ci) for ci in c])


def extract_coefficients(law: Law, c: np.ndarray, s: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Generator coefficients of every (C, S) pair plus (residual, rank) per row."""
    coeffs, reports = [], []
    for ci, si in zip(c, s):
        if law.kind is MaterialKind.ISO:
            vector, report = extract_iso(ci, si)
        else:
            vector, report = extract_transiso(ci, si, law.structural)
        coeffs.append(vector.as_array())
        reports.append((report.residual, report.rank))
    deficient = sum(1 for _, rank in reports if rank < law.kind.n_generators)
    if deficient:
        logger.info(f"{deficient} of {len(reports)} extractions were rank-deficient")
    return np.array(coeffs), np.array(reports, dtype=float)


def classical_dataset(law: Law, f: np.ndarray, c: np.ndarray, meta: dict) -> Dataset:
    s = stresses(law, c)
    return Dataset(
        input_columns=C_COLUMNS,
        output_columns=S_COLUMNS,
        inputs=np.array([to_voigt(ci) for ci in c]),
        outputs=np.array([to_voigt(si) for si in s]),
        extra_columns=F_COLUMNS,
        extra=f.reshape(len(f), 9),
        meta=dict(meta, mapping="classical6to6"),
    )


def invariant_dataset(law: Law, points: np.ndarray, c: np.ndarray, meta: dict) -> Dataset:
    """Coefficient table at the given invariant points and the C tensors realizing them."""
    kind = law.kind
    coeffs, reports = extract_coefficients(law, c, stresses(law, c))
    return Dataset(
        input_columns=invariant_columns(kind),
        output_columns=coefficient_columns(kind),
        inputs=points,
        outputs=coeffs,
        extra_columns=C_COLUMNS + EXTRACTION_COLUMNS,
        extra=np.hstack([np.array([to_voigt(ci) for ci in c]), reports]),
        meta=dict(meta, mapping="iso3to3" if kind is MaterialKind.ISO else "transiso5to6"),
    )


def run_gen_data(cfg: ExperimentConfig) -> Dict[str, Dataset]:
    """Write the datasets requested by ``models`` and ``sample.sampler``.

    Raises:
        ConfigError: If the space-filling design is requested but not sampled yet
        HashMismatch: If the stored design belongs to another configuration
    """
    law = law_from_config(cfg)
    paths = output_paths(cfg)
    sampler = cfg["sample.sampler"]
    base_meta = {
        "config_hash": cfg.config_hash,
        "law": law.to_dict(),
        "delta": cfg["domain.delta"],
    }
    datasets: Dict[str, Dataset] = {}

    with stage("generate_data") as stage_logger:
        if sampler in ("lhs", "both") or CLASSICAL in cfg["models"]:
            f, c = training_gradients(cfg)
            lhs_meta = dict(
                base_meta,
                sampler="lhs",
                design=cfg["sample.design"],
                seed=cfg["seeds.sample"],
                n_candidates=len(f),
            )
            stage_logger.info(f"Sampled {len(f):,} deformation gradients")

            if CLASSICAL in cfg["models"]:
                datasets[CLASSICAL] = classical_dataset(law, f, c, lhs_meta)

            if INVARIANT in cfg["models"] and sampler in ("lhs", "both"):
                points = invariants_of(c, law.a0)
                keep = dedupe_indices(points)
                stage_logger.info(f"Distinct invariant points: {len(keep):,} of {len(points):,}")
                datasets[INVARIANT] = invariant_dataset(law, points[keep], c[keep], lhs_meta)

        if INVARIANT in cfg["models"] and sampler in ("space_filling", "both"):
            path = paths.samples(law.kind)
            require_meta(path, cfg, "sample")
            samples = load_sample_set(path)
            sf_meta = dict(base_meta, sampler="space_filling", seed=cfg["seeds.anneal"])
            datasets[INVARIANT_SF] = invariant_dataset(
                law, samples.invariants, samples.c, sf_meta
            )

        for name, dataset in datasets.items():
            dataset.save(paths.dataset(name))
            stage_logger.info(f"Wrote {len(dataset):,} rows to {paths.dataset(name)}")
    return datasets


def main():
    """Main entry point for the data generation script."""
    setup_logging(Config.LOG_LEVEL)
    run_gen_data(ExperimentConfig.load())


if __name__ == "__main__":
    main()
