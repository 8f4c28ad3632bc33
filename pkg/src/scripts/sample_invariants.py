"""Space-filling sampling script.

Anneals N principal invariant triples inside the stored hull and, for transversely
isotropic laws, anneals the rotations of their C tensors to spread (I4, I5) as well.
N defaults to the number of distinct invariant points in the training design,
so both samplers are compared at the same data budget.

Usage:
    python -m src.scripts.sample_invariants
"""

from typing import Dict

from src.config import Config, ExperimentConfig
from src.exceptions import Unphysical
from src.mechanics.laws import law_from_config
from src.mechanics.tensors import MaterialKind
from src.models.records import save_sample_set
from src.sampling.anneal import AnnealConfig, SampleSet, anneal_aniso, anneal_iso
from src.sampling.design import dedupe_indices, invariants_of, min_pairwise_distance
from src.sampling.physicality import physicality_check_batch
from src.scripts.build_hull import load_hull
from src.scripts.common import output_paths, setup_logging, stage, training_gradients


def design_size(cfg: ExperimentConfig) -> int:
    """sample.N, or the deduplicated size of the training design when it is 0."""
    if cfg["sample.N"] > 0:
        return cfg["sample.N"]
    law = law_from_config(cfg)
    _, c = training_gradients(cfg)
    return len(dedupe_indices(invariants_of(c, law.a0)))


def run_sample(cfg: ExperimentConfig) -> Dict[MaterialKind, SampleSet]:
    """Anneal the designs and write samples_iso.csv (and samples_transiso.csv).

    Raises:
        InitializationFailure: If the hull cannot be seeded with N - 1 points
        Unphysical: If an annealed triple fails the physicality re-check
    """
    law = law_from_config(cfg)
    paths = output_paths(cfg)
    hull = load_hull(cfg)

    with stage("sample_invariants") as logger:
        n = design_size(cfg)
        logger.info(f"Annealing {n:,} invariant points ({cfg['anneal.NT']:,} sweeps)")
        iso_cfg = AnnealConfig(cfg["anneal.NT"], cfg["anneal.T0"], cfg["anneal.alpha"])
        iso = anneal_iso(hull, n, iso_cfg, cfg["seeds.anneal"])

        points = iso.invariants
        infeasible = ~(hull.contains_batch(points) & physicality_check_batch(points))
        infeasible[iso.pinned] = False
        if infeasible.any():
            raise Unphysical(f"{int(infeasible.sum())} annealed points left the feasible region")
        logger.info(f"Minimum pairwise distance: {min_pairwise_distance(iso.invariants):.4g}")
        save_sample_set(paths.samples(MaterialKind.ISO), iso, cfg.config_hash)
        results = {MaterialKind.ISO: iso}

        if law.kind is MaterialKind.TRANS_ISO:
            logger.info(f"Annealing rotations ({cfg['anneal.aniso_NT']:,} sweeps)")
            aniso_cfg = AnnealConfig(
                cfg["anneal.aniso_NT"], cfg["anneal.aniso_T0"], cfg["anneal.alpha"]
            )
            aniso = anneal_aniso(iso, law.a0, aniso_cfg, cfg["seeds.anneal"])
            logger.info(
                f"(I4, I5) minimum pairwise distance: "
                f"{min_pairwise_distance(aniso.invariants[:, 3:]):.4g}"
            )
            save_sample_set(paths.samples(MaterialKind.TRANS_ISO), aniso, cfg.config_hash)
            results[MaterialKind.TRANS_ISO] = aniso

        logger.info(f"Total points sampled: {n:,}")
    return results


def main():
    """Main entry point for the sampling script."""
    setup_logging(Config.LOG_LEVEL)
    run_sample(ExperimentConfig.load())


if __name__ == "__main__":
    main()
