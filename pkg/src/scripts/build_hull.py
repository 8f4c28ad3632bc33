"""Admissible invariant region script.

Projects an LHS cloud of deformation gradients into principal invariant space and
stores its convex hull, the feasible region of the space-filling design.

Usage:
    python -m src.scripts.build_hull
"""

from src.config import Config, ExperimentConfig
from src.models.base import check_hash, load_json, save_json
from src.sampling.hull import ConvexHull3, build_hull
from src.scripts.common import domain_bounds, output_paths, setup_logging, stage


def run_hull(cfg: ExperimentConfig) -> ConvexHull3:
    """Build the hull and write hull.json.

    Raises:
        DegenerateCloud: If the projected cloud spans no volume
    """
    with stage("build_hull") as logger:
        n_cloud = cfg["hull.n_cloud"]
        logger.info(f"Projecting {n_cloud:,} deformation gradients (delta={cfg['domain.delta']})")
        hull = build_hull(domain_bounds(cfg), n_cloud, cfg["seeds.hull"])

        data = hull.to_dict()
        data.update(
            config_hash=cfg.config_hash,
            n_cloud=n_cloud,
            seed=cfg["seeds.hull"],
            format_version=Config.FORMAT_VERSION,
        )
        path = output_paths(cfg).hull
        save_json(path, data)
        logger.info(f"Hull vertices: {len(hull.vertices):,}")
        logger.info(f"Hull faces: {hull.n_faces:,}")
        logger.info(f"Wrote {path}")
    return hull


def load_hull(cfg: ExperimentConfig) -> ConvexHull3:
    """Stored hull of this config, built first if it does not exist yet.

    Raises:
        HashMismatch: If hull.json belongs to another configuration
    """
    path = output_paths(cfg).hull
    if not path.exists():
        return run_hull(cfg)
    data = load_json(path)
    check_hash(cfg.config_hash, data, path.name)
    return ConvexHull3.from_dict(data)


def main():
    """Main entry point for the hull script."""
    setup_logging(Config.LOG_LEVEL)
    run_hull(ExperimentConfig.load())


if __name__ == "__main__":
    main()
