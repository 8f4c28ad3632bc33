"""Sample generation in deformation-gradient and invariant space."""

from src.sampling.anneal import (
    AnnealConfig,
    SampleSet,
    anneal_aniso,
    anneal_iso,
    rotate_tensor,
    rotation_xyz,
)
from src.sampling.design import (
    DomainBounds,
    dedupe,
    dedupe_indices,
    invariant_cloud,
    lhs_sample,
    min_pairwise_distance,
    sphere_direction,
    tplhd_sample,
)
from src.sampling.hull import ConvexHull3, build_hull, point_in_hull
from src.sampling.physicality import physicality_check, physicality_check_batch, reconstruct_C
from src.sampling.quintuple import solve_C_from_quintuple

__all__ = [
    "AnnealConfig",
    "ConvexHull3",
    "DomainBounds",
    "SampleSet",
    "anneal_aniso",
    "anneal_iso",
    "build_hull",
    "dedupe",
    "dedupe_indices",
    "invariant_cloud",
    "lhs_sample",
    "min_pairwise_distance",
    "physicality_check",
    "physicality_check_batch",
    "point_in_hull",
    "reconstruct_C",
    "rotate_tensor",
    "rotation_xyz",
    "solve_C_from_quintuple",
    "tplhd_sample",
]
