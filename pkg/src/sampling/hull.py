"""Convex hull of the admissible principal invariant region."""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from src.exceptions import DegenerateCloud
from src.sampling.design import DomainBounds, invariant_cloud

logger = logging.getLogger(__name__)

HULL_TOL = 1e-9


@dataclass(frozen=True)
class ConvexHull3:
    """Triangulated hull in (I1, I2, I3) space.

    ``normals`` are outward unit normals and a point x is inside face k when
    normals[k] . x + offsets[k] <= tol.
    """

    vertices: np.ndarray
    faces: np.ndarray
    normals: np.ndarray
    offsets: np.ndarray

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def contains(self, p, tol: float = HULL_TOL) -> bool:
        x = np.asarray(p.as_array() if hasattr(p, "as_array") else p, dtype=float)[:3]
        return bool(np.all(self.normals @ x + self.offsets <= tol))

    def contains_batch(self, points: np.ndarray, tol: float = HULL_TOL) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))[:, :3]
        return np.all(points @ self.normals.T + self.offsets <= tol, axis=1)

    def bounding_box(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def to_dict(self) -> dict:
        return {
            "vertices": self.vertices.tolist(),
            "faces": self.faces.tolist(),
            "normals": self.normals.tolist(),
            "offsets": self.offsets.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ConvexHull3":
        return cls(
            vertices=np.array(data["vertices"], dtype=float),
            faces=np.array(data["faces"], dtype=int),
            normals=np.array(data["normals"], dtype=float),
            offsets=np.array(data["offsets"], dtype=float),
        )


def hull_from_points(points: np.ndarray) -> ConvexHull3:
    """Hull of a 3-D point cloud.

    Raises:
        DegenerateCloud: If fewer than four points are given or they are coplanar
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))[:, :3]
    if len(points) < 4:
        raise DegenerateCloud(f"Need at least 4 points for a 3-D hull, got {len(points)}")
    try:
        hull = ConvexHull(points)
    except QhullError as e:
        raise DegenerateCloud(f"Qhull failed: {str(e).splitlines()[0]}")
    if hull.volume <= 0.0:
        raise DegenerateCloud("Point cloud spans no volume")

    index = {v: k for k, v in enumerate(hull.vertices)}
    faces = np.array([[index[v] for v in simplex] for simplex in hull.simplices], dtype=int)
    return ConvexHull3(
        vertices=points[hull.vertices].copy(),
        faces=faces,
        normals=hull.equations[:, :3].copy(),
        offsets=hull.equations[:, 3].copy(),
    )


def build_hull(bounds: DomainBounds, n_cloud: int, seed: int) -> ConvexHull3:
    """Hull of the invariant images of ``n_cloud`` LHS deformation gradients.

    Raises:
        DegenerateCloud: If the images are coplanar
    """
    cloud = invariant_cloud(bounds, n_cloud, seed)
    hull = hull_from_points(cloud)
    logger.debug(
        f"Hull of {len(cloud):,} invariant points: {len(hull.vertices)} vertices, "
        f"{hull.n_faces} faces"
    )
    return hull


def point_in_hull(hull: ConvexHull3, p, tol: float = HULL_TOL) -> bool:
    """Boundary-inclusive containment test against every face half-space."""
    return hull.contains(p, tol)
