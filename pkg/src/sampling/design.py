"""Deformation-gradient designs and their images in invariant space."""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial.distance import pdist
from scipy.stats import qmc

from src.exceptions import ConfigError
from src.mechanics.tensors import InvariantPoint, check_unit_vector

logger = logging.getLogger(__name__)

DUPLICATE_TOL = 0.01


@dataclass(frozen=True)
class DomainBounds:
    """Box of admissible deformation gradients.

    Diagonal entries lie in [1 - delta, 1 + delta], off-diagonal ones in [-delta, delta].
    """

    delta: float = 0.175

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ConfigError(f"delta must lie in (0, 1), got {self.delta}")

    @property
    def lower(self) -> np.ndarray:
        return np.eye(3) - self.delta

    @property
    def upper(self) -> np.ndarray:
        return np.eye(3) + self.delta

    def contains(self, f: np.ndarray, tol: float = 0.0) -> bool:
        f = np.asarray(f, dtype=float).reshape(3, 3)
        return bool(np.all(f >= self.lower - tol) and np.all(f <= self.upper + tol))

    def c_bounds(self) -> Tuple[np.ndarray, np.ndarray]:
        """Entry-wise bounds of C = F^T F over the box, ordered 11, 12, 13, 22, 23, 33."""
        d = self.delta
        diag = ((1.0 - d) ** 2, (1.0 + d) ** 2 + 2.0 * d * d)
        off = 2.0 * (1.0 + d) * d + d * d
        lower = np.array([diag[0], -off, -off, diag[0], -off, diag[0]])
        upper = np.array([diag[1], off, off, diag[1], off, diag[1]])
        return lower, upper

    def to_dict(self) -> dict:
        return {"delta": self.delta}


def lhs_sample(bounds: DomainBounds, n: int, seed: int) -> np.ndarray:
    """Latin hypercube design of n deformation gradients, shape (n, 3, 3).

    Every one of the nine entries is stratified into n equal bins holding exactly
    one sample each.
    """
    if n < 1:
        raise ConfigError(f"Sample count must be >= 1, got {n}")
    sampler = qmc.LatinHypercube(d=9, seed=np.random.default_rng(seed))
    unit = sampler.random(n)
    scaled = qmc.scale(unit, bounds.lower.ravel(), bounds.upper.ravel())
    return scaled.reshape(n, 3, 3)


def _translational_levels(n: int, d: int) -> np.ndarray:
    """Integer Latin hypercube of n points in d dimensions built by translating one seed point.

    The seed is copied along each axis in turn with a fixed shift, giving a lattice of
    k**d points for k = ceil(n**(1/d)). The n points nearest its centre are kept
    and every column is re-ranked to the levels 1..n.
    """
    k = int(np.ceil(n ** (1.0 / d) - 1e-9))
    n_star = k**d
    levels = np.ones((1, d))
    for axis in range(d):
        shift = np.empty(d)
        shift[:axis] = float(k) ** (axis - 1)
        shift[axis] = n_star / k
        shift[axis + 1 :] = float(k) ** axis
        levels = np.vstack([levels + m * shift for m in range(k)])
    centre = np.full(d, n_star / 2.0)
    nearest = np.argsort(np.linalg.norm(levels - centre, axis=1), kind="stable")[:n]
    levels = levels[nearest]
    for axis in range(d):
        order = np.argsort(levels[:, axis], kind="stable")
        levels[order, axis] = np.arange(1, n + 1)
    return levels


def tplhd_sample(bounds: DomainBounds, n: int) -> np.ndarray:
    """Translational propagation Latin hypercube of n deformation gradients, shape (n, 3, 3).

    Deterministic: the design depends on n and the bounds only. Each entry takes the
    centre of every one of its n bins exactly once.
    """
    if n < 1:
        raise ConfigError(f"Sample count must be >= 1, got {n}")
    if n == 1:
        return np.eye(3)[None, :, :]
    unit = (_translational_levels(n, 9) - 0.5) / n
    scaled = qmc.scale(unit, bounds.lower.ravel(), bounds.upper.ravel())
    return scaled.reshape(n, 3, 3)


def invariants_of(c: np.ndarray, a0: Optional[np.ndarray] = None) -> np.ndarray:
    """Invariants of a stack of C tensors, shape (n, 3) or (n, 5) when a0 is given."""
    c = np.asarray(c, dtype=float)
    i1 = np.trace(c, axis1=1, axis2=2)
    i2 = 0.5 * (i1 * i1 - np.einsum("nij,nji->n", c, c))
    i3 = np.linalg.det(c)
    columns = [i1, i2, i3]
    if a0 is not None:
        a0 = check_unit_vector(a0)
        ca0 = np.einsum("nij,j->ni", c, a0)
        columns += [ca0 @ a0, np.einsum("ni,ni->n", ca0, ca0)]
    return np.column_stack(columns)


def cauchy_green_of(f: np.ndarray) -> np.ndarray:
    """C = F^T F for a stack of deformation gradients."""
    c = np.einsum("nki,nkj->nij", f, f)
    return 0.5 * (c + c.transpose(0, 2, 1))


def invariant_cloud(
    bounds: DomainBounds, n: int, seed: int, a0: Optional[np.ndarray] = None
) -> np.ndarray:
    """Invariant images of an LHS design, dropping samples with det F <= 0."""
    f = lhs_sample(bounds, n, seed)
    keep = np.linalg.det(f) > 0.0
    if not np.all(keep):
        logger.debug(f"Dropped {int(np.sum(~keep))} samples with det F <= 0")
    return invariants_of(cauchy_green_of(f[keep]), a0)


def sphere_direction(rng: np.random.Generator) -> np.ndarray:
    """Uniform direction on the unit sphere from three standard normal draws."""
    while True:
        v = rng.standard_normal(3)
        norm = np.linalg.norm(v)
        if norm >= 1e-12:
            return v / norm


def _as_rows(points) -> np.ndarray:
    if len(points) == 0:
        return np.empty((0, 0))
    if isinstance(points[0], InvariantPoint):
        return np.array([p.as_array() for p in points])
    return np.atleast_2d(np.asarray(points, dtype=float))


def dedupe_indices(points, tol: float = DUPLICATE_TOL) -> List[int]:
    """Indices kept by greedy first-come filtering of near duplicates.

    Two points are duplicates when every component differs by less than ``tol``.
    """
    rows = _as_rows(points)
    kept: List[int] = []
    for i, row in enumerate(rows):
        if kept and np.any(np.all(np.abs(rows[kept] - row) < tol, axis=1)):
            continue
        kept.append(i)
    return kept


def dedupe(points: Sequence[InvariantPoint], tol: float = DUPLICATE_TOL) -> List[InvariantPoint]:
    """Greedy duplicate filter preserving input order."""
    return [points[i] for i in dedupe_indices(points, tol)]


def min_pairwise_distance(points) -> float:
    """Smallest Euclidean distance between any two rows."""
    rows = _as_rows(points)
    if len(rows) < 2:
        return float("inf")
    return float(np.min(pdist(rows)))
