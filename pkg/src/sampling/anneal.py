"""Space-filling designs in invariant space by simulated annealing.

anneal_iso spreads principal triples inside the admissible hull; anneal_aniso then
spreads the pseudo invariants (I4, I5) of those triples by rotating each
reconstructed C, which leaves its principal invariants untouched.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from src.exceptions import ConfigError, InitializationFailure
from src.mechanics.tensors import InvariantPoint, MaterialKind, check_unit_vector
from src.sampling.design import invariants_of, min_pairwise_distance, sphere_direction
from src.sampling.hull import ConvexHull3
from src.sampling.physicality import physicality_check, physicality_check_batch, reconstruct_C

logger = logging.getLogger(__name__)

REFERENCE_ISO = np.array([3.0, 3.0, 1.0])
MAX_INIT_ATTEMPTS = 1_000_000
INIT_BATCH = 4096
ALGORITHM_VERSION = "anneal-1"


@dataclass(frozen=True)
class AnnealConfig:
    """Sweep count, initial step size and per-sweep decay of the step size."""

    n_sweeps: int = 2000
    t0: float = 1.0
    alpha: float = 0.9995

    def __post_init__(self):
        if self.n_sweeps < 0:
            raise ConfigError(f"n_sweeps must be >= 0, got {self.n_sweeps}")
        if not self.t0 > 0:
            raise ConfigError(f"t0 must be > 0, got {self.t0}")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")

    def to_dict(self) -> dict:
        return {"n_sweeps": self.n_sweeps, "t0": self.t0, "alpha": self.alpha}


@dataclass
class SampleSet:
    """Annealed design with the C tensors that realize each point."""

    kind: MaterialKind
    invariants: np.ndarray
    c: np.ndarray
    pinned: int
    seed: int
    config: AnnealConfig
    angles: Optional[np.ndarray] = None
    a0: Optional[np.ndarray] = None
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.invariants)

    def points(self) -> List[InvariantPoint]:
        return [InvariantPoint.from_array(row) for row in self.invariants]

    def to_meta(self) -> dict:
        """Provenance of the design."""
        data = {
            "kind": MaterialKind(self.kind).value,
            "n": len(self),
            "pinned": self.pinned,
            "seed": self.seed,
            "anneal": self.config.to_dict(),
            "algorithm": ALGORITHM_VERSION,
        }
        if self.a0 is not None:
            data["a0"] = [float(x) for x in self.a0]
        data.update(self.meta)
        return data


def _nearest_distance(points: np.ndarray, x: np.ndarray, skip: int) -> float:
    d = np.linalg.norm(points - x, axis=1)
    d[skip] = np.inf
    return float(np.min(d))


def _initial_points(hull: ConvexHull3, n: int, rng: np.random.Generator) -> np.ndarray:
    lower, upper = hull.bounding_box()
    accepted = []
    count = 0
    attempts = 0
    while count < n and attempts < MAX_INIT_ATTEMPTS:
        size = min(INIT_BATCH, MAX_INIT_ATTEMPTS - attempts)
        candidates = rng.uniform(lower, upper, size=(size, 3))
        attempts += size
        ok = hull.contains_batch(candidates) & physicality_check_batch(candidates)
        accepted.append(candidates[ok])
        count += int(np.sum(ok))
    if count < n:
        raise InitializationFailure(
            f"Placed {count} of {n} initial points in {attempts:,} attempts"
        )
    logger.debug(f"Initialized {n} points with {attempts:,} candidates")
    return np.vstack(accepted)[:n]


def anneal_iso(hull: ConvexHull3, n: int, cfg: AnnealConfig, seed: int) -> SampleSet:
    """Spread n principal triples inside the hull, one of them pinned at (3, 3, 1).

    A point moves by s * n with n a uniform direction and s ~ U[0, T]; the move is
    kept only if the new position is inside the hull, physical, and farther from its
    nearest neighbour than before. T decays by ``alpha`` after every sweep.

    Raises:
        InitializationFailure: If rejection sampling cannot place n - 1 points
    """
    if n < 2:
        raise ConfigError(f"Need at least 2 points, got {n}")
    rng = np.random.default_rng(seed)
    points = np.vstack([_initial_points(hull, n - 1, rng), REFERENCE_ISO])
    pinned = n - 1
    logger.debug(f"Initial minimum distance {min_pairwise_distance(points):.4g}")

    step = cfg.t0
    report_every = max(1, cfg.n_sweeps // 10)
    for sweep in range(cfg.n_sweeps):
        accepted = 0
        for u in range(n):
            if u == pinned:
                continue
            d = _nearest_distance(points, points[u], u)
            trial = points[u] + rng.uniform(0.0, step) * sphere_direction(rng)
            if not hull.contains(trial) or not physicality_check(trial):
                continue
            if _nearest_distance(points, trial, u) > d:
                points[u] = trial
                accepted += 1
        step *= cfg.alpha
        if (sweep + 1) % report_every == 0:
            logger.debug(
                f"Sweep {sweep + 1}/{cfg.n_sweeps}: step {step:.3e}, accepted {accepted}, "
                f"min distance {min_pairwise_distance(points):.4g}"
            )

    c = np.stack([reconstruct_C(row) for row in points])
    c[pinned] = np.eye(3)
    return SampleSet(MaterialKind.ISO, points, c, pinned, seed, cfg)


def rotation_xyz(angles) -> np.ndarray:
    """Composite rotation Rz Ry Rx from angles acting on the x-y, x-z and y-z planes."""
    ax, ay, az = (float(a) for a in angles)
    cx, sx = np.cos(ax), np.sin(ax)
    cy, sy = np.cos(ay), np.sin(ay)
    cz, sz = np.cos(az), np.sin(az)
    rx = np.array([[cx, -sx, 0.0], [sx, cx, 0.0], [0.0, 0.0, 1.0]])
    ry = np.array([[cy, 0.0, sy], [0.0, 1.0, 0.0], [-sy, 0.0, cy]])
    rz = np.array([[1.0, 0.0, 0.0], [0.0, cz, -sz], [0.0, sz, cz]])
    return rz @ ry @ rx


def rotate_tensor(c: np.ndarray, angles) -> np.ndarray:
    """Rx^T Ry^T Rz^T C Rz Ry Rx, symmetrized."""
    r = rotation_xyz(angles)
    rotated = r.T @ np.asarray(c, dtype=float) @ r
    return 0.5 * (rotated + rotated.T)


def _pseudo(c: np.ndarray, a0: np.ndarray) -> np.ndarray:
    ca0 = c @ a0
    return np.array([a0 @ ca0, ca0 @ ca0])


def anneal_aniso(iso_set: SampleSet, a0, cfg: AnnealConfig, seed: int) -> SampleSet:
    """Spread the pseudo invariants of an isotropic design by annealing rotation angles.

    Each point keeps its principal triple; its C is the reconstructed principal C
    rotated by the point's three angles, and (I4, I5) are always computed from that
    stored C. The pinned identity is unaffected by any rotation.
    """
    if MaterialKind(iso_set.kind) is not MaterialKind.ISO:
        raise ConfigError("anneal_aniso expects an isotropic sample set")
    a0 = check_unit_vector(a0)
    rng = np.random.default_rng(seed)
    n = len(iso_set)
    base = np.stack([reconstruct_C(row) for row in iso_set.invariants])
    base[iso_set.pinned] = np.eye(3)

    angles = rng.uniform(0.0, 2.0 * np.pi, size=(n, 3))
    c = np.stack([rotate_tensor(base[j], angles[j]) for j in range(n)])
    pseudo = np.stack([_pseudo(c[j], a0) for j in range(n)])
    logger.debug(f"Initial (I4, I5) minimum distance {min_pairwise_distance(pseudo):.4g}")

    step = cfg.t0
    report_every = max(1, cfg.n_sweeps // 10)
    for sweep in range(cfg.n_sweeps):
        accepted = 0
        for j in range(n):
            d = _nearest_distance(pseudo, pseudo[j], j)
            trial = angles[j] + rng.uniform(0.0, step) * sphere_direction(rng)
            c_test = rotate_tensor(base[j], trial)
            p_test = _pseudo(c_test, a0)
            if _nearest_distance(pseudo, p_test, j) > d:
                angles[j] = trial
                c[j] = c_test
                pseudo[j] = p_test
                accepted += 1
        step *= cfg.alpha
        if (sweep + 1) % report_every == 0:
            logger.debug(
                f"Sweep {sweep + 1}/{cfg.n_sweeps}: step {step:.3e}, accepted {accepted}, "
                f"(I4, I5) min distance {min_pairwise_distance(pseudo):.4g}"
            )

    c[iso_set.pinned] = np.eye(3)
    quintuples = np.column_stack([iso_set.invariants, invariants_of(c, a0)[:, 3:]])
    quintuples[iso_set.pinned] = (3.0, 3.0, 1.0, 1.0, 1.0)
    return SampleSet(
        MaterialKind.TRANS_ISO,
        quintuples,
        c,
        iso_set.pinned,
        seed,
        cfg,
        angles=angles,
        a0=a0,
        meta={"iso_seed": iso_set.seed, "iso_anneal": iso_set.config.to_dict()},
    )
