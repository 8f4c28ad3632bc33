"""Recover a right Cauchy-Green tensor from an invariant quintuple."""

import logging
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import least_squares

from src.exceptions import KindMismatch, NoConvergence
from src.mechanics.tensors import InvariantPoint, MaterialKind, from_voigt, to_voigt
from src.sampling.anneal import rotate_tensor
from src.sampling.design import DomainBounds
from src.sampling.physicality import reconstruct_C

logger = logging.getLogger(__name__)

QUINTUPLE_TOL = 1e-8


def _residual(v: np.ndarray, target: np.ndarray, a: np.ndarray) -> np.ndarray:
    c = from_voigt(v)
    c2 = c @ c
    i1 = np.trace(c)
    return np.array(
        [
            i1 - target[0],
            0.5 * (i1 * i1 - np.trace(c2)) - target[1],
            np.linalg.det(c) - target[2],
            np.sum(a * c) - target[3],
            np.sum(a * c2) - target[4],
        ]
    )


def solve_C_from_quintuple(
    p: InvariantPoint,
    a: np.ndarray,
    bounds: Optional[Tuple[np.ndarray, np.ndarray]] = None,
    seed: int = 0,
    n_starts: int = 20,
    max_iter: int = 200,
    tol: float = QUINTUPLE_TOL,
) -> np.ndarray:
    """Symmetric positive-definite C matching all five invariants within entry bounds.

    Bounded trust-region least squares on the six independent entries, restarted
    from randomly rotated copies of the principal C of the triple.

    Args:
        p: Target quintuple
        a: Structural tensor a0 (x) a0
        bounds: (lower, upper) entry bounds ordered 11, 12, 13, 22, 23, 33;
            defaults to the bounds implied by the default deformation gradient box
        seed: Seed of the start rotations
        n_starts: Multistart budget
        max_iter: Function evaluations per start

    Raises:
        KindMismatch: If p is not a quintuple
        NoConvergence: If no start reaches the tolerance
    """
    if p.kind is not MaterialKind.TRANS_ISO:
        raise KindMismatch("solve_C_from_quintuple needs a transversely isotropic point")
    target = p.as_array()
    a = np.asarray(a, dtype=float)
    lower, upper = bounds if bounds is not None else DomainBounds().c_bounds()
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    margin = 1e-12 * np.maximum(1.0, upper - lower)

    try:
        principal = reconstruct_C(p)
    except ArithmeticError:
        principal = np.eye(3)
    rng = np.random.default_rng(seed)

    best = np.inf
    for start in range(n_starts):
        angles = np.zeros(3) if start == 0 else rng.uniform(0.0, 2.0 * np.pi, 3)
        x0 = np.clip(to_voigt(rotate_tensor(principal, angles)), lower + margin, upper - margin)
        result = least_squares(
            _residual,
            x0,
            args=(target, a),
            bounds=(lower, upper),
            method="trf",
            max_nfev=max_iter,
            xtol=1e-15,
            ftol=1e-15,
            gtol=1e-15,
        )
        c = from_voigt(result.x)
        error = float(np.max(np.abs(_residual(result.x, target, a))))
        best = min(best, error)
        if error <= tol and np.all(np.linalg.eigvalsh(c) > 0.0):
            logger.debug(f"Quintuple solved at start {start + 1} with residual {error:.2e}")
            return c
    raise NoConvergence(
        f"No C found for quintuple {np.round(target, 6).tolist()} after {n_starts} starts "
        f"(best residual {best:.2e})"
    )
