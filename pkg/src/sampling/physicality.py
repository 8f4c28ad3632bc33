"""Realizability of principal invariant triples.

A triple (I1, I2, I3) belongs to a symmetric positive semi-definite C exactly when
the cubic l^3 - I1 l^2 + I2 l - I3 has three real non-negative roots. With

    H = (I1^2 - 3 I2) / 9,    G = I1 I2 / 3 - I3 - 2 I1^3 / 27

the roots are real iff G^2 + 4 H^3 <= 0, and then follow in trigonometric form.
"""

import math
from typing import Tuple

import numpy as np

from src.exceptions import Unphysical
from src.mechanics.tensors import InvariantPoint

DEGENERATE_TOL = 1e-12
ARCCOS_TOL = 1e-10


def _triple(p) -> Tuple[float, float, float]:
    if isinstance(p, InvariantPoint):
        return p.i1, p.i2, p.i3
    i1, i2, i3 = (float(x) for x in np.asarray(p, dtype=float).ravel()[:3])
    return i1, i2, i3


def cubic_coefficients(p) -> Tuple[float, float]:
    """(H, G) of the depressed principal-stretch cubic."""
    i1, i2, i3 = _triple(p)
    h = (i1 * i1 - 3.0 * i2) / 9.0
    g = i1 * i2 / 3.0 - i3 - 2.0 * i1**3 / 27.0
    return h, g


def principal_stretches_squared(p) -> Tuple[float, float, float]:
    """Ascending real roots of the cubic, or raise if they are complex.

    Raises:
        Unphysical: If the cubic has complex roots
    """
    i1, _, _ = _triple(p)
    h, g = cubic_coefficients(p)
    if abs(h) < DEGENERATE_TOL:
        if abs(g) < DEGENERATE_TOL:
            return (i1 / 3.0,) * 3
        raise Unphysical(f"Degenerate cubic with G = {g!r}")
    if h < 0.0:
        raise Unphysical(f"H = {h!r} < 0")
    arg = -g / (2.0 * h**1.5)
    if abs(arg) > 1.0 + ARCCOS_TOL:
        raise Unphysical(f"G^2 + 4H^3 > 0 (arccos argument {arg!r})")
    beta = math.acos(max(-1.0, min(1.0, arg)))
    radius = 2.0 * math.sqrt(h)
    return (
        i1 / 3.0 - radius * math.cos((math.pi - beta) / 3.0),
        i1 / 3.0 - radius * math.cos((math.pi + beta) / 3.0),
        i1 / 3.0 + radius * math.cos(beta / 3.0),
    )


def physicality_check(p) -> bool:
    """True iff the triple has three real non-negative principal stretches squared."""
    try:
        roots = principal_stretches_squared(p)
    except Unphysical:
        return False
    return min(roots) >= 0.0


def physicality_check_batch(points: np.ndarray) -> np.ndarray:
    """Vectorized physicality_check over the first three columns of ``points``."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    i1, i2, i3 = points[:, 0], points[:, 1], points[:, 2]
    h = (i1 * i1 - 3.0 * i2) / 9.0
    g = i1 * i2 / 3.0 - i3 - 2.0 * i1**3 / 27.0

    degenerate = np.abs(h) < DEGENERATE_TOL
    regular = ~degenerate & (h > 0.0)
    result = degenerate & (np.abs(g) < DEGENERATE_TOL) & (i1 >= 0.0)

    with np.errstate(divide="ignore", invalid="ignore"):
        arg = np.where(regular, -g / (2.0 * np.where(regular, h, 1.0) ** 1.5), 0.0)
    real = regular & (np.abs(arg) <= 1.0 + ARCCOS_TOL)
    beta = np.arccos(np.clip(arg, -1.0, 1.0))
    smallest = i1 / 3.0 - 2.0 * np.sqrt(np.where(regular, h, 0.0)) * np.cos((np.pi - beta) / 3.0)
    return result | (real & (smallest >= 0.0))


def reconstruct_C(p) -> np.ndarray:
    """Diagonal C whose principal invariants are the given triple.

    Raises:
        Unphysical: If the triple fails the physicality check
    """
    roots = principal_stretches_squared(p)
    if min(roots) < 0.0:
        raise Unphysical(f"Negative principal stretch squared {min(roots)!r}")
    return np.diag(roots)
