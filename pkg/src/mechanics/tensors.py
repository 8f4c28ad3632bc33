"""Tensor algebra for finite-strain hyperelasticity.

Second-order tensors are ``(3, 3)`` numpy arrays; symmetric ones are kept exactly
symmetric and exchanged with the outside world as six entries in the order
(11, 12, 13, 22, 23, 33). Fourth-order tensors are ``(3, 3, 3, 3)`` arrays.

Derivatives with respect to C are taken over symmetric perturbations, so every
``d(.)/dC`` returned here is symmetric in its last index pair.
"""

from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from src.exceptions import KindMismatch, NonPositiveJacobian, SingularC

VOIGT_INDICES = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))
VOIGT_LABELS = ("11", "12", "13", "22", "23", "33")

SINGULAR_TOL = 1e-14
UNIT_TOL = 1e-12

EYE = np.eye(3)


class MaterialKind(str, Enum):
    """Material symmetry class of an invariant description."""

    ISO = "iso"
    TRANS_ISO = "transiso"

    @property
    def n_invariants(self) -> int:
        return 3 if self is MaterialKind.ISO else 5

    @property
    def n_generators(self) -> int:
        return 3 if self is MaterialKind.ISO else 6


def sym(m: np.ndarray) -> np.ndarray:
    """Symmetric part of a second-order tensor."""
    m = np.asarray(m, dtype=float)
    return 0.5 * (m + m.T)


def sym4(t: np.ndarray) -> np.ndarray:
    """Minor-symmetrize a fourth-order tensor in (i, j) and (k, l)."""
    t = 0.5 * (t + t.transpose(0, 1, 3, 2))
    return 0.5 * (t + t.transpose(1, 0, 2, 3))


def to_voigt(m: np.ndarray) -> np.ndarray:
    """Six unique entries of a symmetric tensor, ordered 11, 12, 13, 22, 23, 33."""
    m = np.asarray(m, dtype=float)
    return np.array([m[i, j] for i, j in VOIGT_INDICES])


def from_voigt(v: np.ndarray) -> np.ndarray:
    """Symmetric tensor from six entries ordered 11, 12, 13, 22, 23, 33."""
    v = np.asarray(v, dtype=float)
    return np.array(
        [
            [v[0], v[1], v[2]],
            [v[1], v[3], v[4]],
            [v[2], v[4], v[5]],
        ]
    )


def unit_vector(v) -> np.ndarray:
    """Normalize a direction to unit length.

    Raises:
        ValueError: If the vector is (numerically) zero
    """
    v = np.asarray(v, dtype=float).reshape(3)
    norm = np.linalg.norm(v)
    if norm < 1e-300:
        raise ValueError("Direction vector must be non-zero")
    return v / norm


def check_unit_vector(a0: np.ndarray) -> np.ndarray:
    """Validate |a0| = 1 within tolerance.

    Raises:
        ValueError: If the norm differs from one by more than 1e-12
    """
    a0 = np.asarray(a0, dtype=float).reshape(3)
    if abs(np.linalg.norm(a0) - 1.0) > UNIT_TOL:
        raise ValueError(f"Expected a unit vector, got norm {np.linalg.norm(a0)!r}")
    return a0


def structural_tensor(a0: np.ndarray) -> np.ndarray:
    """Structural tensor A = a0 (x) a0."""
    a0 = check_unit_vector(a0)
    return np.outer(a0, a0)


def rotate(m: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Observer change R^T M R of a second-order tensor."""
    return r.T @ m @ r


def right_cauchy_green(f: np.ndarray) -> np.ndarray:
    """Right Cauchy-Green tensor C = F^T F.

    Raises:
        NonPositiveJacobian: If det(F) <= 0
    """
    f = np.asarray(f, dtype=float).reshape(3, 3)
    if np.linalg.det(f) <= 0.0:
        raise NonPositiveJacobian(f"det(F) = {np.linalg.det(f)!r} <= 0")
    return sym(f.T @ f)


def determinant(c: np.ndarray) -> float:
    """Closed-form 3x3 determinant."""
    return float(
        c[0, 0] * (c[1, 1] * c[2, 2] - c[1, 2] * c[2, 1])
        - c[0, 1] * (c[1, 0] * c[2, 2] - c[1, 2] * c[2, 0])
        + c[0, 2] * (c[1, 0] * c[2, 1] - c[1, 1] * c[2, 0])
    )


def inverse(c: np.ndarray) -> np.ndarray:
    """Inverse of a 3x3 tensor through its adjugate.

    Raises:
        SingularC: If |det C| < 1e-14
    """
    det = determinant(c)
    if abs(det) < SINGULAR_TOL:
        raise SingularC(f"|det C| = {abs(det)!r} below {SINGULAR_TOL}")
    adj = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            rows = [r for r in range(3) if r != j]
            cols = [k for k in range(3) if k != i]
            minor = c[np.ix_(rows, cols)]
            adj[i, j] = (-1) ** (i + j) * (minor[0, 0] * minor[1, 1] - minor[0, 1] * minor[1, 0])
    return adj / det


@dataclass(frozen=True)
class InvariantPoint:
    """Surrogate input: principal triple, plus the pseudo pair for transverse isotropy."""

    kind: MaterialKind
    i1: float
    i2: float
    i3: float
    i4: Optional[float] = None
    i5: Optional[float] = None

    def __post_init__(self):
        pseudo = (self.i4 is not None, self.i5 is not None)
        if self.kind is MaterialKind.ISO and any(pseudo):
            raise KindMismatch("Isotropic invariants carry no pseudo invariants")
        if self.kind is MaterialKind.TRANS_ISO and not all(pseudo):
            raise KindMismatch("Transversely isotropic invariants need I4 and I5")

    def as_array(self) -> np.ndarray:
        if self.kind is MaterialKind.ISO:
            return np.array([self.i1, self.i2, self.i3])
        return np.array([self.i1, self.i2, self.i3, self.i4, self.i5])

    @classmethod
    def from_array(cls, values) -> "InvariantPoint":
        values = [float(x) for x in np.asarray(values).ravel()]
        if len(values) == 3:
            return cls(MaterialKind.ISO, *values)
        if len(values) == 5:
            return cls(MaterialKind.TRANS_ISO, *values)
        raise KindMismatch(f"Expected 3 or 5 invariants, got {len(values)}")


def principal_invariants(c: np.ndarray) -> InvariantPoint:
    """I1 = tr C, I2 = (tr(C)^2 - tr(C^2)) / 2, I3 = det C."""
    c = np.asarray(c, dtype=float)
    tr = float(np.trace(c))
    tr2 = float(np.sum(c * c.T))
    return InvariantPoint(MaterialKind.ISO, tr, 0.5 * (tr * tr - tr2), determinant(c))


def pseudo_invariants(c: np.ndarray, a0: np.ndarray) -> Tuple[float, float]:
    """I4 = a0 . C a0 and I5 = a0 . C^2 a0."""
    a0 = check_unit_vector(a0)
    ca0 = np.asarray(c, dtype=float) @ a0
    return float(a0 @ ca0), float(ca0 @ ca0)


def invariants(c: np.ndarray, a0: Optional[np.ndarray] = None) -> InvariantPoint:
    """Principal invariants, extended by the pseudo pair when a direction is given."""
    iso = principal_invariants(c)
    if a0 is None:
        return iso
    i4, i5 = pseudo_invariants(c, a0)
    return InvariantPoint(MaterialKind.TRANS_ISO, iso.i1, iso.i2, iso.i3, i4, i5)


@dataclass(frozen=True)
class GeneratorBasis:
    """Ordered symmetric stress generators.

    Isotropic: [I, C, C^-1]. Transversely isotropic: [I, C, A, C^2, AC+CA, AC^2+C^2A].
    """

    kind: MaterialKind
    generators: Tuple[np.ndarray, ...]

    def __len__(self) -> int:
        return len(self.generators)

    def columns(self) -> np.ndarray:
        """9 x D matrix whose columns are the row-major vectorized generators."""
        return np.stack([g.reshape(9) for g in self.generators], axis=1)


def _require_structure(kind: MaterialKind, a: Optional[np.ndarray]):
    if kind is MaterialKind.TRANS_ISO and a is None:
        raise KindMismatch("Transversely isotropic generators need the structural tensor A")
    if kind is MaterialKind.ISO and a is not None:
        raise KindMismatch("Isotropic generators take no structural tensor")


def generator_basis(
    kind: MaterialKind, c: np.ndarray, a: Optional[np.ndarray] = None
) -> GeneratorBasis:
    """Stress generators evaluated at C.

    Raises:
        SingularC: If |det C| < 1e-14
        KindMismatch: If A is given for Iso or missing for TransIso
    """
    kind = MaterialKind(kind)
    _require_structure(kind, a)
    c = sym(c)
    if abs(determinant(c)) < SINGULAR_TOL:
        raise SingularC(f"|det C| = {abs(determinant(c))!r} below {SINGULAR_TOL}")
    if kind is MaterialKind.ISO:
        return GeneratorBasis(kind, (EYE.copy(), c, sym(inverse(c))))
    a = sym(a)
    c2 = c @ c
    return GeneratorBasis(
        kind,
        (EYE.copy(), c, a, sym(c2), sym(a @ c + c @ a), sym(a @ c2 + c2 @ a)),
    )


def _direction_from_structure(a: np.ndarray) -> np.ndarray:
    values, vectors = np.linalg.eigh(sym(a))
    return vectors[:, np.argmax(values)]


def invariant_gradients(
    kind: MaterialKind,
    c: np.ndarray,
    a: Optional[np.ndarray] = None,
    a0: Optional[np.ndarray] = None,
) -> List[np.ndarray]:
    """Closed-form dI_k/dC for k = 1..3 (Iso) or 1..5 (TransIso).

    Raises:
        SingularC: If |det C| < 1e-14
    """
    kind = MaterialKind(kind)
    _require_structure(kind, a)
    c = sym(c)
    inv = principal_invariants(c)
    grads = [EYE.copy(), inv.i1 * EYE - c, inv.i3 * sym(inverse(c))]
    if kind is MaterialKind.TRANS_ISO:
        if a0 is None:
            a0 = _direction_from_structure(a)
        ca0 = c @ a0
        grads.append(sym(a))
        grads.append(np.outer(a0, ca0) + np.outer(ca0, a0))
    return grads


def generator_gradients(
    kind: MaterialKind, c: np.ndarray, a: Optional[np.ndarray] = None
) -> List[np.ndarray]:
    """Closed-form dH/dC of every generator, in basis order.

    Raises:
        SingularC: If |det C| < 1e-14
    """
    kind = MaterialKind(kind)
    _require_structure(kind, a)
    c = sym(c)
    zero = np.zeros((3, 3, 3, 3))
    d_identity = np.einsum("ik,jl->ijkl", EYE, EYE)
    if kind is MaterialKind.ISO:
        ci = sym(inverse(c))
        d_inverse = -0.5 * (np.einsum("ik,lj->ijkl", ci, ci) + np.einsum("il,kj->ijkl", ci, ci))
        return [zero, sym4(d_identity), sym4(d_inverse)]

    a = sym(a)
    d_c2 = np.einsum("ik,lj->ijkl", EYE, c) + np.einsum("ik,jl->ijkl", c, EYE)
    d_ac = np.einsum("ik,jl->ijkl", a, EYE) + np.einsum("ik,lj->ijkl", EYE, a)
    d_ac2 = (
        np.einsum("ik,lj->ijkl", a, c)
        + np.einsum("ik,jl->ijkl", a @ c, EYE)
        + np.einsum("ik,lj->ijkl", EYE, c @ a)
        + np.einsum("ik,lj->ijkl", c, a)
    )
    return [zero, sym4(d_identity), zero.copy(), sym4(d_c2), sym4(d_ac), sym4(d_ac2)]


def symmetric_perturbation(k: int, l: int, h: float) -> np.ndarray:
    """Symmetric increment with h/2 on (k, l) and (l, k), h on the diagonal."""
    delta = np.zeros((3, 3))
    delta[k, l] += 0.5 * h
    delta[l, k] += 0.5 * h
    return delta


def fd_step(c: np.ndarray) -> float:
    """Finite-difference step 1e-6 * max(1, |C|_F)."""
    return 1e-6 * max(1.0, float(np.linalg.norm(c)))


def fd_gradient(func, c: np.ndarray, h: Optional[float] = None) -> np.ndarray:
    """Central-difference derivative of a scalar or tensor map of symmetric C.

    Returns an array of shape ``func(c).shape + (3, 3)``.
    """
    c = sym(c)
    h = fd_step(c) if h is None else h
    sample = np.asarray(func(c), dtype=float)
    out = np.zeros(sample.shape + (3, 3))
    for k in range(3):
        for l in range(k, 3):
            delta = symmetric_perturbation(k, l, h)
            diff = (np.asarray(func(c + delta)) - np.asarray(func(c - delta))) / (2.0 * h)
            out[..., k, l] = diff
            out[..., l, k] = diff
    return out
