"""Generator coefficients from (C, S) pairs.

Isotropic pairs are solved in the common eigenbasis of C and S; transversely
isotropic pairs through the 9 x 6 system of vectorized generators. Both solves use
a column-pivoted QR with a rank cut, falling back to the minimum-norm solution when
the generators are linearly dependent at C (for example C = I).
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from scipy import linalg

from src.exceptions import KindMismatch, NotCoaxial
from src.mechanics.tensors import GeneratorBasis, MaterialKind, generator_basis, sym, to_voigt

logger = logging.getLogger(__name__)

RANK_RTOL = 1e-10
COAXIAL_RTOL = 1e-8
CLUSTER_RTOL = 1e-8


class Multiplicity(str, Enum):
    """Eigenvalue multiplicity of C."""

    DISTINCT = "distinct"
    TWO_EQUAL = "two_equal"
    ALL_EQUAL = "all_equal"


MULTIPLICITY_BY_GROUPS = {
    3: Multiplicity.DISTINCT,
    2: Multiplicity.TWO_EQUAL,
    1: Multiplicity.ALL_EQUAL,
}


@dataclass(frozen=True)
class CoeffVector:
    """Coefficients of a stress in the generator basis of its material kind."""

    kind: MaterialKind
    values: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "kind", MaterialKind(self.kind))
        object.__setattr__(self, "values", tuple(float(v) for v in np.ravel(self.values)))
        if len(self.values) != self.kind.n_generators:
            raise KindMismatch(
                f"{self.kind.value} needs {self.kind.n_generators} coefficients, "
                f"got {len(self.values)}"
            )

    def as_array(self) -> np.ndarray:
        return np.array(self.values)


@dataclass(frozen=True)
class ExtractionReport:
    """Diagnostics of one coefficient solve."""

    residual: float
    multiplicity: Optional[Multiplicity]
    rank: int
    condition: float
    n_unknowns: int

    @property
    def rank_deficient(self) -> bool:
        return self.rank < self.n_unknowns

    def to_dict(self) -> dict:
        return {
            "residual": self.residual,
            "multiplicity": self.multiplicity.value if self.multiplicity else None,
            "rank": self.rank,
            "condition": self.condition,
            "rank_deficient": self.rank_deficient,
        }


def min_norm_lstsq(a: np.ndarray, b: np.ndarray, rtol: float = RANK_RTOL):
    """Least-squares solution of minimum norm through a complete orthogonal decomposition.

    The numerical rank r is the number of diagonal entries of the pivoted R above
    ``rtol * |R_00|``; the leading r rows of R are factored once more to reach the
    minimum-norm representative.

    Returns:
        tuple: (x, rank, condition estimate |R_00| / |R_r-1,r-1|)
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n = a.shape[1]
    q, r, perm = linalg.qr(a, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    if diag.size == 0 or diag[0] == 0.0:
        return np.zeros(n), 0, float("inf")
    rank = int(np.sum(diag > rtol * diag[0]))
    rhs = (q.T @ b)[:rank]

    z, t = linalg.qr(r[:rank, :].T, mode="economic")
    w = linalg.solve_triangular(t, rhs, trans="T", lower=False)
    x = np.zeros(n)
    x[perm] = z @ w
    return x, rank, float(diag[0] / diag[rank - 1])


def _cluster(values: np.ndarray, rtol: float = CLUSTER_RTOL):
    scale = max(1.0, float(np.max(np.abs(values))))
    groups = [[0]]
    for i in range(1, len(values)):
        if abs(values[i] - values[groups[-1][0]]) <= rtol * scale:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def reconstruct_stress(coeffs: CoeffVector, basis: GeneratorBasis) -> np.ndarray:
    """Linear combination sum_i c_i H_i.

    Raises:
        KindMismatch: If coefficients and basis belong to different kinds
    """
    if MaterialKind(coeffs.kind) is not basis.kind or len(coeffs.values) != len(basis):
        raise KindMismatch(
            f"{len(coeffs.values)} {MaterialKind(coeffs.kind).value} coefficients against "
            f"{len(basis)} {basis.kind.value} generators"
        )
    s = np.zeros((3, 3))
    for value, generator in zip(coeffs.values, basis.generators):
        s += value * generator
    return sym(s)


def extract_iso(c: np.ndarray, s: np.ndarray) -> Tuple[CoeffVector, ExtractionReport]:
    """Coefficients of an isotropic stress in [I, C, C^-1].

    With C = Q diag(l) Q^T each principal stress gives one row (1, l_i, 1/l_i).
    Repeated eigenvalues collapse into one row; the reduced system is solved in the
    minimum-norm sense.

    Raises:
        NotCoaxial: If S is not diagonal in the eigenbasis of C
        SingularC: If |det C| < 1e-14
    """
    c = sym(c)
    s = sym(s)
    basis = generator_basis(MaterialKind.ISO, c)
    values, vectors = np.linalg.eigh(c)
    principal = vectors.T @ s @ vectors
    s_norm = float(np.linalg.norm(s))
    off_diagonal = float(np.max(np.abs(principal - np.diag(np.diag(principal)))))
    if off_diagonal > COAXIAL_RTOL * max(s_norm, 1e-300):
        raise NotCoaxial(f"Off-diagonal principal stress {off_diagonal:.3e} (|S| = {s_norm:.3e})")

    groups = _cluster(values)
    rows = np.array([[1.0, values[g[0]], 1.0 / values[g[0]]] for g in groups])
    rhs = np.array([np.mean(np.diag(principal)[g]) for g in groups])
    x, rank, condition = min_norm_lstsq(rows, rhs)

    multiplicity = MULTIPLICITY_BY_GROUPS[len(groups)]
    coeffs = CoeffVector(MaterialKind.ISO, x)
    residual = float(np.linalg.norm(reconstruct_stress(coeffs, basis) - s))
    report = ExtractionReport(residual, multiplicity, rank, condition, 3)
    if report.rank_deficient:
        logger.debug(f"Reduced isotropic solve: {report.to_dict()}")
    return coeffs, report


def extract_transiso(
    c: np.ndarray, s: np.ndarray, a: np.ndarray
) -> Tuple[CoeffVector, ExtractionReport]:
    """Coefficients of a transversely isotropic stress in the six-generator basis.

    All nine entries of S are matched against the nine entries of each generator.

    Raises:
        SingularC: If |det C| < 1e-14
    """
    s = sym(s)
    basis = generator_basis(MaterialKind.TRANS_ISO, c, a)
    x, rank, condition = min_norm_lstsq(basis.columns(), s.reshape(9))
    coeffs = CoeffVector(MaterialKind.TRANS_ISO, x)
    residual = float(np.linalg.norm(reconstruct_stress(coeffs, basis) - s))
    report = ExtractionReport(residual, None, rank, condition, 6)
    if report.rank_deficient:
        logger.warning(
            f"Rank-deficient generator system (rank {rank}) at C = {to_voigt(c).round(6)}"
        )
    return coeffs, report
