"""Analytic hyperelastic laws used as ground truth.

Two laws are provided:
- Mooney-Rivlin (compressible, isotropic)
- Bonet-Burton (transversely isotropic about a fiber direction a0)

Each law returns the second Piola-Kirchhoff stress S = 2 dPsi/dC for a right
Cauchy-Green tensor C, together with its energy and the exact coefficients of the
stress in the generator basis of its symmetry class.
"""

import math
from dataclasses import dataclass
from typing import Optional, Protocol, Tuple

import numpy as np

from src.exceptions import ConfigError
from src.mechanics.tensors import (
    EYE,
    MaterialKind,
    check_unit_vector,
    fd_gradient,
    fd_step,
    inverse,
    principal_invariants,
    pseudo_invariants,
    structural_tensor,
    sym,
    unit_vector,
)

MOONEY_RIVLIN_PRESETS = {
    "shifted": {"c": 1.0, "c1": 0.2, "c2": 0.8},
    "literal": {"c": 1.0, "c1": 1.0, "c2": 0.2},
}


@dataclass(frozen=True)
class MooneyRivlinParams:
    """Compressible Mooney-Rivlin constants.

    Psi = c (J - 1)^2 - k ln J + c1 (I1 - 3) + c2 (I2 - 3), with k = 2 (c1 + c2), or
    k = 2 (c1 + 2 c2) when ``stress_free`` is set so that S(I) = 0.
    """

    c: float = 1.0
    c1: float = 0.2
    c2: float = 0.8
    stress_free: bool = False

    def __post_init__(self):
        if not self.c > 0:
            raise ConfigError(f"Mooney-Rivlin c must be > 0, got {self.c}")
        if self.c1 < 0 or self.c2 < 0:
            raise ConfigError(f"Mooney-Rivlin c1, c2 must be >= 0, got {self.c1}, {self.c2}")

    @classmethod
    def preset(cls, name: str, stress_free: bool = False, **overrides) -> "MooneyRivlinParams":
        """Named constant set, optionally with individual constants replaced.

        Raises:
            ConfigError: If the preset name is unknown
        """
        if name not in MOONEY_RIVLIN_PRESETS:
            raise ConfigError(f"Unknown Mooney-Rivlin preset: {name}")
        values = dict(MOONEY_RIVLIN_PRESETS[name])
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(stress_free=stress_free, **values)

    @property
    def ln_j_modulus(self) -> float:
        if self.stress_free:
            return 2.0 * (self.c1 + 2.0 * self.c2)
        return 2.0 * (self.c1 + self.c2)

    def to_dict(self) -> dict:
        return {"c": self.c, "c1": self.c1, "c2": self.c2, "stress_free": self.stress_free}


@dataclass(frozen=True)
class BonetParams:
    """Bonet-Burton transversely isotropic constants (shear, bulk, fiber moduli)."""

    alpha: float = 1.585e5
    beta: float = 5e4
    gamma: float = 1.8e5
    a0: Tuple[float, float, float] = tuple(float(x) for x in unit_vector((1.0, 2.0, 1.0)))

    def __post_init__(self):
        if min(self.alpha, self.beta, self.gamma) <= 0:
            raise ConfigError("Bonet alpha, beta and gamma must be > 0")
        try:
            check_unit_vector(self.a0)
        except ValueError as e:
            raise ConfigError(str(e))
        object.__setattr__(self, "a0", tuple(float(x) for x in self.a0))

    @property
    def direction(self) -> np.ndarray:
        return np.array(self.a0)

    @property
    def structural(self) -> np.ndarray:
        return structural_tensor(self.direction)

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta, "gamma": self.gamma, "a0": list(self.a0)}


def _jacobian(i3: float) -> float:
    if i3 <= 0:
        raise ValueError(f"det C must be positive, got {i3!r}")
    return math.sqrt(i3)


def mooney_rivlin_energy(params: MooneyRivlinParams, c: np.ndarray) -> float:
    """Strain energy of the compressible Mooney-Rivlin law."""
    inv = principal_invariants(c)
    j = _jacobian(inv.i3)
    return (
        params.c * (j - 1.0) ** 2
        - params.ln_j_modulus * math.log(j)
        + params.c1 * (inv.i1 - 3.0)
        + params.c2 * (inv.i2 - 3.0)
    )


def mooney_rivlin_coefficients(params: MooneyRivlinParams, c: np.ndarray) -> np.ndarray:
    """Closed-form coefficients of S in the basis [I, C, C^-1]."""
    inv = principal_invariants(c)
    j = _jacobian(inv.i3)
    return np.array(
        [
            2.0 * (params.c1 + params.c2 * inv.i1),
            -2.0 * params.c2,
            2.0 * params.c * j * (j - 1.0) - params.ln_j_modulus,
        ]
    )


def mooney_rivlin_stress(params: MooneyRivlinParams, c: np.ndarray) -> np.ndarray:
    """S = 2(c1 + c2 I1) I - 2 c2 C + (2cJ(J-1) - k) C^-1.

    Raises:
        SingularC: If |det C| < 1e-14
    """
    c = sym(c)
    c_inv = inverse(c)
    k1, k2, k3 = mooney_rivlin_coefficients(params, c)
    return sym(k1 * EYE + k2 * c + k3 * c_inv)


def bonet_energy(params: BonetParams, c: np.ndarray) -> float:
    """Psi = [alpha + 2 beta ln J + gamma (I4 - 1)](I4 - 1) - alpha (I5 - 1) / 2."""
    inv = principal_invariants(c)
    i4, i5 = pseudo_invariants(c, params.direction)
    ln_j = math.log(_jacobian(inv.i3))
    return (params.alpha + 2.0 * params.beta * ln_j + params.gamma * (i4 - 1.0)) * (
        i4 - 1.0
    ) - 0.5 * params.alpha * (i5 - 1.0)


def bonet_coefficients(params: BonetParams, c: np.ndarray) -> np.ndarray:
    """Exact coefficients of S in [I, C, A, C^2, AC+CA, AC^2+C^2A].

    C^-1 is rewritten through Cayley-Hamilton as (C^2 - I1 C + I2 I) / I3.
    """
    inv = principal_invariants(c)
    i4, _ = pseudo_invariants(c, params.direction)
    ln_j = math.log(_jacobian(inv.i3))
    vol = 2.0 * params.beta * (i4 - 1.0) / inv.i3
    return np.array(
        [
            vol * inv.i2,
            -vol * inv.i1,
            2.0 * (params.alpha + 2.0 * params.beta * ln_j + 2.0 * params.gamma * (i4 - 1.0)),
            vol,
            -params.alpha,
            0.0,
        ]
    )


def bonet_stress(params: BonetParams, c: np.ndarray) -> np.ndarray:
    """S = 2b(I4-1) C^-1 + 2[a + 2b ln J + 2g(I4-1)] A - a (Ca0 x a0 + a0 x Ca0).

    Raises:
        SingularC: If |det C| < 1e-14
    """
    c = sym(c)
    a0 = params.direction
    c_inv = inverse(c)
    inv = principal_invariants(c)
    i4, _ = pseudo_invariants(c, a0)
    ln_j = math.log(_jacobian(inv.i3))
    ca0 = c @ a0
    s = (
        2.0 * params.beta * (i4 - 1.0) * c_inv
        + 2.0
        * (params.alpha + 2.0 * params.beta * ln_j + 2.0 * params.gamma * (i4 - 1.0))
        * np.outer(a0, a0)
        - params.alpha * (np.outer(ca0, a0) + np.outer(a0, ca0))
    )
    return sym(s)


class Law(Protocol):
    """Interface shared by the ground-truth laws."""

    name: str
    kind: MaterialKind

    @property
    def a0(self) -> Optional[np.ndarray]: ...

    def stress(self, c: np.ndarray) -> np.ndarray: ...

    def energy(self, c: np.ndarray) -> float: ...

    def coefficients(self, c: np.ndarray) -> np.ndarray: ...

    def to_dict(self) -> dict: ...


class MooneyRivlin:
    """Isotropic ground truth."""

    name = "mooney_rivlin"
    kind = MaterialKind.ISO

    def __init__(self, params: Optional[MooneyRivlinParams] = None):
        self.params = params or MooneyRivlinParams()

    @property
    def a0(self) -> Optional[np.ndarray]:
        return None

    def stress(self, c: np.ndarray) -> np.ndarray:
        return mooney_rivlin_stress(self.params, c)

    def energy(self, c: np.ndarray) -> float:
        return mooney_rivlin_energy(self.params, c)

    def coefficients(self, c: np.ndarray) -> np.ndarray:
        return mooney_rivlin_coefficients(self.params, c)

    def to_dict(self) -> dict:
        return {"name": self.name, "kind": self.kind.value, **self.params.to_dict()}

    def __repr__(self):
        return f"<MooneyRivlin {self.params.to_dict()}>"


class Bonet:
    """Transversely isotropic ground truth."""

    name = "bonet"
    kind = MaterialKind.TRANS_ISO

    def __init__(self, params: Optional[BonetParams] = None):
        self.params = params or BonetParams()

    @property
    def a0(self) -> np.ndarray:
        return self.params.direction

    @property
    def structural(self) -> np.ndarray:
        return self.params.structural

    def stress(self, c: np.ndarray) -> np.ndarray:
        return bonet_stress(self.params, c)

    def energy(self, c: np.ndarray) -> float:
        return bonet_energy(self.params, c)

    def coefficients(self, c: np.ndarray) -> np.ndarray:
        return bonet_coefficients(self.params, c)

    def to_dict(self) -> dict:
        return {"name": self.name, "kind": self.kind.value, **self.params.to_dict()}

    def __repr__(self):
        return f"<Bonet {self.params.to_dict()}>"


def law_tangent(law: Law, c: np.ndarray) -> np.ndarray:
    """Material tangent 2 dS/dC by central differences of the law's stress.

    Raises:
        SingularC: If |det C| < 1e-14
    """
    return 2.0 * fd_gradient(law.stress, c, h=fd_step(c))


def law_from_config(cfg) -> Law:
    """Build the law selected by an ExperimentConfig (or any ``key -> value`` mapping).

    Raises:
        ConfigError: If the law name or its constants are invalid
    """
    name = cfg["law.name"]
    if name == "mooney_rivlin":
        params = MooneyRivlinParams.preset(
            cfg["law.preset"],
            stress_free=cfg["law.stress_free"],
            c=cfg["law.c"],
            c1=cfg["law.c1"],
            c2=cfg["law.c2"],
        )
        return MooneyRivlin(params)
    if name == "bonet":
        try:
            a0 = tuple(float(x) for x in unit_vector(cfg["law.a0"]))
        except ValueError as e:
            raise ConfigError(f"Invalid law.a0: {e}")
        return Bonet(BonetParams(cfg["law.alpha"], cfg["law.beta"], cfg["law.gamma"], a0))
    raise ConfigError(f"Unknown law: {name}")
