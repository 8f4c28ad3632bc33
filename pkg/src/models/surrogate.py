"""Constitutive surrogates built on kriging models.

Three mappings are supported:
- classical6to6: the six entries of C straight to the six entries of S
- iso3to3: principal invariants to the coefficients of [I, C, C^-1]
- transiso5to6: five invariants to the coefficients of the six-generator basis

The physics-informed mappings rebuild S from the generators at the query C, so their
predictions are symmetric and rotate with C for any fitted coefficients.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np

from src.exceptions import DimensionMismatch
from src.mechanics.coeffs import CoeffVector, reconstruct_stress
from src.mechanics.tensors import (
    MaterialKind,
    fd_gradient,
    from_voigt,
    generator_basis,
    generator_gradients,
    invariant_gradients,
    invariants,
    structural_tensor,
    sym,
    to_voigt,
    unit_vector,
)
from src.regression.gpr import GprConfig, GprModel, fit
from src.regression.lagpr import LaGprConfig, LocalGpr

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1

Regressor = Union[GprModel, LocalGpr]


class MappingKind(str, Enum):
    """Input/output layout of a surrogate."""

    CLASSICAL = "classical6to6"
    ISO = "iso3to3"
    TRANS_ISO = "transiso5to6"

    @property
    def n_inputs(self) -> int:
        return {"classical6to6": 6, "iso3to3": 3, "transiso5to6": 5}[self.value]

    @property
    def n_outputs(self) -> int:
        return {"classical6to6": 6, "iso3to3": 3, "transiso5to6": 6}[self.value]

    @property
    def material_kind(self) -> Optional[MaterialKind]:
        return {
            "classical6to6": None,
            "iso3to3": MaterialKind.ISO,
            "transiso5to6": MaterialKind.TRANS_ISO,
        }[self.value]

    @property
    def physics_informed(self) -> bool:
        return self is not MappingKind.CLASSICAL

    @classmethod
    def for_material(cls, kind: MaterialKind) -> "MappingKind":
        return cls.ISO if MaterialKind(kind) is MaterialKind.ISO else cls.TRANS_ISO


class SurrogateModel:
    """A trained mapping plus the material data needed to turn it into stresses."""

    def __init__(
        self,
        kind: MappingKind,
        regressor: Regressor,
        a0: Optional[np.ndarray] = None,
        provenance: Optional[dict] = None,
    ):
        self.kind = MappingKind(kind)
        self.regressor = regressor
        self.a0 = None if a0 is None else unit_vector(a0)
        self.provenance = dict(provenance or {})
        if self.kind is MappingKind.TRANS_ISO and self.a0 is None:
            raise DimensionMismatch("transiso5to6 surrogates need the direction a0")
        if regressor.n_inputs != self.kind.n_inputs:
            raise DimensionMismatch(
                f"{self.kind.value} takes {self.kind.n_inputs} inputs, "
                f"regressor has {regressor.n_inputs}"
            )

    @property
    def structural(self) -> Optional[np.ndarray]:
        return None if self.a0 is None else structural_tensor(self.a0)

    @property
    def n_train(self) -> int:
        return len(self.regressor.x)

    @property
    def is_local(self) -> bool:
        return isinstance(self.regressor, LocalGpr)

    def features(self, c: np.ndarray) -> np.ndarray:
        """Regressor input for one C."""
        if self.kind is MappingKind.CLASSICAL:
            return to_voigt(sym(c))
        return invariants(c, self.a0).as_array()

    def _basis(self, c: np.ndarray):
        return generator_basis(self.kind.material_kind, c, self.structural)

    def predict_coefficients(self, c: np.ndarray) -> CoeffVector:
        """Generator coefficients at C (physics-informed kinds only)."""
        if not self.kind.physics_informed:
            raise DimensionMismatch("classical6to6 surrogates predict no coefficients")
        return CoeffVector(self.kind.material_kind, self.regressor.predict(self.features(c)))

    def predict_stress(self, c: np.ndarray) -> np.ndarray:
        """Second Piola-Kirchhoff stress at C.

        Raises:
            SingularC: If |det C| < 1e-14 (physics-informed kinds)
        """
        return from_voigt(self._stress_chunk(np.asarray(c, dtype=float).reshape(1, 3, 3))[0])

    def _stress_chunk(self, cs: np.ndarray) -> np.ndarray:
        cs = 0.5 * (cs + cs.transpose(0, 2, 1))
        features = np.array([self.features(c) for c in cs])
        outputs = self.regressor.predict_batch(features)
        if self.kind is MappingKind.CLASSICAL:
            return outputs
        kind = self.kind.material_kind
        return np.array(
            [
                to_voigt(reconstruct_stress(CoeffVector(kind, out), self._basis(c)))
                for c, out in zip(cs, outputs)
            ]
        )

    def predict_stress_batch(self, cs: np.ndarray, workers: int = 1) -> np.ndarray:
        """Stresses at a stack of C tensors, returned as rows ordered 11, 12, 13, 22, 23, 33."""
        cs = np.asarray(cs, dtype=float).reshape(-1, 3, 3)
        if workers <= 1 or len(cs) < 2 * workers:
            return self._stress_chunk(cs)
        chunks = np.array_split(cs, workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return np.vstack(list(pool.map(self._stress_chunk, chunks)))

    def predict_tangent(self, c: np.ndarray) -> np.ndarray:
        """Material tangent 2 dS/dC.

        Physics-informed kinds use the chain rule through the invariants,
        2 sum_j [H_j (x) dc_j/dC + c_j dH_j/dC] with dc_j/dC = sum_k dc_j/dI_k dI_k/dC.
        The classical kind falls back to central differences of predict_stress.
        """
        c = sym(c)
        if self.kind is MappingKind.CLASSICAL:
            return 2.0 * fd_gradient(self.predict_stress, c)

        kind = self.kind.material_kind
        a = self.structural
        x = self.features(c)
        regressor = self.regressor.local_model(x) if self.is_local else self.regressor
        coeffs = regressor.predict(x)
        jac = regressor.predict_grad(x)
        basis = self._basis(c)
        d_generators = generator_gradients(kind, c, a)
        d_invariants = np.stack(invariant_gradients(kind, c, a, self.a0))

        tangent = np.zeros((3, 3, 3, 3))
        for j, h in enumerate(basis.generators):
            dc = np.tensordot(jac[j], d_invariants, axes=1)
            tangent += np.einsum("ij,kl->ijkl", h, dc) + coeffs[j] * d_generators[j]
        return 2.0 * tangent

    def to_dict(self) -> dict:
        """Convert surrogate to a JSON-friendly dictionary."""
        return {
            "format_version": FORMAT_VERSION,
            "kind": self.kind.value,
            "a0": None if self.a0 is None else self.a0.tolist(),
            "provenance": self.provenance,
            "regressor": {
                "type": "local" if self.is_local else "global",
                "model": self.regressor.to_dict(),
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SurrogateModel":
        if data.get("format_version") != FORMAT_VERSION:
            raise ValueError(f"Unsupported surrogate format version {data.get('format_version')}")
        reg = data["regressor"]
        regressor = (
            LocalGpr.from_dict(reg["model"])
            if reg["type"] == "local"
            else GprModel.from_dict(reg["model"])
        )
        return cls(data["kind"], regressor, data["a0"], data["provenance"])

    def __repr__(self):
        return f"<SurrogateModel {self.kind.value} N={self.n_train}>"


def train_surrogate(
    kind: MappingKind,
    inputs: np.ndarray,
    outputs: np.ndarray,
    gpr_config: Optional[GprConfig] = None,
    lagpr_config: Optional[LaGprConfig] = None,
    a0: Optional[np.ndarray] = None,
    provenance: Optional[dict] = None,
) -> SurrogateModel:
    """Fit a surrogate, globally up to ``n_switch`` rows and with laGPR above.

    Raises:
        DimensionMismatch: If the data columns do not match the mapping kind
    """
    kind = MappingKind(kind)
    inputs = np.atleast_2d(np.asarray(inputs, dtype=float))
    outputs = np.atleast_2d(np.asarray(outputs, dtype=float))
    if inputs.shape[1] != kind.n_inputs or outputs.shape[1] != kind.n_outputs:
        raise DimensionMismatch(
            f"{kind.value} needs {kind.n_inputs} -> {kind.n_outputs} columns, "
            f"got {inputs.shape[1]} -> {outputs.shape[1]}"
        )
    gpr_config = gpr_config or GprConfig()
    lagpr_config = lagpr_config or LaGprConfig()

    if len(inputs) <= lagpr_config.n_switch:
        logger.info(f"Training {kind.value} with global GPR on {len(inputs):,} points")
        regressor = fit(inputs, outputs, gpr_config)
    else:
        logger.info(
            f"Training {kind.value} with laGPR on {len(inputs):,} points "
            f"({lagpr_config.n_inducing} inducing, {lagpr_config.policy.value})"
        )
        regressor = LocalGpr(inputs, outputs, lagpr_config, gpr_config)
    return SurrogateModel(kind, regressor, a0, provenance)


def predict_coefficients(model: SurrogateModel, c: np.ndarray) -> CoeffVector:
    return model.predict_coefficients(c)


def predict_stress(model: SurrogateModel, c: np.ndarray) -> np.ndarray:
    return model.predict_stress(c)


def predict_stress_batch(model: SurrogateModel, cs: np.ndarray, workers: int = 1) -> np.ndarray:
    return model.predict_stress_batch(cs, workers)


def predict_tangent(model: SurrogateModel, c: np.ndarray) -> np.ndarray:
    return model.predict_tangent(c)


def stress_error(predicted: np.ndarray, true: np.ndarray) -> Tuple[float, float]:
    """Root mean square stress error over all six components, raw and relative to the RMS stress."""
    predicted = np.asarray(predicted, dtype=float).reshape(-1, 6)
    true = np.asarray(true, dtype=float).reshape(-1, 6)
    e_s = float(np.sqrt(np.mean((predicted - true) ** 2)))
    scale = float(np.sqrt(np.mean(true**2)))
    return e_s, (e_s / scale if scale > 0 else float("inf") if e_s > 0 else 0.0)
