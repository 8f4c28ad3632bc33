"""Continuum mechanics: tensor algebra, ground-truth laws and coefficient extraction."""

from src.mechanics.coeffs import (
    CoeffVector,
    ExtractionReport,
    Multiplicity,
    extract_iso,
    extract_transiso,
    reconstruct_stress,
)
from src.mechanics.laws import (
    Bonet,
    BonetParams,
    Law,
    MooneyRivlin,
    MooneyRivlinParams,
    law_from_config,
    law_tangent,
)
from src.mechanics.tensors import (
    GeneratorBasis,
    InvariantPoint,
    MaterialKind,
    generator_basis,
    generator_gradients,
    invariant_gradients,
    invariants,
    principal_invariants,
    pseudo_invariants,
    right_cauchy_green,
)

__all__ = [
    "Bonet",
    "BonetParams",
    "CoeffVector",
    "ExtractionReport",
    "GeneratorBasis",
    "InvariantPoint",
    "Law",
    "MaterialKind",
    "MooneyRivlin",
    "MooneyRivlinParams",
    "Multiplicity",
    "extract_iso",
    "extract_transiso",
    "generator_basis",
    "generator_gradients",
    "invariant_gradients",
    "invariants",
    "law_from_config",
    "law_tangent",
    "principal_invariants",
    "pseudo_invariants",
    "reconstruct_stress",
    "right_cauchy_green",
]
