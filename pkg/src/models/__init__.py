"""Surrogate models and the files they are stored in."""

from src.models.base import atomic_write, check_hash, load_json, read_csv, save_json, write_csv
from src.models.records import Dataset, ErrorReport, ErrorRow, load_sample_set, save_sample_set
from src.models.surrogate import (
    MappingKind,
    SurrogateModel,
    predict_coefficients,
    predict_stress,
    predict_stress_batch,
    predict_tangent,
    stress_error,
    train_surrogate,
)

__all__ = [
    "Dataset",
    "ErrorReport",
    "ErrorRow",
    "MappingKind",
    "SurrogateModel",
    "atomic_write",
    "check_hash",
    "load_json",
    "load_sample_set",
    "predict_coefficients",
    "predict_stress",
    "predict_stress_batch",
    "predict_tangent",
    "read_csv",
    "save_json",
    "save_sample_set",
    "stress_error",
    "train_surrogate",
    "write_csv",
]
