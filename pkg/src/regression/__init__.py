"""Gaussian process regression: Matern 3/2 kriging and its local approximate variant."""

from src.regression.gpr import (
    GprConfig,
    GprModel,
    KernelParams,
    Normalization,
    fit,
    predict,
    predict_grad,
)
from src.regression.kernels import correlation, correlation_grad, matern32, matern32_grad
from src.regression.lagpr import LaGprConfig, LocalGpr, RefitPolicy, lagpr_predict

__all__ = [
    "GprConfig",
    "GprModel",
    "KernelParams",
    "LaGprConfig",
    "LocalGpr",
    "Normalization",
    "RefitPolicy",
    "correlation",
    "correlation_grad",
    "fit",
    "lagpr_predict",
    "matern32",
    "matern32_grad",
    "predict",
    "predict_grad",
]
