"""Local approximate GPR.

Each query fits a small kriging model on its ``n_inducing`` Euclidean-nearest
training rows. All local models share the scaling of the full dataset, so their
length scales live in the same units as the global estimate they start from.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from src.exceptions import ConfigError, DimensionMismatch
from src.regression.gpr import GprConfig, GprModel, Normalization, fit

logger = logging.getLogger(__name__)


class RefitPolicy(str, Enum):
    """How local length scales are obtained."""

    REFIT_PER_QUERY = "refit_per_query"
    REUSE_GLOBAL_THETA = "reuse_global_theta"


@dataclass(frozen=True)
class LaGprConfig:
    """Neighbourhood size, refit policy and the global/local switch."""

    n_inducing: int = 60
    policy: RefitPolicy = RefitPolicy.REFIT_PER_QUERY
    n_switch: int = 400
    local_max_evals: int = 60

    def __post_init__(self):
        object.__setattr__(self, "policy", RefitPolicy(self.policy))
        if self.n_inducing < 2:
            raise ConfigError(f"n_inducing must be >= 2, got {self.n_inducing}")

    @classmethod
    def from_experiment(cls, cfg) -> "LaGprConfig":
        return cls(
            n_inducing=cfg["gpr.n_inducing"],
            policy=cfg["gpr.refit_policy"],
            n_switch=cfg["gpr.n_switch"],
            local_max_evals=cfg["gpr.local_max_evals"],
        )

    def to_dict(self) -> dict:
        return {
            "n_inducing": self.n_inducing,
            "policy": self.policy.value,
            "n_switch": self.n_switch,
            "local_max_evals": self.local_max_evals,
        }


def _subset(n: int, size: int) -> np.ndarray:
    if n <= size:
        return np.arange(n)
    return np.unique(np.linspace(0, n - 1, size).round().astype(int))


class LocalGpr:
    """Nearest-neighbour kriging over a fixed dataset.

    With ``n_inducing >= N`` every query would use the whole dataset, so a single
    global model is fitted once and used for all queries.
    """

    def __init__(
        self,
        x: np.ndarray,
        y: np.ndarray,
        config: Optional[LaGprConfig] = None,
        gpr_config: Optional[GprConfig] = None,
        global_theta: Optional[np.ndarray] = None,
    ):
        self.config = config or LaGprConfig()
        self.gpr_config = gpr_config or GprConfig()
        self.x = np.atleast_2d(np.asarray(x, dtype=float))
        y = np.asarray(y, dtype=float)
        self.y = y.reshape(-1, 1) if y.ndim == 1 else y
        if len(self.x) != len(self.y):
            raise DimensionMismatch(f"{len(self.x)} inputs against {len(self.y)} outputs")
        self.normalization = Normalization.from_data(self.x, self.y)
        self._tree = cKDTree(self.x)
        self.global_model: Optional[GprModel] = None

        if self.config.n_inducing >= len(self.x):
            self.global_model = fit(self.x, self.y, self.gpr_config)
            self.global_theta = np.array([p.theta for p in self.global_model.params])
        elif global_theta is not None:
            self.global_theta = np.asarray(global_theta, dtype=float)
        else:
            rows = _subset(len(self.x), self.config.n_switch)
            logger.debug(f"Estimating global length scales on {len(rows)} of {len(self.x)} rows")
            model = fit(
                self.x[rows], self.y[rows], self.gpr_config, normalization=self.normalization
            )
            self.global_theta = np.array([p.theta for p in model.params])

    @property
    def n_inputs(self) -> int:
        return self.x.shape[1]

    def neighbours(self, x) -> np.ndarray:
        """Indices of the nearest training rows, in ascending dataset order."""
        k = min(self.config.n_inducing, len(self.x))
        _, idx = self._tree.query(np.asarray(x, dtype=float).reshape(-1), k=k)
        return np.sort(np.atleast_1d(idx))

    def local_model(self, x) -> GprModel:
        """Kriging model fitted on the neighbourhood of x."""
        if self.global_model is not None:
            return self.global_model
        rows = self.neighbours(x)
        if self.config.policy is RefitPolicy.REUSE_GLOBAL_THETA:
            return fit(
                self.x[rows],
                self.y[rows],
                self.gpr_config,
                theta=self.global_theta,
                normalization=self.normalization,
            )
        return fit(
            self.x[rows],
            self.y[rows],
            self.gpr_config,
            start=self.global_theta,
            max_evals=self.config.local_max_evals,
            normalization=self.normalization,
        )

    def predict(self, x) -> np.ndarray:
        return self.local_model(x).predict(x)

    def predict_grad(self, x) -> np.ndarray:
        return self.local_model(x).predict_grad(x)

    def predict_batch(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if self.global_model is not None:
            return self.global_model.predict_batch(x)
        return np.array([self.predict(row) for row in x])

    def to_dict(self) -> dict:
        return {
            "x": self.x.tolist(),
            "y": self.y.tolist(),
            "config": self.config.to_dict(),
            "gpr_config": self.gpr_config.to_dict(),
            "global_theta": self.global_theta.tolist(),
            "global_model": self.global_model.to_dict() if self.global_model else None,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LocalGpr":
        gpr_data = dict(data["gpr_config"])
        gpr_data["log10_theta_bounds"] = tuple(gpr_data["log10_theta_bounds"])
        model = cls.__new__(cls)
        model.config = LaGprConfig(**data["config"])
        model.gpr_config = GprConfig(**gpr_data)
        model.x = np.array(data["x"], dtype=float)
        model.y = np.array(data["y"], dtype=float)
        model.normalization = Normalization.from_data(model.x, model.y)
        model._tree = cKDTree(model.x)
        model.global_theta = np.array(data["global_theta"], dtype=float)
        model.global_model = (
            GprModel.from_dict(data["global_model"]) if data["global_model"] else None
        )
        return model

    def __repr__(self):
        return f"<LocalGpr N={len(self.x)} n={self.config.n_inducing} {self.config.policy.value}>"


def lagpr_predict(
    x: np.ndarray,
    y: np.ndarray,
    x_star,
    config: Optional[LaGprConfig] = None,
    gpr_config: Optional[GprConfig] = None,
) -> np.ndarray:
    """One-shot local prediction at x_star from the dataset (x, y)."""
    return LocalGpr(x, y, config, gpr_config).predict(x_star)
