"""Ordinary kriging with independent outputs.

Every output column gets its own Matern 3/2 length scales, found by maximizing the
profile restricted likelihood; the constant trend is estimated by generalized
least squares. Inputs are scaled to [0, 1] and outputs standardized before fitting.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg, optimize
from scipy.spatial.distance import pdist

from src.exceptions import DimensionMismatch, DuplicateInputs, IllConditioned
from src.regression.kernels import correlation, correlation_grad

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
DUPLICATE_DISTANCE = 1e-10
FAILED_OBJECTIVE = 1e300
# Largest training residual, in standardized output units, a theta candidate may leave.
INTERPOLATION_TOL = 1e-9


@dataclass(frozen=True)
class KernelParams:
    """Length scales (in normalized input units) and diagonal jitter of one output."""

    theta: Tuple[float, ...]
    nugget: float

    def __post_init__(self):
        object.__setattr__(self, "theta", tuple(float(t) for t in np.ravel(self.theta)))
        if any(t <= 0 for t in self.theta):
            raise ValueError(f"Length scales must be positive, got {self.theta}")
        if self.nugget < 0:
            raise ValueError(f"Nugget must be non-negative, got {self.nugget}")

    def to_dict(self) -> dict:
        return {"theta": list(self.theta), "nugget": self.nugget}


@dataclass(frozen=True)
class GprConfig:
    """Fitting settings."""

    nugget: float = 1e-10
    max_nugget: float = 1e-6
    n_starts: int = 8
    max_evals: int = 200
    log10_theta_bounds: Tuple[float, float] = (-3.0, 3.0)
    seed: int = 5

    @classmethod
    def from_experiment(cls, cfg) -> "GprConfig":
        return cls(
            nugget=cfg["gpr.nugget"],
            n_starts=cfg["gpr.n_starts"],
            max_evals=cfg["gpr.max_evals"],
            seed=cfg["seeds.gpr"],
        )

    def to_dict(self) -> dict:
        return {
            "nugget": self.nugget,
            "max_nugget": self.max_nugget,
            "n_starts": self.n_starts,
            "max_evals": self.max_evals,
            "log10_theta_bounds": list(self.log10_theta_bounds),
            "seed": self.seed,
        }


@dataclass(frozen=True)
class Normalization:
    """Affine maps x -> (x - x_lower) / x_scale and y -> (y - y_mean) / y_scale."""

    x_lower: np.ndarray
    x_scale: np.ndarray
    y_mean: np.ndarray
    y_scale: np.ndarray

    @classmethod
    def from_data(cls, x: np.ndarray, y: np.ndarray) -> "Normalization":
        x_range = x.max(axis=0) - x.min(axis=0)
        y_std = y.std(axis=0)
        return cls(
            x_lower=x.min(axis=0),
            x_scale=np.where(x_range > 0, x_range, 1.0),
            y_mean=y.mean(axis=0),
            y_scale=np.where(y_std > 0, y_std, 1.0),
        )

    def inputs(self, x: np.ndarray) -> np.ndarray:
        return (x - self.x_lower) / self.x_scale

    def outputs(self, y: np.ndarray) -> np.ndarray:
        return (y - self.y_mean) / self.y_scale

    def to_dict(self) -> dict:
        return {k: getattr(self, k).tolist() for k in ("x_lower", "x_scale", "y_mean", "y_scale")}

    @classmethod
    def from_dict(cls, data: dict) -> "Normalization":
        return cls(**{k: np.array(v, dtype=float) for k, v in data.items()})


def _factorize(xn: np.ndarray, theta, nugget: float, max_nugget: float):
    """Cholesky factor of R + nugget I, escalating the nugget tenfold on failure."""
    r = correlation(xn, xn, theta)
    eye = np.eye(len(xn))
    while True:
        try:
            return linalg.cho_factor(r + nugget * eye, lower=True), nugget
        except linalg.LinAlgError:
            if nugget >= max_nugget:
                raise IllConditioned(f"Correlation matrix not SPD at nugget {nugget:.0e}")
            nugget = nugget * 10.0 if nugget > 0 else 1e-12
            logger.debug(f"Escalating nugget to {nugget:.0e}")


def _gls(factor, yn: np.ndarray):
    ones = np.ones(len(yn))
    r_inv_1 = linalg.cho_solve(factor, ones)
    denom = float(ones @ r_inv_1)
    mu = float(r_inv_1 @ yn) / denom
    gamma = linalg.cho_solve(factor, yn - mu)
    return mu, gamma, denom


def _restricted_likelihood(factor, yn: np.ndarray, mu: float, gamma: np.ndarray, denom: float):
    n = len(yn)
    sigma2 = float((yn - mu) @ gamma) / max(n - 1, 1)
    if sigma2 <= 0:
        return -FAILED_OBJECTIVE
    log_det = 2.0 * float(np.sum(np.log(np.diag(factor[0]))))
    return -0.5 * ((n - 1) * np.log(sigma2) + log_det + np.log(denom))


def profile_log_likelihood(
    xn: np.ndarray, yn: np.ndarray, theta, nugget: float, max_nugget: float
) -> float:
    """Restricted log-likelihood with the process variance profiled out.

    -1/2 [(N - 1) log s2 + log|R| + log(1^T R^-1 1)], s2 = (y - mu)^T R^-1 (y - mu) / (N - 1)
    """
    factor, _ = _factorize(xn, theta, nugget, max_nugget)
    mu, gamma, denom = _gls(factor, yn)
    return _restricted_likelihood(factor, yn, mu, gamma, denom)


def interpolating_log_likelihood(xn: np.ndarray, yn: np.ndarray, theta, nugget: float) -> float:
    """Profile likelihood of theta, or -FAILED_OBJECTIVE unless the model interpolates.

    The candidate must factorize at ``nugget`` itself and reproduce every training
    output to INTERPOLATION_TOL.
    """
    r = correlation(xn, xn, theta)
    try:
        factor = linalg.cho_factor(r + nugget * np.eye(len(xn)), lower=True)
    except linalg.LinAlgError:
        return -FAILED_OBJECTIVE
    mu, gamma, denom = _gls(factor, yn)
    residual = mu + r @ gamma - yn
    if not np.all(np.isfinite(residual)) or np.abs(residual).max() > INTERPOLATION_TOL:
        return -FAILED_OBJECTIVE
    return _restricted_likelihood(factor, yn, mu, gamma, denom)


def _search_theta(
    xn: np.ndarray,
    yn: np.ndarray,
    config: GprConfig,
    starts: np.ndarray,
    max_evals: int,
) -> np.ndarray:
    lo, hi = config.log10_theta_bounds
    bounds = [(lo, hi)] * xn.shape[1]

    def strict(log10_theta):
        return -interpolating_log_likelihood(xn, yn, 10.0**log10_theta, config.nugget)

    def relaxed(log10_theta):
        try:
            return -profile_log_likelihood(
                xn, yn, 10.0**log10_theta, config.nugget, config.max_nugget
            )
        except IllConditioned:
            return FAILED_OBJECTIVE

    best_x = _minimize(strict, starts, bounds, max_evals)
    if best_x is None:
        logger.warning("No interpolating length scales found, allowing nugget escalation")
        best_x = _minimize(relaxed, starts, bounds, max_evals)
        if best_x is None:
            raise IllConditioned("Likelihood search failed from every start")
    return 10.0**best_x


def _minimize(objective, starts: np.ndarray, bounds, max_evals: int) -> Optional[np.ndarray]:
    """Best bounded Powell result over the starts, None if every start failed."""
    lo, hi = bounds[0]
    best_x, best_f = None, FAILED_OBJECTIVE
    for start in starts:
        result = optimize.minimize(
            objective,
            start,
            method="Powell",
            bounds=bounds,
            options={"maxfev": max_evals, "xtol": 1e-4, "ftol": 1e-10},
        )
        value = float(result.fun)
        if value < best_f:
            best_x, best_f = np.clip(result.x, lo, hi), value
    return best_x


def _starts(config: GprConfig, n_dims: int, output: int) -> np.ndarray:
    lo, hi = config.log10_theta_bounds
    rng = np.random.default_rng([config.seed, output])
    random = rng.uniform(lo, hi, size=(max(config.n_starts - 1, 0), n_dims))
    return np.vstack([np.zeros((1, n_dims)), random])[: config.n_starts]


class GprModel:
    """Fitted kriging model.

    Attributes:
        x: Training inputs (N, J)
        y: Training outputs (N, D)
        params: One KernelParams per output
        mu: GLS mean per output, in standardized units
        normalization: Input and output scaling
    """

    def __init__(
        self,
        x: np.ndarray,
        y: np.ndarray,
        params: Sequence[KernelParams],
        normalization: Normalization,
    ):
        self.x = np.asarray(x, dtype=float)
        self.y = np.asarray(y, dtype=float)
        self.normalization = normalization
        self.params: List[KernelParams] = []
        self._xn = normalization.inputs(self.x)
        yn = normalization.outputs(self.y)
        self.mu = np.empty(self.n_outputs)
        self.gamma = np.empty((len(self.x), self.n_outputs))
        for d, p in enumerate(params):
            factor, nugget = _factorize(self._xn, p.theta, p.nugget, max(p.nugget, 1e-6))
            self.mu[d], self.gamma[:, d], _ = _gls(factor, yn[:, d])
            self.params.append(KernelParams(p.theta, nugget))

    @property
    def n_inputs(self) -> int:
        return self.x.shape[1]

    @property
    def n_outputs(self) -> int:
        return self.y.shape[1]

    def _check(self, x: np.ndarray):
        if x.shape[-1] != self.n_inputs:
            raise DimensionMismatch(f"Model takes {self.n_inputs} inputs, got {x.shape[-1]}")

    def predict_batch(self, x: np.ndarray) -> np.ndarray:
        """Mean predictions at the rows of x, shape (M, D)."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        self._check(x)
        xn = self.normalization.inputs(x)
        out = np.empty((len(x), self.n_outputs))
        for d, p in enumerate(self.params):
            out[:, d] = self.mu[d] + correlation(xn, self._xn, p.theta) @ self.gamma[:, d]
        return out * self.normalization.y_scale + self.normalization.y_mean

    def predict(self, x) -> np.ndarray:
        """Mean prediction at one input, shape (D,)."""
        return self.predict_batch(np.asarray(x, dtype=float).reshape(1, -1))[0]

    def predict_grad(self, x) -> np.ndarray:
        """Jacobian of the mean prediction, shape (D, J)."""
        x = np.asarray(x, dtype=float).reshape(-1)
        self._check(x)
        xn = self.normalization.inputs(x)
        jac = np.empty((self.n_outputs, self.n_inputs))
        for d, p in enumerate(self.params):
            jac[d] = correlation_grad(xn, self._xn, p.theta).T @ self.gamma[:, d]
        return jac * self.normalization.y_scale[:, None] / self.normalization.x_scale[None, :]

    def to_dict(self) -> dict:
        """Convert model to a JSON-friendly dictionary."""
        return {
            "format_version": FORMAT_VERSION,
            "x": self.x.tolist(),
            "y": self.y.tolist(),
            "params": [p.to_dict() for p in self.params],
            "mu": self.mu.tolist(),
            "normalization": self.normalization.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GprModel":
        """Rebuild a model; the correlation factors are recomputed."""
        if data.get("format_version") != FORMAT_VERSION:
            raise ValueError(f"Unsupported GPR format version {data.get('format_version')}")
        params = [KernelParams(p["theta"], p["nugget"]) for p in data["params"]]
        return cls(
            np.array(data["x"]),
            np.array(data["y"]),
            params,
            Normalization.from_dict(data["normalization"]),
        )

    def __repr__(self):
        return f"<GprModel N={len(self.x)} J={self.n_inputs} D={self.n_outputs}>"


def check_distinct(xn: np.ndarray, min_distance: float = DUPLICATE_DISTANCE):
    """Raise DuplicateInputs if two rows are closer than ``min_distance``."""
    if len(xn) > 1 and float(np.min(pdist(xn))) < min_distance:
        raise DuplicateInputs(f"Training inputs closer than {min_distance:g}")


def fit(
    x: np.ndarray,
    y: np.ndarray,
    config: Optional[GprConfig] = None,
    theta: Optional[np.ndarray] = None,
    start: Optional[np.ndarray] = None,
    max_evals: Optional[int] = None,
    normalization: Optional[Normalization] = None,
) -> GprModel:
    """Fit one kriging model per output column.

    Args:
        x: Inputs (N, J)
        y: Outputs (N, D) or (N,)
        config: Fitting settings
        theta: Fixed length scales, (D, J) or (J,) shared; skips the search
        start: Single warm start (D, J) or (J,) replacing the multistart
        max_evals: Evaluation budget per start (defaults to ``config.max_evals``)
        normalization: Scaling to use instead of one derived from (x, y)

    Raises:
        DimensionMismatch: If x and y disagree in length
        DuplicateInputs: If two inputs coincide
        IllConditioned: If a correlation matrix fails at the largest nugget
    """
    config = config or GprConfig()
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.asarray(y, dtype=float)
    y = y.reshape(-1, 1) if y.ndim == 1 else y
    if len(x) != len(y) or len(x) < 1:
        raise DimensionMismatch(f"{len(x)} inputs against {len(y)} outputs")

    normalization = normalization or Normalization.from_data(x, y)
    xn = normalization.inputs(x)
    yn = normalization.outputs(y)
    check_distinct(xn)
    n_dims, n_out = x.shape[1], y.shape[1]
    max_evals = max_evals or config.max_evals

    params = []
    for d in range(n_out):
        if theta is not None:
            theta_d = np.broadcast_to(np.asarray(theta, dtype=float), (n_out, n_dims))[d]
        elif len(x) == 1 or np.ptp(yn[:, d]) == 0.0:
            theta_d = np.ones(n_dims)
        else:
            if start is not None:
                starts = np.log10(np.broadcast_to(np.asarray(start, dtype=float), (n_out, n_dims)))
                starts = np.clip(starts[d : d + 1], *config.log10_theta_bounds)
            else:
                starts = _starts(config, n_dims, d)
            theta_d = _search_theta(xn, yn[:, d], config, starts, max_evals)
        _, nugget = _factorize(xn, theta_d, config.nugget, config.max_nugget)
        params.append(KernelParams(theta_d, nugget))
        logger.debug(f"Output {d}: theta {np.round(theta_d, 4).tolist()}, nugget {nugget:.0e}")

    return GprModel(x, y, params, normalization)


def predict(model: GprModel, x) -> np.ndarray:
    """Mean prediction of a fitted model at one input."""
    return model.predict(x)


def predict_grad(model: GprModel, x) -> np.ndarray:
    """Jacobian of the mean prediction at one input, shape (D, J)."""
    return model.predict_grad(x)
