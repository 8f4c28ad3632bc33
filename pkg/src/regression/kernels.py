"""Separable Matern 3/2 correlation.

r(x, x') = prod_k (1 + sqrt(3) |x_k - x'_k| / theta_k) exp(-sqrt(3) |x_k - x'_k| / theta_k)
"""

import numpy as np

SQRT3 = np.sqrt(3.0)


def _factors(d: np.ndarray, theta: np.ndarray):
    a = SQRT3 * np.abs(d) / theta
    decay = np.exp(-a)
    return (1.0 + a) * decay, decay


def matern32(x, x_prime, theta) -> float:
    """Correlation of two points."""
    d = np.atleast_1d(np.asarray(x, dtype=float) - np.asarray(x_prime, dtype=float))
    f, _ = _factors(d, np.atleast_1d(np.asarray(theta, dtype=float)))
    return float(np.prod(f))


def matern32_grad(x, x_prime, theta) -> np.ndarray:
    """Gradient of matern32 with respect to its first argument."""
    return correlation_grad(np.atleast_1d(x), np.atleast_2d(x_prime), theta)[0]


def correlation(xa: np.ndarray, xb: np.ndarray, theta) -> np.ndarray:
    """Correlation matrix between the rows of xa (n, J) and xb (m, J)."""
    xa = np.atleast_2d(xa)
    xb = np.atleast_2d(xb)
    theta = np.asarray(theta, dtype=float)
    d = xa[:, None, :] - xb[None, :, :]
    f, _ = _factors(d, theta)
    return np.prod(f, axis=2)


def correlation_grad(x: np.ndarray, xb: np.ndarray, theta) -> np.ndarray:
    """d r(x, xb_i) / dx for every row of xb, shape (m, J)."""
    x = np.asarray(x, dtype=float)
    xb = np.atleast_2d(xb)
    theta = np.asarray(theta, dtype=float)
    d = x[None, :] - xb
    f, decay = _factors(d, theta)
    slope = -3.0 * d / theta**2 * decay
    grad = np.empty_like(d)
    for k in range(d.shape[1]):
        others = np.prod(np.delete(f, k, axis=1), axis=1)
        grad[:, k] = slope[:, k] * others
    return grad
