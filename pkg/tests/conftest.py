"""Pytest configuration and fixtures."""

import numpy as np
import pytest

from src.config import ExperimentConfig
from src.mechanics.laws import Bonet, BonetParams, MooneyRivlin, MooneyRivlinParams
from src.mechanics.tensors import right_cauchy_green, unit_vector
from src.sampling.design import DomainBounds
from src.sampling.hull import build_hull

# Budgets small enough for a full pipeline run in a few seconds.
DESK_OVERRIDES = {
    "sample.n_train": "120",
    "sample.n_test": "60",
    "hull.n_cloud": "2000",
    "anneal.NT": "15",
    "anneal.aniso_NT": "15",
    "gpr.n_starts": "2",
    "gpr.max_evals": "60",
    "gpr.n_inducing": "20",
    "gpr.n_switch": "80",
    "gpr.local_max_evals": "20",
    "sweep.steps": "21",
    "evaluate.timings": "false",
}


def random_gradient(rng: np.random.Generator, delta: float = 0.15) -> np.ndarray:
    """Deformation gradient drawn uniformly from the box I +/- delta."""
    return np.eye(3) + rng.uniform(-delta, delta, size=(3, 3))


def random_c(rng: np.random.Generator, delta: float = 0.15) -> np.ndarray:
    return right_cauchy_green(random_gradient(rng, delta))


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


@pytest.fixture
def rng():
    """Seeded random generator."""
    return np.random.default_rng(1234)


@pytest.fixture
def example_c():
    """Diagonal C of the worked invariant example."""
    return np.diag([1.4, 1.1, 0.8])


@pytest.fixture
def example_a0():
    """Fiber direction (1, 2, 1) / sqrt(6)."""
    return unit_vector([1.0, 2.0, 1.0])


@pytest.fixture
def mooney_rivlin():
    """Mooney-Rivlin law with the default constants."""
    return MooneyRivlin(MooneyRivlinParams())


@pytest.fixture
def bonet():
    """Bonet law with the default constants and direction."""
    return Bonet(BonetParams())


@pytest.fixture
def bounds():
    """Default deformation gradient box."""
    return DomainBounds(0.175)


@pytest.fixture(scope="session")
def small_hull():
    """Hull of a small invariant cloud, shared by the sampling tests."""
    return build_hull(DomainBounds(0.175), 2000, seed=2)


@pytest.fixture
def desk_config(tmp_path):
    """Mooney-Rivlin experiment with tiny budgets writing into a temporary directory."""
    overrides = dict(DESK_OVERRIDES, **{"output.dir": str(tmp_path / "results")})
    return ExperimentConfig.load(overrides=overrides)


@pytest.fixture
def bonet_config(tmp_path):
    """Bonet experiment with tiny budgets writing into a temporary directory."""
    overrides = dict(
        DESK_OVERRIDES, **{"law.name": "bonet", "output.dir": str(tmp_path / "results")}
    )
    return ExperimentConfig.load(overrides=overrides)
