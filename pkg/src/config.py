"""Configuration module for the application.

Two layers:
- Config / TestConfig: process settings read from the environment (.env supported)
- ExperimentConfig: one experiment, read from a file of ``dotted.key=value`` lines
"""

import hashlib
import os
from collections.abc import Mapping
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import dotenv_values, load_dotenv

from src.exceptions import ConfigError

load_dotenv()


class Config:
    """Application configuration class."""

    TESTING = False

    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
    LOG_FORMAT = "%(log_color)s%(asctime)s - %(name)s - %(levelname)s - %(message)s%(reset)s"
    LOG_DATEFMT = "%Y-%m-%d %H:%M:%S"

    BASE_DIR = Path(__file__).parent.parent
    OUTPUT_DIR = Path(os.getenv("SURROGATE_OUTPUT_DIR", str(BASE_DIR / "results")))
    WORKERS = int(os.getenv("SURROGATE_WORKERS", "1"))

    CSV_FORMAT = "%.17g"
    FORMAT_VERSION = 1


class TestConfig(Config):
    """Configuration for testing."""

    TESTING = True
    LOG_LEVEL = "DEBUG"
    WORKERS = 1


def _bool(text: str) -> bool:
    value = text.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _floats(text: str) -> tuple:
    return tuple(float(part) for part in text.split(",") if part.strip())


def _names(text: str) -> tuple:
    return tuple(part.strip() for part in text.split(",") if part.strip())


# key -> (parser, default, description)
KEYS: Dict[str, tuple] = {
    "law.name": (str, "mooney_rivlin", "mooney_rivlin | bonet"),
    "law.preset": (str, "shifted", "Mooney-Rivlin constants: shifted (c1=0.2, c2=0.8) | literal"),
    "law.c": (float, None, "Mooney-Rivlin volumetric modulus (overrides preset)"),
    "law.c1": (float, None, "Mooney-Rivlin c1 (overrides preset)"),
    "law.c2": (float, None, "Mooney-Rivlin c2 (overrides preset)"),
    "law.stress_free": (_bool, False, "use 2(c1+2c2) in the ln J term so that S(I)=0"),
    "law.alpha": (float, 1.585e5, "Bonet shear modulus"),
    "law.beta": (float, 5e4, "Bonet bulk modulus"),
    "law.gamma": (float, 1.8e5, "Bonet fiber reinforcement modulus"),
    "law.a0": (_floats, (1.0, 2.0, 1.0), "reinforcement direction, normalized on load"),
    "domain.delta": (float, 0.175, "half-width of the deformation gradient box"),
    "sample.sampler": (str, "both", "lhs | space_filling | both"),
    "sample.n_train": (int, 2500, "deformation gradient candidates for the training data"),
    "sample.design": (str, "tplhd", "training design in F space: tplhd | lhs"),
    "sample.N": (int, 0, "space-filling points, 0 = size of the deduplicated LHS set"),
    "sample.n_test": (int, 2000, "test points for the error metric"),
    "hull.n_cloud": (int, 20000, "deformation gradients used to build the invariant hull"),
    "anneal.NT": (int, 2000, "annealing sweeps in principal invariant space"),
    "anneal.T0": (float, 1.0, "initial step size in principal invariant space"),
    "anneal.alpha": (float, 0.9995, "step size decay per sweep"),
    "anneal.aniso_NT": (int, 2000, "annealing sweeps over the rotation angles"),
    "anneal.aniso_T0": (float, 2.0 * 3.141592653589793, "initial angular step size"),
    "gpr.nugget": (float, 1e-10, "initial correlation diagonal jitter"),
    "gpr.n_starts": (int, 8, "likelihood multistart count"),
    "gpr.max_evals": (int, 200, "likelihood evaluations per start"),
    "gpr.n_inducing": (int, 60, "nearest neighbours of a local GPR prediction"),
    "gpr.n_switch": (int, 400, "largest dataset trained with a global GPR"),
    "gpr.refit_policy": (str, "refit_per_query", "refit_per_query | reuse_global_theta"),
    "gpr.local_max_evals": (int, 60, "likelihood evaluations of a local refit"),
    "models": (_names, ("classical", "invariant"), "classical and/or invariant"),
    "sweep.steps": (int, 161, "load steps of the extrapolation sweep"),
    "evaluate.timings": (_bool, True, "record wall-clock seconds in the error report"),
    "parallel.workers": (int, Config.WORKERS, "threads for test-set prediction"),
    "seeds.sample": (int, 1, "training candidate sampler seed"),
    "seeds.hull": (int, 2, "hull cloud seed"),
    "seeds.anneal": (int, 3, "annealing seed"),
    "seeds.test": (int, 4, "test set seed"),
    "seeds.gpr": (int, 5, "likelihood multistart seed"),
    "output.dir": (str, str(Config.OUTPUT_DIR), "directory for every artifact"),
}

PAPER_SCALE = {
    "sample.n_test": 20000,
    "hull.n_cloud": 100000,
    "anneal.NT": 7000,
    "anneal.aniso_NT": 10000,
}

SEED_OFFSETS = {
    "seeds.sample": 0,
    "seeds.hull": 1,
    "seeds.anneal": 2,
    "seeds.test": 3,
    "seeds.gpr": 4,
}

# Keys that do not influence any numerical result.
UNHASHED = ("output.dir", "parallel.workers", "evaluate.timings")


class ExperimentConfig(Mapping):
    """Resolved experiment settings, addressed by dotted key.

    Example:
        cfg = ExperimentConfig.load("experiment.env", paper_scale=True)
        cfg["domain.delta"]
    """

    def __init__(self, values: Dict[str, Any], paper_scale: bool = False):
        self._values = values
        self.paper_scale = paper_scale
        self.validate()

    @classmethod
    def load(
        cls,
        path: Optional[Path] = None,
        overrides: Optional[Mapping[str, str]] = None,
        paper_scale: bool = False,
        seed: Optional[int] = None,
    ) -> "ExperimentConfig":
        """Build a config from defaults, an optional file and string overrides.

        Args:
            path: File of ``dotted.key=value`` lines
            overrides: Extra ``key -> text`` pairs applied last
            paper_scale: Restore the full budgets for keys the file does not set
            seed: Base seed replacing every ``seeds.*`` entry

        Raises:
            ConfigError: On unknown keys, bad values or a missing file
        """
        raw: Dict[str, str] = {}
        if path is not None:
            path = Path(path)
            if not path.exists():
                raise ConfigError(f"Config file not found: {path}")
            raw.update({k: v for k, v in dotenv_values(path).items() if v is not None})
        if overrides:
            raw.update(overrides)

        values = {key: spec[1] for key, spec in KEYS.items()}
        if paper_scale:
            values.update({k: v for k, v in PAPER_SCALE.items() if k not in raw})

        for key, text in raw.items():
            if key not in KEYS:
                raise ConfigError(f"Unknown config key: {key}")
            parser = KEYS[key][0]
            try:
                values[key] = parser(str(text))
            except ValueError as e:
                raise ConfigError(f"Invalid value for {key}: {text!r} ({e})")

        if seed is not None:
            for key, offset in SEED_OFFSETS.items():
                values[key] = seed + offset

        return cls(values, paper_scale=paper_scale)

    def validate(self):
        """Check the invariants of every setting.

        Raises:
            ConfigError: If any setting is out of range
        """
        v = self._values
        checks = [
            (v["law.name"] in ("mooney_rivlin", "bonet"), "unknown law.name"),
            (v["law.preset"] in ("shifted", "literal"), "law.preset must be shifted or literal"),
            (0.0 < v["domain.delta"] < 1.0, "domain.delta must lie in (0, 1)"),
            (v["sample.sampler"] in ("lhs", "space_filling", "both"), "unknown sample.sampler"),
            (v["sample.n_train"] >= 1, "sample.n_train must be >= 1"),
            (v["sample.design"] in ("tplhd", "lhs"), "sample.design must be tplhd or lhs"),
            (v["sample.N"] >= 0, "sample.N must be >= 0"),
            (v["sample.n_test"] >= 1, "sample.n_test must be >= 1"),
            (v["hull.n_cloud"] >= 4, "hull.n_cloud must be >= 4"),
            (v["anneal.NT"] >= 0 and v["anneal.aniso_NT"] >= 0, "anneal sweeps must be >= 0"),
            (v["anneal.T0"] > 0 and v["anneal.aniso_T0"] > 0, "anneal step sizes must be > 0"),
            (0.0 < v["anneal.alpha"] < 1.0, "anneal.alpha must lie in (0, 1)"),
            (v["gpr.nugget"] >= 0, "gpr.nugget must be >= 0"),
            (v["gpr.n_starts"] >= 1 and v["gpr.max_evals"] >= 1, "gpr search budget must be >= 1"),
            (v["gpr.n_inducing"] >= 2, "gpr.n_inducing must be >= 2"),
            (
                v["gpr.refit_policy"] in ("refit_per_query", "reuse_global_theta"),
                "unknown gpr.refit_policy",
            ),
            (len(v["law.a0"]) == 3, "law.a0 needs three components"),
            (set(v["models"]) <= {"classical", "invariant"} and v["models"], "unknown models"),
            (v["sweep.steps"] >= 2, "sweep.steps must be >= 2"),
            (v["parallel.workers"] >= 1, "parallel.workers must be >= 1"),
        ]
        for ok, message in checks:
            if not ok:
                raise ConfigError(message)

    def __getitem__(self, key: str) -> Any:
        return self._values[key]

    def __iter__(self):
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)

    @property
    def output_dir(self) -> Path:
        return Path(self._values["output.dir"])

    def canonical(self) -> str:
        """Sorted ``key=value`` listing of every result-relevant setting."""
        lines = []
        for key in sorted(self._values):
            if key in UNHASHED:
                continue
            value = self._values[key]
            if isinstance(value, tuple):
                value = ",".join(repr(x) if isinstance(x, float) else str(x) for x in value)
            elif isinstance(value, float):
                value = repr(value)
            lines.append(f"{key}={value}")
        return "\n".join(lines)

    @property
    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical().encode("utf-8")).hexdigest()

    def to_dict(self) -> dict:
        """Convert settings to a JSON-friendly dictionary."""
        return {k: list(v) if isinstance(v, tuple) else v for k, v in sorted(self._values.items())}
