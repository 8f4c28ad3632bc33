"""Tests for experiment configuration."""

import pytest

from src import config
from src.config import PAPER_SCALE, ExperimentConfig
from src.exceptions import ConfigError


class TestProcessConfig:
    """Test cases for environment-driven settings."""

    def test_test_config(self):
        """Test that the test configuration overrides logging and workers."""
        assert config.TestConfig.TESTING is True
        assert config.TestConfig.LOG_LEVEL == "DEBUG"
        assert config.TestConfig.WORKERS == 1
        assert config.Config.CSV_FORMAT == "%.17g"


class TestExperimentConfig:
    """Test cases for dotted-key experiment settings."""

    def test_defaults(self):
        """Test the desk-scale defaults."""
        cfg = ExperimentConfig.load()

        assert cfg["domain.delta"] == 0.175
        assert cfg["sample.n_test"] == 2000
        assert cfg["gpr.n_inducing"] == 60
        assert cfg["law.name"] == "mooney_rivlin"

    def test_paper_scale(self):
        """Test that --paper-scale restores the full budgets."""
        cfg = ExperimentConfig.load(paper_scale=True)

        for key, value in PAPER_SCALE.items():
            assert cfg[key] == value

    def test_file_and_overrides(self, tmp_path):
        """Test that overrides win over the file and the file over defaults."""
        path = tmp_path / "experiment.env"
        path.write_text("# desk run\ndomain.delta=0.2\nsample.n_test=50\nlaw.a0=0,0,1\n")
        cfg = ExperimentConfig.load(path, overrides={"sample.n_test": "10"})

        assert cfg["domain.delta"] == 0.2
        assert cfg["sample.n_test"] == 10
        assert cfg["law.a0"] == (0.0, 0.0, 1.0)

    def test_paper_scale_keeps_explicit_values(self):
        """Test that explicit settings survive --paper-scale."""
        cfg = ExperimentConfig.load(overrides={"anneal.NT": "5"}, paper_scale=True)

        assert cfg["anneal.NT"] == 5

    def test_seed_override(self):
        """Test that a base seed replaces every seeds.* entry."""
        cfg = ExperimentConfig.load(seed=100)

        assert [cfg[f"seeds.{k}"] for k in ("sample", "hull", "anneal", "test", "gpr")] == [
            100,
            101,
            102,
            103,
            104,
        ]

    def test_unknown_key(self):
        """Test that unknown keys are errors."""
        with pytest.raises(ConfigError):
            ExperimentConfig.load(overrides={"domain.width": "1"})

    def test_bad_value(self):
        """Test that unparsable values are errors."""
        with pytest.raises(ConfigError):
            ExperimentConfig.load(overrides={"sample.n_test": "many"})

    @pytest.mark.parametrize(
        "key,value",
        [
            ("domain.delta", "1.5"),
            ("sample.n_test", "0"),
            ("sample.design", "sobol"),
            ("law.name", "neo_hooke"),
            ("gpr.refit_policy", "sometimes"),
            ("models", "classical,deep"),
        ],
    )
    def test_invalid_settings(self, key, value):
        """Test the range checks."""
        with pytest.raises(ConfigError):
            ExperimentConfig.load(overrides={key: value})

    def test_missing_file(self, tmp_path):
        """Test that a missing config file is an error."""
        with pytest.raises(ConfigError):
            ExperimentConfig.load(tmp_path / "missing.env")

    def test_hash_ignores_output_dir(self):
        """Test that the config hash depends on results-relevant keys only."""
        a = ExperimentConfig.load(overrides={"output.dir": "a", "parallel.workers": "4"})
        b = ExperimentConfig.load(overrides={"output.dir": "b"})
        c = ExperimentConfig.load(overrides={"domain.delta": "0.2"})

        assert a.config_hash == b.config_hash
        assert a.config_hash != c.config_hash

    def test_canonical_listing(self):
        """Test that the canonical form lists key=value lines in key order."""
        lines = ExperimentConfig.load().canonical().splitlines()
        keys = [line.split("=", 1)[0] for line in lines]

        assert keys == sorted(keys)
        assert keys.index("law.c") < keys.index("law.c1") < keys.index("law.c2")
        assert "domain.delta=0.175" in lines
        assert not any(line.startswith("output.dir=") for line in lines)
