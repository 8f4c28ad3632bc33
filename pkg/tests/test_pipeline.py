"""Tests for the pipeline stages and the command-line interface."""

import numpy as np
import pytest

from src.cli import PIPELINE, build_parser, main
from src.config import ExperimentConfig
from src.exceptions import ConfigError, HashMismatch
from src.mechanics.tensors import VOIGT_LABELS
from src.models.base import load_json, read_csv, read_meta
from src.models.records import Dataset, ErrorReport, load_sample_set
from src.scripts.build_hull import load_hull, run_hull
from src.scripts.common import DATASETS, output_paths
from src.scripts.evaluate_models import run_evaluate
from src.scripts.generate_data import run_gen_data
from src.scripts.run_sweep import LOAD_PATHS, run_sweep
from src.scripts.sample_invariants import run_sample
from src.scripts.train_models import load_model, run_train
from tests.conftest import DESK_OVERRIDES


def cli_settings(out, **extra) -> list:
    """--out and --set arguments for a desk-scale command-line run."""
    settings = dict(DESK_OVERRIDES, **extra)
    args = ["--out", str(out)]
    for key, value in settings.items():
        args += ["--set", f"{key}={value}"]
    return args


def run_all(cfg: ExperimentConfig):
    for stage in (run_hull, run_sample, run_gen_data, run_train, run_evaluate, run_sweep):
        stage(cfg)


class TestStages:
    """Test cases for the individual stages on the Mooney-Rivlin law."""

    def test_full_pipeline(self, desk_config):
        """Test that every stage writes its artifacts under one config hash."""
        run_all(desk_config)
        paths = output_paths(desk_config)

        assert load_json(paths.hull)["config_hash"] == desk_config.config_hash
        for name in DATASETS:
            assert read_meta(paths.dataset(name))["config_hash"] == desk_config.config_hash
            assert load_model(desk_config, name).provenance["dataset"] == name
        assert not paths.samples("transiso").exists()

        report = ErrorReport.load(paths.errors)
        assert set(report.by_model()) == set(DATASETS)
        assert all(np.isfinite(row.e_s) and row.seconds == 0.0 for row in report.rows)

    def test_space_filling_matches_lhs_budget(self, desk_config):
        """Test that N defaults to the deduplicated training design size."""
        run_hull(desk_config)
        samples = run_sample(desk_config)
        datasets = run_gen_data(desk_config)

        assert len(samples["iso"]) == len(datasets["invariant"])
        assert len(datasets["invariant_sf"]) == len(datasets["invariant"])
        assert len(datasets["classical"]) == desk_config["sample.n_train"] + 1

    def test_identity_leads_training_data(self, tmp_path):
        """Test that both F-space datasets start with the undeformed state."""
        cfg = ExperimentConfig.load(
            overrides=dict(DESK_OVERRIDES, **{"sample.sampler": "lhs", "output.dir": str(tmp_path)})
        )
        datasets = run_gen_data(cfg)

        np.testing.assert_allclose(datasets["classical"].inputs[0], [1.0, 0.0, 0.0, 1.0, 0.0, 1.0])
        np.testing.assert_allclose(datasets["invariant"].inputs[0], [3.0, 3.0, 1.0])
        assert datasets["classical"].meta["design"] == "tplhd"

    def test_single_candidate_is_identity(self, tmp_path):
        """Test that n_train = 1 leaves only the undeformed state."""
        cfg = ExperimentConfig.load(
            overrides=dict(
                DESK_OVERRIDES,
                **{"sample.n_train": "1", "models": "classical", "output.dir": str(tmp_path)},
            )
        )
        dataset = run_gen_data(cfg)["classical"]

        assert len(dataset) == 1
        np.testing.assert_allclose(dataset.inputs[0], [1.0, 0.0, 0.0, 1.0, 0.0, 1.0])

    def test_invariant_dataset_records_extraction(self, desk_config):
        """Test the residual and rank columns of the coefficient tables."""
        run_hull(desk_config)
        run_sample(desk_config)
        run_gen_data(desk_config)
        dataset = Dataset.load(output_paths(desk_config).dataset("invariant"))

        assert dataset.input_columns == ("I1", "I2", "I3")
        assert dataset.output_columns == ("c1", "c2", "c3")
        assert np.all(dataset.column("rank") <= 3)
        assert dataset.column("residual").max() < 1e-8

    def test_pinned_identity_in_design(self, desk_config):
        """Test that the stored design contains the undeformed state."""
        run_hull(desk_config)
        run_sample(desk_config)
        samples = load_sample_set(output_paths(desk_config).samples("iso"))

        np.testing.assert_allclose(samples.invariants[samples.pinned], [3.0, 3.0, 1.0])

    def test_sweep_layout(self, desk_config):
        """Test the sweep columns, range and training boundary."""
        run_all(desk_config)
        path = output_paths(desk_config).sweep
        columns, rows = read_csv(path)
        meta = read_meta(path)

        assert columns[0] == "F11"
        assert columns[1:7] == tuple(f"S_true_{label}" for label in VOIGT_LABELS)
        assert rows.shape == (21, len(columns))
        np.testing.assert_allclose(rows[[0, -1], 0], [-0.8, 0.8])
        assert meta["training_boundary"] == [-0.175, 0.175]
        assert meta["models"] == list(DATASETS)

    def test_models_subset(self, tmp_path):
        """Test that only the requested mapping is trained."""
        cfg = ExperimentConfig.load(
            overrides=dict(
                DESK_OVERRIDES,
                **{"models": "classical", "output.dir": str(tmp_path)},
            )
        )
        run_gen_data(cfg)

        assert set(run_train(cfg)) == {"classical"}

    def test_missing_upstream(self, desk_config):
        """Test that later stages refuse to run without their inputs."""
        with pytest.raises(ConfigError):
            run_train(desk_config)
        with pytest.raises(ConfigError):
            run_evaluate(desk_config)
        with pytest.raises(ConfigError):
            run_gen_data(desk_config)

    def test_hash_mismatch(self, desk_config):
        """Test that artifacts of another configuration are refused."""
        run_hull(desk_config)
        run_sample(desk_config)
        other = ExperimentConfig.load(
            overrides=dict(
                DESK_OVERRIDES,
                **{"domain.delta": "0.2", "output.dir": str(desk_config.output_dir)},
            )
        )

        with pytest.raises(HashMismatch):
            load_hull(other)
        with pytest.raises(HashMismatch):
            run_gen_data(other)


class TestTransverselyIsotropicStages:
    """Test cases for the stages on the Bonet law."""

    def test_full_pipeline(self, bonet_config):
        """Test rotated designs, five-invariant datasets and the F12 sweep."""
        run_all(bonet_config)
        paths = output_paths(bonet_config)

        samples = load_sample_set(paths.samples("transiso"))
        assert samples.angles.shape == (len(samples), 3)
        assert Dataset.load(paths.dataset("invariant_sf")).output_columns == tuple(
            f"c{k}" for k in range(1, 7)
        )
        assert load_model(bonet_config, "invariant").kind.value == "transiso5to6"
        columns, rows = read_csv(paths.sweep)
        assert columns[0] == LOAD_PATHS["bonet"].label == "F12"
        np.testing.assert_allclose(rows[[0, -1], 0], [-1.0, 1.0])


class TestDeterminism:
    """Test cases for reproducible runs."""

    def test_identical_outputs(self, tmp_path):
        """Test byte-identical tables from two runs with the same seeds."""
        outputs = []
        for name in ("a", "b"):
            assert main(["all"] + cli_settings(tmp_path / name)) == 0
            outputs.append(tmp_path / name)

        for table in ("invariant_sf.csv", "classical.csv", "errors.csv", "sweep.csv"):
            assert (outputs[0] / table).read_bytes() == (outputs[1] / table).read_bytes()

    def test_seed_changes_results(self, tmp_path):
        """Test that a different base seed gives a different training design."""
        for name, seed in (("a", "1"), ("b", "50")):
            settings = cli_settings(tmp_path / name, models="classical", **{"sample.design": "lhs"})
            args = ["gen-data", "--seed", seed] + settings
            assert main(args) == 0

        assert (tmp_path / "a" / "classical.csv").read_bytes() != (
            tmp_path / "b" / "classical.csv"
        ).read_bytes()


class TestCli:
    """Test cases for argument handling and exit codes."""

    def test_subcommands(self):
        """Test that every stage and 'all' are accepted."""
        parser = build_parser()
        for command in PIPELINE + ("all",):
            assert parser.parse_args([command]).command == command

    def test_flags(self):
        """Test the shared flags of a subcommand."""
        args = build_parser().parse_args(
            ["train", "--seed", "7", "--paper-scale", "--out", "x", "--set", "a.b=1"]
        )

        assert (args.seed, args.paper_scale, args.out, args.set) == (7, True, "x", ["a.b=1"])

    def test_unknown_key_exit_code(self, tmp_path):
        """Test exit code 2 for an unknown setting."""
        assert main(["hull", "--out", str(tmp_path), "--set", "hull.size=3"]) == 2

    def test_malformed_override_exit_code(self, tmp_path):
        """Test exit code 2 for a --set without '='."""
        assert main(["hull", "--out", str(tmp_path), "--set", "hull.n_cloud"]) == 2

    def test_missing_config_file_exit_code(self, tmp_path):
        """Test exit code 2 for a config file that does not exist."""
        assert main(["hull", "--config", str(tmp_path / "none.env")]) == 2

    def test_missing_upstream_exit_code(self, tmp_path):
        """Test exit code 2 when a stage runs before its inputs exist."""
        assert main(["evaluate"] + cli_settings(tmp_path)) == 2

    def test_config_file(self, tmp_path):
        """Test a stage driven by a config file."""
        path = tmp_path / "experiment.env"
        path.write_text(f"hull.n_cloud=500\noutput.dir={tmp_path / 'out'}\n")

        assert main(["hull", "--config", str(path)]) == 0
        assert load_json(tmp_path / "out" / "hull.json")["n_cloud"] == 500

    def test_hash_mismatch_exit_code(self, tmp_path):
        """Test exit code 2 when stored artifacts belong to another config."""
        assert main(["hull"] + cli_settings(tmp_path)) == 0
        assert main(["sample"] + cli_settings(tmp_path, **{"domain.delta": "0.2"})) == 2


@pytest.mark.slow
class TestAcceptance:
    """Accuracy of the surrogates at desk-scale budgets."""

    @staticmethod
    def run_default(out, **overrides):
        """Errors by model and the sweep table of a run with the default training budget."""
        settings = {"output.dir": str(out), "anneal.NT": "500", "evaluate.timings": "false"}
        cfg = ExperimentConfig.load(overrides=dict(settings, **overrides))
        run_all(cfg)
        return ErrorReport.load(output_paths(cfg).errors).by_model(), read_csv(
            output_paths(cfg).sweep
        )

    @pytest.fixture(scope="class")
    def results(self, tmp_path_factory):
        """Mooney-Rivlin run."""
        return self.run_default(tmp_path_factory.mktemp("acceptance"))

    @pytest.fixture(scope="class")
    def bonet_results(self, tmp_path_factory):
        """Bonet run with a shorter rotation anneal."""
        return self.run_default(
            tmp_path_factory.mktemp("acceptance_bonet"),
            **{"law.name": "bonet", "anneal.aniso_NT": "300"},
        )

    def test_invariant_beats_classical(self, results):
        """Test E_S(invariant) <= E_S(classical) / 3 with a tenth of the data."""
        errors, _ = results

        assert errors["invariant"].n_train < errors["classical"].n_train
        assert errors["invariant"].e_s <= errors["classical"].e_s / 3

    def test_space_filling_beats_projection(self, results):
        """Test E_S(invariant_sf) <= E_S(invariant) at the same data budget."""
        errors, _ = results

        assert errors["invariant_sf"].n_train == errors["invariant"].n_train
        assert errors["invariant_sf"].e_s <= errors["invariant"].e_s

    @pytest.mark.parametrize("fixture", ["results", "bonet_results"])
    def test_sweep_inside_domain(self, fixture, request):
        """Test a 5% relative band inside the training box."""
        _, (columns, rows) = request.getfixturevalue(fixture)
        inside = np.abs(rows[:, 0]) <= 0.175
        true = rows[inside, 1:7]
        scale = np.abs(true).max()
        for name in DATASETS:
            start = columns.index(f"S_{name}_11")
            predicted = rows[inside, start : start + 6]
            assert np.abs(predicted - true).max() <= 0.05 * scale

    @pytest.mark.parametrize("fixture", ["results", "bonet_results"])
    def test_sweep_outside_domain(self, fixture, request):
        """Test that physics-informed extrapolation beats the classical mapping."""
        _, (columns, rows) = request.getfixturevalue(fixture)
        outside = np.abs(rows[:, 0]) > 0.175
        classical = rows[outside, columns.index("error_classical")].max()

        assert rows[outside, columns.index("error_invariant")].max() < classical
        assert rows[outside, columns.index("error_invariant_sf")].max() < classical

    def test_transiso_sweep_path(self, bonet_results):
        """Test that the Bonet sweep runs over F12 in [-1, 1]."""
        _, (columns, rows) = bonet_results

        assert columns[0] == "F12"
        np.testing.assert_allclose(rows[[0, -1], 0], [-1.0, 1.0])
