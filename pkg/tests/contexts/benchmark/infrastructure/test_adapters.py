import json

import pytest
from dependency_injector import providers

from src.shared.infrastructure.container import Container
from src.shared.infrastructure.settings import RogueSettings
from src.contexts.benchmark.application.dtos import AlgorithmSummaryDto, BenchmarkSummaryDto
from src.contexts.benchmark.infrastructure.adapters import (
    EXIT_FAILURE, EXIT_INVALID, EXIT_OK, GROWTH_NOTE, build_parser, format_summary, main
)
from src.contexts.benchmark.infrastructure.repositories import STEPS_FILE


@pytest.fixture
def container():
    container = Container()
    container.settings.override(providers.Object(RogueSettings(metrics_file=False, log_level="WARNING")))
    yield container
    container.settings.reset_override()


@pytest.fixture
def config_file(experiment_data, tmp_path):
    path = tmp_path / "experiment.json"
    path.write_text(json.dumps(experiment_data), encoding="utf-8")
    return path


class TestParser:
    """Test cases for the argument parser."""

    def test_run_arguments(self):
        """Test run parses its config, output and override flags."""
        args = build_parser().parse_args(
            ["run", "--config", "c.json", "--out", "o", "--seed", "3", "--algorithms", "random,d_ucb"]
        )
        assert (args.command, args.seed, args.algorithms) == ("run", 3, "random,d_ucb")

    def test_summarize_arguments(self):
        """Test summarize parses the results directory."""
        args = build_parser().parse_args(["summarize", "--dir", "results"])
        assert str(args.results_dir) == "results"

    def test_pool_arguments(self):
        """Test --dir repeats into a list of pooled sources."""
        args = build_parser().parse_args(["pool", "--dir", "p1", "--dir", "p2", "--out", "pooled"])
        assert [str(path) for path in args.results_dirs] == ["p1", "p2"]
        assert str(args.out) == "pooled"


class TestFormatSummary:
    """Test cases for the printed summary table."""

    @staticmethod
    def summary(ratio):
        item = AlgorithmSummaryDto(
            algorithm="tuned_rogue_ucb", replicates=2, horizon=10,
            final_regret_mean=-1.5, final_regret_stderr=0.2,
            final_average_reward_mean=0.6, final_average_reward_stderr=0.01,
            regret_growth_ratio=ratio,
        )
        return BenchmarkSummaryDto(results_dir="out", algorithms=[item])

    def test_missing_ratio_is_explained(self):
        """Test an undefined growth ratio prints n/a with a footnote."""
        text = format_summary(self.summary(None))
        assert "n/a" in text
        assert text.splitlines()[-1] == GROWTH_NOTE

    def test_ratio_printed(self):
        """Test a defined growth ratio prints without the footnote."""
        text = format_summary(self.summary(1.25))
        assert "1.250" in text
        assert GROWTH_NOTE not in text


class TestMain:
    """Test cases for command-line exit codes."""

    def test_run_then_summarize(self, container, config_file, tmp_path, capsys):
        """Test a run writes results that summarize can read back."""
        out_dir = tmp_path / "results"
        assert main(["run", "--config", str(config_file), "--out", str(out_dir)], container) == EXIT_OK
        assert (out_dir / STEPS_FILE).is_file()
        assert "ucb1_tuned" in capsys.readouterr().out

        assert main(["summarize", "--dir", str(out_dir)], container) == EXIT_OK
        assert "random" in capsys.readouterr().out

    def test_overrides(self, container, config_file, tmp_path):
        """Test replicate and algorithm overrides shrink the steps file."""
        out_dir = tmp_path / "results"
        argv = ["run", "--config", str(config_file), "--out", str(out_dir), "--replicates", "1", "--algorithms", "random"]
        assert main(argv, container) == EXIT_OK
        rows = (out_dir / STEPS_FILE).read_text(encoding="utf-8").strip().splitlines()
        assert len(rows) == 1 + 12

    def test_missing_config(self, container, tmp_path):
        """Test a missing config file exits with the failure code."""
        assert main(["run", "--config", str(tmp_path / "absent.json"), "--out", str(tmp_path)], container) == EXIT_FAILURE

    def test_invalid_config(self, container, experiment_data, tmp_path):
        """Test an invalid config exits with the invalid-input code."""
        experiment_data["arms"][0]["truth"]["x0"] = 1.5
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(experiment_data), encoding="utf-8")
        assert main(["run", "--config", str(path), "--out", str(tmp_path / "out")], container) == EXIT_INVALID

    def test_no_output_directory(self, container, config_file):
        """Test run without --out exits with the invalid-input code."""
        assert main(["run", "--config", str(config_file)], container) == EXIT_INVALID

    def test_summarize_empty_directory(self, container, tmp_path):
        """Test summarizing a directory without results exits with the failure code."""
        assert main(["summarize", "--dir", str(tmp_path)], container) == EXIT_FAILURE

    def test_pool_two_runs(self, container, config_file, tmp_path, capsys):
        """Test pooling two result directories writes a pooled steps file."""
        for name in ("p1", "p2"):
            assert main(["run", "--config", str(config_file), "--out", str(tmp_path / name)], container) == EXIT_OK
        capsys.readouterr()

        argv = ["pool", "--dir", str(tmp_path / "p1"), "--dir", str(tmp_path / "p2"), "--out", str(tmp_path / "pooled")]
        assert main(argv, container) == EXIT_OK
        rows = (tmp_path / "pooled" / STEPS_FILE).read_text(encoding="utf-8").strip().splitlines()
        assert len(rows) == 1 + 2 * 2 * 2 * 12
        assert "random" in capsys.readouterr().out

    def test_pool_missing_source(self, container, tmp_path):
        """Test a missing source directory is an I/O failure."""
        argv = ["pool", "--dir", str(tmp_path / "absent"), "--out", str(tmp_path / "pooled")]
        assert main(argv, container) == EXIT_FAILURE
