"""
Tests for the mirrorfdr command line.
"""
import json
import os
from unittest.mock import patch

import pandas as pd
import pytest

from mirrorfdr.cli import build_parser, main
from mirrorfdr.config import MirrorFdrSettings


@pytest.fixture
def clean_settings():
    """Settings without environment overrides."""
    with patch.dict(os.environ, {}, clear=True):
        with patch("mirrorfdr.config._settings", MirrorFdrSettings(_env_file=None)):
            yield


@pytest.fixture
def simulated(tmp_path, clean_settings):
    """A small simulated linear dataset on disk."""
    out = tmp_path / "data"
    assert main(["simulate", "--n", "60", "--p", "8", "--p1", "3", "--seed", "2", "--out", str(out)])
    return out


class TestParser:
    """Test argument parsing."""

    def test_requires_command(self):
        """Test a subcommand is mandatory."""
        with pytest.raises(SystemExit):
            build_parser().parse_args([])

    def test_baseline_choices(self):
        """Test unknown baselines are rejected by argparse."""
        with pytest.raises(SystemExit):
            build_parser().parse_args(["baseline", "--method", "lars", "--data", "x"])


class TestCommands:
    """Test the subcommands end to end."""

    def test_simulate(self, simulated):
        """Test simulate writes the dataset files."""
        for name in ("data.csv", "truth.csv", "meta.json", "sigma.csv"):
            assert (simulated / name).exists()
        assert len(pd.read_csv(simulated / "data.csv")) == 60

    def test_simulate_invalid_override(self, tmp_path, clean_settings):
        """Test an invalid override fails cleanly."""
        assert not main(["simulate", "--p", "2", "--p1", "5", "--out", str(tmp_path / "x")])

    def test_fit_and_select(self, simulated, tmp_path):
        """Test fit then select produce a posterior and a selection file."""
        advi = tmp_path / "advi.json"
        advi.write_text(json.dumps({"iterations": 60, "n_mc": 1}))
        posterior = tmp_path / "q.json"
        assert main(["fit", "--data", str(simulated), "--advi", str(advi), "--out", str(posterior)])
        assert posterior.exists()

        selection = tmp_path / "selection.json"
        assert main([
            "select", "--posterior", str(posterior), "--draws", "100", "--alpha", "0.1", "--out", str(selection)
        ])
        payload = json.loads(selection.read_text())
        assert payload["method"] == "bayesms"
        assert all(1 <= j <= 8 for j in payload["selected"])
        assert len(payload["inclusion_probs"]) == 8

    def test_baseline_bh(self, simulated, tmp_path):
        """Test the BH baseline on a simulated dataset."""
        out = tmp_path / "bh.json"
        assert main(["baseline", "--method", "bh", "--data", str(simulated), "--out", str(out)])
        assert json.loads(out.read_text())["method"] == "bh"

    def test_baseline_knockoff(self, simulated):
        """Test knockoffs read the stored covariance."""
        assert main([
            "baseline", "--method", "knockoff", "--data", str(simulated),
            "--sigma", str(simulated / "sigma.csv"), "--alpha", "0.2",
        ])

    def test_knockoff_needs_covariance(self, simulated):
        """Test knockoffs without --sigma fail with an error."""
        assert not main(["baseline", "--method", "knockoff", "--data", str(simulated)])

    def test_missing_data(self, tmp_path, clean_settings):
        """Test a missing dataset directory fails cleanly."""
        assert not main(["baseline", "--method", "bh", "--data", str(tmp_path / "absent")])

    def test_benchmark(self, tmp_path, clean_settings):
        """Test a small benchmark writes its result files."""
        config = tmp_path / "bench.json"
        config.write_text(json.dumps({
            "name": "cli_linear",
            "scenario": {"family": "linear", "n": 80, "p": 10, "p1": 3},
            "advi": {"iterations": 100, "n_mc": 1},
            "replicates": 2,
            "methods": ["bayesms", "bh"],
            "draws": 100,
        }))
        out = tmp_path / "results"
        assert main(["benchmark", "--config", str(config), "--out", str(out), "--workers", "1"])
        summary = pd.read_csv(out / "summary.csv")
        assert set(summary["method"]) == {"bayesms", "bh"}
        assert (summary["replicates"] == 2).all()
        assert (out / "plotdata_tpr.csv").exists()

    def test_benchmark_overrides(self, tmp_path, clean_settings):
        """Test --methods and --replicates override the config."""
        config = tmp_path / "bench.json"
        config.write_text(json.dumps({"scenario": {"n": 80, "p": 10, "p1": 3}, "replicates": 5}))
        out = tmp_path / "results"
        assert main([
            "benchmark", "--config", str(config), "--methods", "bh", "--replicates", "1", "--out", str(out)
        ])
        assert len(pd.read_csv(out / "reports.csv")) == 1

    def test_config_command(self, tmp_path, clean_settings):
        """Test the config command validates a benchmark file."""
        config = tmp_path / "bench.json"
        config.write_text(json.dumps({"replicates": 1}))
        assert main(["config", "--config", str(config)])
        config.write_text(json.dumps({"replicates": 0}))
        assert not main(["config", "--config", str(config)])
