"""
Unit tests for dataset and covariance CSV files.
"""
import numpy as np
import pandas as pd
import pytest

from mirrorfdr.errors import SimulationError
from mirrorfdr.sim.io import read_covariance, read_dataset, write_dataset
from mirrorfdr.sim.scenarios import scenario_covariance

from .fixtures import create_dataset, create_scenario


class TestDatasetFiles:
    """Test dataset serialisation."""

    def test_linear_layout(self, tmp_path):
        """Test the data.csv header and empty subject columns."""
        data = create_dataset("linear", p=3, p1=1)
        write_dataset(data, tmp_path)
        frame = pd.read_csv(tmp_path / "data.csv")
        assert list(frame.columns) == ["y", "subject", "measurement", "x1", "x2", "x3"]
        assert frame["subject"].isna().all()
        truth = pd.read_csv(tmp_path / "truth.csv")
        assert list(truth.columns) == ["j", "beta", "active"]

    def test_read_back_linear(self, tmp_path):
        """Test reading restores outcome, covariates, truth and family."""
        data = create_dataset("linear")
        write_dataset(data, tmp_path)
        loaded = read_dataset(tmp_path)
        np.testing.assert_allclose(loaded.X, data.X)
        np.testing.assert_allclose(loaded.y, data.y)
        np.testing.assert_array_equal(loaded.truth.active_mask, data.truth.active_mask)
        assert loaded.subject_index is None
        assert loaded.family == "linear"

    def test_read_back_random_intercept(self, tmp_path):
        """Test subject indices are 1-based on disk and 0-based in memory."""
        data = create_dataset("random_intercept", n=5, M=2)
        write_dataset(data, tmp_path)
        assert pd.read_csv(tmp_path / "data.csv")["subject"].min() == 1
        loaded = read_dataset(tmp_path)
        np.testing.assert_array_equal(loaded.subject_index, data.subject_index)
        np.testing.assert_array_equal(loaded.measurement_index, data.measurement_index)

    def test_covariance_sidecar(self, tmp_path):
        """Test sigma.csv is written when a covariance is supplied."""
        scenario = create_scenario("linear")
        sigma = scenario_covariance(scenario)
        write_dataset(create_dataset("linear"), tmp_path, sigma)
        np.testing.assert_allclose(read_covariance(tmp_path / "sigma.csv"), sigma)

    def test_missing_directory(self, tmp_path):
        """Test reading a directory without data.csv."""
        with pytest.raises(SimulationError):
            read_dataset(tmp_path / "absent")
