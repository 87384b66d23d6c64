"""
Unit tests for ground truth generation and scenario simulation.
"""
import numpy as np
import pytest

from mirrorfdr.config import ScenarioConfig
from mirrorfdr.errors import SimulationError
from mirrorfdr.sim.scenarios import gen_ground_truth, scenario_covariance, simulate

from .fixtures import create_dataset, create_scenario


class TestGroundTruth:
    """Test coefficient placement."""

    def test_forced_placement(self):
        """Test p=4, p1=2 with a single-value pool."""
        truth = gen_ground_truth(ScenarioConfig(p=4, p1=2, coefficients=[1.0]), seed=0)
        np.testing.assert_array_equal(truth.beta, [1.0, 1.0, 0.0, 0.0])
        np.testing.assert_array_equal(truth.active_mask, [1, 1, 0, 0])

    def test_null_model(self):
        """Test p1=0 gives an all-zero truth."""
        truth = gen_ground_truth(ScenarioConfig(p=5, p1=0), seed=0)
        assert not truth.beta.any()
        assert truth.p1 == 0

    def test_active_count(self):
        """Test the mask sums to p1 at full scale."""
        truth = gen_ground_truth(ScenarioConfig(p=1000, p1=50), seed=11)
        assert truth.active_mask.sum() == 50
        assert set(np.unique(truth.beta[:50])) <= {-2.0, -1.0, 1.0, 2.0}

    def test_pool_validation(self):
        """Test empty pools and pools containing zero are rejected."""
        with pytest.raises(SimulationError):
            gen_ground_truth(ScenarioConfig(p=3, p1=1, coefficients=[]), seed=0)
        with pytest.raises(SimulationError):
            gen_ground_truth(ScenarioConfig(p=3, p1=1, coefficients=[0.0, 1.0]), seed=0)


class TestSimulate:
    """Test the four data generating processes."""

    def test_linear_degenerate_noise(self):
        """Test y equals beta0 when beta=0 and sigma_y is tiny."""
        data = create_dataset("linear", p1=0, sigma_y=1e-12, beta0=3.0)
        assert np.max(np.abs(data.y - 3.0)) < 1e-6

    def test_logistic_balanced(self):
        """Test the success rate is 1/2 when beta=0 and beta0=0."""
        data = create_dataset("logistic", n=50_000, p=2, p1=0)
        assert set(np.unique(data.y)) <= {0.0, 1.0}
        assert 0.49 < data.y.mean() < 0.51

    def test_poisson_counts(self):
        """Test the count scenario with beta in {-1, 1} and beta0 = 5."""
        scenario = ScenarioConfig(family="poisson", n=500, p=1000, p1=50, coefficients=[-1.0, 1.0], beta0=5.0, seed=2)
        data = simulate(scenario, scenario_covariance(scenario))
        assert data.y.shape == (500,)
        assert np.all(data.y >= 0)
        np.testing.assert_array_equal(data.y, np.round(data.y))

    def test_poisson_desk_scale_within_guard(self):
        """Test the desk-scale count scenario simulates for every benchmark seed."""
        for seed in range(42, 52):
            scenario = ScenarioConfig(
                family="poisson", n=500, p=300, p1=20, coefficients=[-1.0, 1.0], beta0=5.0, seed=seed
            )
            data = simulate(scenario, scenario_covariance(scenario))
            assert np.all(data.y >= 0)

    def test_poisson_overflow_reports_row(self):
        """Test a huge linear predictor is reported with its row."""
        with pytest.raises(SimulationError) as exc_info:
            create_dataset("poisson", p1=0, beta0=40.0)
        assert exc_info.value.row == 0

    def test_random_intercept_layout(self):
        """Test subject and measurement indices of repeated measurements."""
        data = create_dataset("random_intercept", n=4, M=3)
        assert data.n_rows == 12
        np.testing.assert_array_equal(data.subject_index, np.repeat(np.arange(4), 3))
        np.testing.assert_array_equal(data.measurement_index, np.tile([1, 2, 3], 4))
        assert data.truth.random_intercepts.shape == (4,)
        assert data.M == 3

    def test_repeated_measurements_need_random_intercept(self):
        """Test M > 1 is rejected for other families."""
        with pytest.raises(ValueError):
            create_scenario("linear", M=2)

    def test_linear_residual_variance(self):
        """Test the residual variance converges to sigma_y^2."""
        data = create_dataset("linear", n=50_000, p=4, p1=2, sigma_y=1.5)
        resid = data.y - data.truth.beta0 - data.X @ data.truth.beta
        assert abs(resid.var() / 1.5 ** 2 - 1.0) < 0.05

    @pytest.mark.parametrize("family", ["linear", "random_intercept", "logistic", "poisson"])
    def test_replay_is_bitwise_identical(self, family):
        """Test the same scenario seed reproduces the dataset exactly."""
        first = create_dataset(family, seed=8)
        second = create_dataset(family, seed=8)
        np.testing.assert_array_equal(first.X, second.X)
        np.testing.assert_array_equal(first.y, second.y)
        assert first.truth.active_mask.sum() == create_scenario(family).p1
