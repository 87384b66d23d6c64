"""
Tests for replicate orchestration.
"""
import numpy as np
import pytest

from mirrorfdr.config import AdviConfig
from mirrorfdr.errors import BaselineError
from mirrorfdr.eval.runner import MethodContext, ReplicateReport, run_benchmark, run_method, run_replicate, run_replicates

from .fixtures import create_benchmark_config, create_dataset, create_scenario, tiny_benchmark_config  # noqa: F401


def without_timing(reports):
    return [{**r.to_dict(), "runtime_s": 0.0} for r in reports]


class TestRunMethod:
    """Test method dispatch."""

    def test_bh(self):
        """Test BH returns an indicator of the selection."""
        data = create_dataset("linear", n=100, p=8, p1=3, coefficients=[3.0])
        result = run_method("bh", data, MethodContext(seed=0, alpha=0.1))
        assert result.method == "bh"
        assert set(range(3)) <= set(result.selected.tolist())
        np.testing.assert_array_equal(np.flatnonzero(result.inclusion_probs), result.selected)

    def test_bayesms(self):
        """Test the full Bayesian pipeline on a tiny dataset."""
        data = create_dataset("linear", n=80, p=6, p1=2, coefficients=[3.0])
        context = MethodContext(seed=1, advi=AdviConfig(iterations=300, n_mc=2), draws=200)
        result = run_method("bayesms", data, context)
        assert result.method == "bayesms"
        assert result.inclusion_probs.shape == (6,)

    def test_unknown(self):
        """Test an unknown method name."""
        with pytest.raises(BaselineError):
            run_method("lars", create_dataset("linear"), MethodContext(seed=0))


class TestRunReplicates:
    """Test benchmark execution."""

    def test_smoke(self):
        """Test one replicate gives one finite report."""
        reports = run_replicates(
            create_scenario("linear", n=80, p=10, p1=3),
            ["bayesms"],
            R=1,
            base_seed=3,
            alpha=0.1,
            advi=AdviConfig(iterations=200, n_mc=2),
            draws=100,
        )
        assert len(reports) == 1
        report = reports[0]
        assert isinstance(report, ReplicateReport)
        assert not report.failed
        assert np.isfinite(report.fdp) and np.isfinite(report.tpr)
        assert report.seed == 3

    def test_deterministic(self, tiny_benchmark_config):
        """Test the same base seed gives identical reports apart from timing."""
        a = run_benchmark(tiny_benchmark_config)
        b = run_benchmark(tiny_benchmark_config)
        assert without_timing(a) == without_timing(b)

    def test_one_report_per_method_and_replicate(self):
        """Test R x |methods| reports in (replicate, method) order."""
        config = create_benchmark_config(["bh", "ds"], replicates=3)
        reports = run_benchmark(config)
        assert [(r.replicate, r.method) for r in reports] == [
            (0, "bh"), (0, "ds"), (1, "bh"), (1, "ds"), (2, "bh"), (2, "ds"),
        ]
        assert [r.seed for r in reports[::2]] == [5, 6, 7]

    def test_failure_is_quarantined(self):
        """Test a failing method is recorded without stopping the others."""
        config = create_benchmark_config(
            ["bh", "ds"], scenario=create_scenario("linear", n=30, p=10, p1=3).model_dump()
        )
        reports = run_replicate(config, 0)
        by_method = {r.method: r for r in reports}
        assert by_method["ds"].failed
        assert "BaselineError" in by_method["ds"].error
        assert np.isnan(by_method["ds"].fdp)
        assert not by_method["bh"].failed

    def test_knockoff_uses_scenario_covariance(self):
        """Test the knockoff baseline runs with the true covariance."""
        config = create_benchmark_config(["knockoff"], replicates=1)
        reports = run_benchmark(config)
        assert len(reports) == 1
        assert not reports[0].failed

    @pytest.mark.slow
    def test_parallel_matches_serial(self):
        """Test worker processes reproduce the serial reports."""
        config = create_benchmark_config(["bh", "ds"], replicates=4)
        assert without_timing(run_benchmark(config, workers=2)) == without_timing(run_benchmark(config, workers=1))
