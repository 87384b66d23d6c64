"""
Unit tests for selection metrics.
"""
import numpy as np
import pytest

from mirrorfdr.errors import SelectionError
from mirrorfdr.eval.metrics import compute_metrics
from mirrorfdr.sim.scenarios import GroundTruth


def truth_with_active(p: int, active) -> GroundTruth:
    beta = np.zeros(p)
    beta[list(active)] = 1.0
    return GroundTruth(beta=beta, active_mask=(beta != 0).astype(int))


class TestComputeMetrics:
    """Test FDP and TPR."""

    def test_one_false_in_ten(self):
        """Test 10 selections with one null give FDP 0.1."""
        truth = truth_with_active(20, range(9))
        fdp, tpr = compute_metrics(list(range(9)) + [15], truth)
        assert fdp == pytest.approx(0.1)
        assert tpr == 1.0

    def test_empty_selection(self):
        """Test an empty selection has FDP 0 and TPR 0."""
        fdp, tpr = compute_metrics([], truth_with_active(5, [0]))
        assert fdp == 0.0
        assert tpr == 0.0

    def test_partial_recovery(self):
        """Test 35 of 50 true covariates and no false ones."""
        fdp, tpr = compute_metrics(range(35), truth_with_active(1000, range(50)))
        assert fdp == 0.0
        assert tpr == pytest.approx(0.7)

    def test_null_truth(self):
        """Test TPR is 1 when no covariate is active."""
        fdp, tpr = compute_metrics([2], truth_with_active(5, []))
        assert fdp == 1.0
        assert tpr == 1.0

    def test_duplicates_ignored(self):
        """Test repeated indices count once."""
        assert compute_metrics([0, 0, 1], truth_with_active(4, [0])) == (0.5, 1.0)

    def test_out_of_range(self):
        """Test indices beyond p are rejected."""
        with pytest.raises(SelectionError):
            compute_metrics([7], truth_with_active(5, [0]))
