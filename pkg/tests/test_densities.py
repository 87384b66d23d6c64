"""
Unit tests for log joint densities and their gradients.
"""
import numpy as np
import pytest

from mirrorfdr.config import HorseshoePrior, ModelSpec, NormalPrior, ProductPrior
from mirrorfdr.errors import ModelError, NonFiniteError
from mirrorfdr.model.densities import (
    bind_model,
    half_cauchy_logpdf,
    log_joint,
    log_joint_terms,
    log_likelihood,
    normal_logpdf,
)
from mirrorfdr.model.layout import ParameterLayout, to_constrained
from mirrorfdr.model.prep import standardize, standardize_dataset

from .fixtures import create_dataset

FAMILIES = ["linear", "random_intercept", "logistic", "poisson"]


def _random_point(layout, seed=0, scale=0.5):
    return np.random.default_rng(seed).normal(0.0, scale, size=layout.dim)


class TestLogDensities:
    """Test the closed-form building blocks."""

    def test_standard_normal_at_zero(self):
        """Test N(0,1) log-density at 0."""
        assert normal_logpdf(0.0, 0.0, 1.0) == pytest.approx(-0.91894, abs=1e-5)

    def test_half_cauchy_at_zero(self):
        """Test half-Cauchy(1) log-density at the origin."""
        assert half_cauchy_logpdf(0.0, 1.0) == pytest.approx(np.log(2 / np.pi), abs=1e-12)
        assert half_cauchy_logpdf(0.0, 1.0) == pytest.approx(-0.45158, abs=1e-5)

    def test_logistic_at_zero(self):
        """Test four Bernoulli(1/2) observations."""
        y = np.array([0.0, 1.0, 1.0, 0.0])
        assert log_likelihood("logistic", y, np.zeros(4)) == pytest.approx(4 * np.log(0.5))

    def test_unknown_family(self):
        """Test an unknown family is rejected."""
        with pytest.raises(ModelError):
            log_likelihood("gamma", np.zeros(2), np.zeros(2))


class TestLogJoint:
    """Test log_joint and its term breakdown."""

    def test_terms_sum_to_joint(self):
        """Test log_joint equals the sum of its terms."""
        data = create_dataset("linear")
        model = ModelSpec(family="linear")
        target = bind_model(model, data)
        params, _ = to_constrained(_random_point(target.layout), target.layout)
        terms = log_joint_terms(model, params, data)
        assert set(terms) == {"prior_eta", "prior_lambda", "prior_tau", "prior_beta0", "prior_sigma_y", "likelihood"}
        assert log_joint(model, params, data) == pytest.approx(sum(terms.values()))

    def test_packing_order_invariance(self):
        """Test two layout orderings give the same value."""
        data = create_dataset("logistic")
        model = ModelSpec(family="logistic", prior=HorseshoePrior())
        target = bind_model(model, data)
        params, _ = to_constrained(_random_point(target.layout, seed=4), target.layout)
        reordered = ParameterLayout(list(reversed(target.layout.to_list())))
        assert log_joint(model, params, data, reordered) == pytest.approx(log_joint(model, params, data), abs=1e-12)

    def test_horseshoe_shrinkage_direction(self):
        """Test shrinking a local scale towards 0 lowers the joint at a large coefficient."""
        data = create_dataset("linear", p=3, p1=1)
        model = ModelSpec(family="linear", prior=HorseshoePrior())
        rng = np.random.default_rng(2)
        for _ in range(20):
            params = {
                "beta": np.array([5.0, rng.normal(), rng.normal()]),
                "lambda": rng.uniform(0.5, 2.0, size=3),
                "tau": np.array([rng.uniform(0.5, 2.0)]),
                "beta0": np.array([0.0]),
                "sigma_y": np.array([1.0]),
            }
            shrunk = {**params, "lambda": params["lambda"] * np.array([0.1, 1.0, 1.0])}
            assert log_joint(model, shrunk, data) < log_joint(model, params, data)

    def test_product_coefficient_bound(self):
        """Test |eta * lambda| <= |eta| on constrained draws."""
        data = create_dataset("linear")
        target = bind_model(ModelSpec(family="linear"), data)
        u = np.random.default_rng(1).normal(0.0, 2.0, size=(100, target.layout.dim))
        params, _ = to_constrained(u, target.layout)
        assert np.all(np.abs(params["eta"] * params["lambda"]) <= np.abs(params["eta"]))

    def test_non_finite_term_is_named(self):
        """Test a non-finite term is reported by name."""
        data = create_dataset("linear", p=2, p1=1)
        model = ModelSpec(family="linear", prior=NormalPrior())
        params = {"beta": np.array([np.inf, 0.0]), "beta0": np.array([0.0]), "sigma_y": np.array([1.0])}
        with pytest.raises(NonFiniteError) as exc_info:
            log_joint(model, params, data)
        assert exc_info.value.term is not None

    def test_family_mismatch(self):
        """Test binding a model to data of another family."""
        with pytest.raises(ModelError):
            bind_model(ModelSpec(family="poisson"), create_dataset("linear"))


class TestGradients:
    """Test hand-derived gradients against finite differences."""

    @pytest.mark.parametrize("family", FAMILIES)
    @pytest.mark.parametrize("prior", [ProductPrior(), HorseshoePrior(), ProductPrior(a=0.5, b=0.5), NormalPrior()])
    def test_gradient_matches_finite_differences(self, family, prior):
        """Test d log p / du for every family and prior."""
        data = create_dataset(family, n=20 if family != "random_intercept" else 6, p=4, p1=2)
        target = bind_model(ModelSpec(family=family, prior=prior), data)
        u = _random_point(target.layout, seed=7)
        _, grad = target.log_prob_and_grad(u)
        h = 1e-6
        for k in range(u.size):
            step = np.zeros_like(u)
            step[k] = h
            fd = (target.log_prob(u + step)[0] - target.log_prob(u - step)[0]) / (2 * h)
            assert grad[0, k] == pytest.approx(fd, rel=1e-5, abs=1e-5)

    def test_batched_evaluation(self):
        """Test a batch matches row-by-row evaluation."""
        data = create_dataset("random_intercept", n=5, M=2)
        target = bind_model(ModelSpec(family="random_intercept"), data)
        u = np.random.default_rng(3).normal(0.0, 0.5, size=(4, target.layout.dim))
        values, grads = target.log_prob_and_grad(u)
        for s in range(4):
            value, grad = target.log_prob_and_grad(u[s])
            assert values[s] == pytest.approx(value[0])
            np.testing.assert_allclose(grads[s], grad[0])


class TestStandardize:
    """Test covariate standardisation."""

    def test_unit_columns(self):
        """Test centred unit-variance columns and returned moments."""
        X = np.random.default_rng(0).normal(3.0, 2.0, size=(200, 4))
        Z, center, scale = standardize(X)
        np.testing.assert_allclose(Z.mean(axis=0), 0.0, atol=1e-12)
        np.testing.assert_allclose(Z.std(axis=0), 1.0)
        np.testing.assert_allclose(Z * scale + center, X)

    def test_constant_column(self):
        """Test a constant column keeps scale 1."""
        X = np.column_stack([np.ones(5), np.arange(5.0)])
        Z, _, scale = standardize(X)
        assert scale[0] == 1.0
        np.testing.assert_array_equal(Z[:, 0], 0.0)

    def test_dataset_copy(self):
        """Test the dataset copy keeps outcomes and truth."""
        data = create_dataset("poisson")
        standardized, _, _ = standardize_dataset(data)
        np.testing.assert_array_equal(standardized.y, data.y)
        assert standardized.truth is data.truth
        assert not np.shares_memory(standardized.X, data.X)
