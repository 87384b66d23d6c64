"""
Test fixtures: small scenarios, datasets and ADVI targets.
"""
from typing import Optional, Sequence

import numpy as np
import pytest

from mirrorfdr.config import AdviConfig, BenchmarkConfig, ModelSpec, NormalPrior, ScenarioConfig
from mirrorfdr.model.densities import JointDensity, normal_logpdf
from mirrorfdr.model.layout import ParameterLayout
from mirrorfdr.sim.scenarios import Dataset, scenario_covariance, simulate


def create_scenario(family: str = "linear", **overrides) -> ScenarioConfig:
    """Create a small scenario for testing."""
    values = {
        "family": family,
        "n": 60,
        "p": 8,
        "p1": 3,
        "rho": 0.5,
        "coefficients": [-2.0, -1.0, 1.0, 2.0],
        "seed": 1,
    }
    if family == "random_intercept":
        values.update({"n": 12, "M": 3})
    if family == "poisson":
        values["coefficients"] = [-0.5, 0.5]
    values.update(overrides)
    return ScenarioConfig(**values)


def create_dataset(family: str = "linear", **overrides) -> Dataset:
    """Simulate a small dataset of the given family."""
    scenario = create_scenario(family, **overrides)
    return simulate(scenario, scenario_covariance(scenario))


def create_benchmark_config(methods: Sequence[str] = ("bayesms",), **overrides) -> BenchmarkConfig:
    """A benchmark small enough to run in a unit test."""
    values = {
        "name": "tiny_linear",
        "scenario": create_scenario("linear", n=80, p=10, p1=3).model_dump(),
        "advi": {"iterations": 300, "n_mc": 2},
        "alpha": 0.1,
        "replicates": 2,
        "base_seed": 5,
        "methods": list(methods),
        "draws": 200,
    }
    values.update(overrides)
    return BenchmarkConfig.model_validate(values)


def conjugate_model(sigma_y: float = 1.0, scale: float = 10.0) -> ModelSpec:
    """Normal-prior linear model with known residual sd."""
    return ModelSpec(family="linear", prior=NormalPrior(scale=scale), sigma_y_fixed=sigma_y)


class StandardNormalTarget(JointDensity):
    """Prior-only target: independent N(0, 1) coordinates with no data."""

    def __init__(self, dim: int = 1):
        self.layout = ParameterLayout([("x", dim, "free")])

    def log_prob_and_grad(self, u):
        u = np.atleast_2d(u)
        return normal_logpdf(u, 0.0, 1.0).sum(axis=-1), -u


def point_mass_draws(values: Sequence[float], count: int = 100, jitter: Optional[float] = None, seed: int = 0):
    """count x p draws equal to `values` (optionally with Gaussian jitter)."""
    draws = np.tile(np.asarray(values, dtype=float), (count, 1))
    if jitter:
        draws = draws + np.random.default_rng(seed).normal(0.0, jitter, size=draws.shape)
    return draws


@pytest.fixture
def linear_dataset():
    """Small linear dataset fixture."""
    return create_dataset("linear")


@pytest.fixture
def tiny_benchmark_config():
    """Two-replicate linear benchmark fixture."""
    return create_benchmark_config()


@pytest.fixture
def quick_advi():
    """Short ADVI budget for smoke tests."""
    return AdviConfig(iterations=200, n_mc=2, seed=3)
