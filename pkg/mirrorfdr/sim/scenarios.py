"""
Synthetic datasets for the linear, random-intercept, logistic and Poisson
scenarios, with ground-truth coefficient bookkeeping.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import expit

from ..config import ScenarioConfig
from ..errors import SimulationError
from .covariance import CovarianceSpec, SeedLike, build_block_toeplitz, rng_for, sample_mvn

logger = logging.getLogger(__name__)

# Poisson linear predictors above this are rejected rather than saturated.
MAX_POISSON_ETA = 30.0

_TRUTH_STREAM = 0
_COVARIATE_STREAM = 1
_RANDOM_INTERCEPT_STREAM = 2
_OUTCOME_STREAM = 3


@dataclass
class GroundTruth:
    beta: np.ndarray
    active_mask: np.ndarray
    beta0: float = 0.0
    sigma_y: float = 1.0
    sigma_b0R: Optional[float] = None
    random_intercepts: Optional[np.ndarray] = None

    @property
    def p(self) -> int:
        return int(self.beta.shape[0])

    @property
    def p1(self) -> int:
        return int(self.active_mask.sum())

    @property
    def active(self) -> np.ndarray:
        return np.flatnonzero(self.active_mask)


@dataclass
class Dataset:
    """Outcome y, design X and, for repeated measurements, subject/measurement indices.

    subject_index is 0-based; measurement_index runs over 1..M.
    """
    y: np.ndarray
    X: np.ndarray
    subject_index: Optional[np.ndarray] = None
    measurement_index: Optional[np.ndarray] = None
    truth: Optional[GroundTruth] = None
    family: Optional[str] = None

    def __post_init__(self):
        self.y = np.asarray(self.y, dtype=float)
        self.X = np.asarray(self.X, dtype=float)
        if self.X.ndim != 2 or self.X.shape[0] != self.y.shape[0]:
            raise SimulationError(
                f"design has shape {self.X.shape} but the outcome has {self.y.shape[0]} rows"
            )
        if self.subject_index is not None:
            self.subject_index = np.asarray(self.subject_index, dtype=int)
            counts = np.bincount(self.subject_index)
            if counts.size and (counts.min() != counts.max()):
                raise SimulationError("every subject needs the same number of measurements")

    @property
    def n_rows(self) -> int:
        return int(self.y.shape[0])

    @property
    def p(self) -> int:
        return int(self.X.shape[1])

    @property
    def n_subjects(self) -> int:
        if self.subject_index is None:
            return self.n_rows
        return int(self.subject_index.max()) + 1 if self.n_rows else 0

    @property
    def M(self) -> int:
        if self.subject_index is None or not self.n_rows:
            return 1
        return self.n_rows // self.n_subjects


def scenario_covariance(config: ScenarioConfig) -> np.ndarray:
    """Block-Toeplitz covariance with blocks (p1, p - p1)."""
    return build_block_toeplitz(CovarianceSpec(block_sizes=config.block_sizes, rho=config.rho))


def gen_ground_truth(config: ScenarioConfig, seed: SeedLike) -> GroundTruth:
    """
    Place p1 coefficients drawn uniformly from the pool in the first positions.

    Raises:
        SimulationError: if the pool is empty or contains zero
    """
    pool = np.asarray(config.coefficients, dtype=float)
    if pool.size == 0:
        raise SimulationError("coefficient pool is empty")
    if np.any(pool == 0.0):
        raise SimulationError("coefficient pool must exclude 0")
    rng = rng_for(seed, _TRUTH_STREAM)
    beta = np.zeros(config.p)
    beta[: config.p1] = rng.choice(pool, size=config.p1, replace=True)
    return GroundTruth(
        beta=beta,
        active_mask=(beta != 0.0).astype(int),
        beta0=config.beta0,
        sigma_y=config.sigma_y,
        sigma_b0R=config.sigma_b0R if config.family == "random_intercept" else None,
    )


def simulate(config: ScenarioConfig, sigma: Optional[np.ndarray] = None) -> Dataset:
    """
    Simulate one dataset for the scenario; fully determined by config.seed.

    Args:
        config: scenario settings
        sigma: precomputed covariance (rebuilt from the config when omitted)

    Raises:
        SimulationError: for an invalid pool or a Poisson predictor overflow
    """
    seed = config.seed
    truth = gen_ground_truth(config, seed)
    if sigma is None:
        sigma = scenario_covariance(config)

    n_rows = config.n * config.M
    # covariates are redrawn for every repeated measurement
    X = sample_mvn(n_rows, sigma, [seed, _COVARIATE_STREAM])
    rng = rng_for(seed, _OUTCOME_STREAM)
    eta = config.beta0 + X @ truth.beta

    subject_index = measurement_index = None
    if config.family == "linear":
        y = eta + rng.normal(0.0, config.sigma_y, size=n_rows)
    elif config.family == "random_intercept":
        b = rng_for(seed, _RANDOM_INTERCEPT_STREAM).normal(0.0, config.sigma_b0R, size=config.n)
        truth.random_intercepts = b
        subject_index = np.repeat(np.arange(config.n), config.M)
        measurement_index = np.tile(np.arange(1, config.M + 1), config.n)
        y = eta + b[subject_index] + rng.normal(0.0, config.sigma_y, size=n_rows)
    elif config.family == "logistic":
        y = rng.binomial(1, expit(eta)).astype(float)
    elif config.family == "poisson":
        if n_rows and eta.max() > MAX_POISSON_ETA:
            row = int(np.argmax(eta))
            raise SimulationError(
                f"Poisson linear predictor {eta[row]:.2f} exceeds {MAX_POISSON_ETA} at row {row}",
                row=row,
            )
        y = rng.poisson(np.exp(eta)).astype(float)
    else:
        raise SimulationError(f"unknown family {config.family}")

    logger.debug(
        "simulated %s scenario: rows=%d p=%d p1=%d seed=%d",
        config.family, n_rows, config.p, truth.p1, seed,
    )
    return Dataset(
        y=y,
        X=X,
        subject_index=subject_index,
        measurement_index=measurement_index,
        truth=truth,
        family=config.family,
    )
