"""
Block-Toeplitz covariate covariance and multivariate normal sampling.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Sequence, Union

import numpy as np
from scipy import linalg

from ..errors import CovarianceError

logger = logging.getLogger(__name__)

SeedLike = Union[int, Sequence[int]]


@dataclass(frozen=True)
class CovarianceSpec:
    """Block sizes (p' per block) and the correlation factor rho."""
    block_sizes: List[int] = field(default_factory=list)
    rho: float = 0.0

    def __post_init__(self):
        if not self.block_sizes or any(int(b) < 1 for b in self.block_sizes):
            raise CovarianceError(f"block sizes must be positive integers, got {self.block_sizes}")
        if not 0.0 <= self.rho < 1.0:
            raise CovarianceError(f"rho must lie in [0, 1), got {self.rho}")

    @property
    def p(self) -> int:
        return int(sum(self.block_sizes))


def substream(seed: SeedLike, *stream: int) -> List[int]:
    """Seed sequence entropy for a numbered sub-stream of `seed`."""
    if isinstance(seed, (int, np.integer)):
        seed = [seed]
    return [int(s) for s in seed] + [int(s) for s in stream]


def rng_for(seed: SeedLike, *stream: int) -> np.random.Generator:
    """Independent generator for `seed`, optionally split into numbered sub-streams."""
    return np.random.default_rng(substream(seed, *stream))


def toeplitz_block(size: int, rho: float) -> np.ndarray:
    """One block: 1 on the diagonal, (p' - 1 - k) rho / (p' - 1) at lag k >= 1."""
    if size == 1:
        return np.ones((1, 1))
    lags = np.arange(size)
    first_row = (size - 1 - lags) * rho / (size - 1)
    first_row[0] = 1.0
    return linalg.toeplitz(first_row)


def build_block_toeplitz(spec: CovarianceSpec) -> np.ndarray:
    """
    Block-diagonal covariance with a Toeplitz block per entry of block_sizes.

    Raises:
        CovarianceError: if the result fails the Cholesky factorisation
    """
    sigma = linalg.block_diag(*[toeplitz_block(int(b), spec.rho) for b in spec.block_sizes])
    logger.debug("block-Toeplitz covariance: blocks=%s rho=%.3f", spec.block_sizes, spec.rho)
    try:
        linalg.cholesky(sigma, lower=True)
    except linalg.LinAlgError as exc:
        raise CovarianceError(
            f"block-Toeplitz covariance (blocks={spec.block_sizes}, rho={spec.rho}) "
            "is not positive definite"
        ) from exc
    return sigma


def sample_mvn(n: int, sigma: np.ndarray, seed: SeedLike) -> np.ndarray:
    """
    Draw n rows from N(0, sigma) through the lower Cholesky factor.

    Raises:
        CovarianceError: if sigma cannot be factorised
    """
    sigma = np.asarray(sigma, dtype=float)
    if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1]:
        raise CovarianceError(f"covariance must be square, got shape {sigma.shape}")
    p = sigma.shape[0]
    try:
        chol = linalg.cholesky(sigma, lower=True)
    except linalg.LinAlgError as exc:
        raise CovarianceError("covariance is not positive definite") from exc
    if n == 0:
        return np.empty((0, p))
    z = rng_for(seed).standard_normal((n, p))
    return z @ chol.T
