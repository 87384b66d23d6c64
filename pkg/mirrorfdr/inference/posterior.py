"""
Mean-field Gaussian variational posterior over the unconstrained space.
"""

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from ..errors import ModelError
from ..sim.covariance import SeedLike, rng_for

if TYPE_CHECKING:
    from ..model.layout import ParameterLayout


@dataclass
class VariationalPosterior:
    """q(u) = prod_k N(m_k, s_k) with s_k = exp(log_scales_k)."""
    locations: np.ndarray
    log_scales: np.ndarray
    layout: "ParameterLayout"

    def __post_init__(self):
        self.locations = np.asarray(self.locations, dtype=float)
        self.log_scales = np.asarray(self.log_scales, dtype=float)
        if self.locations.shape != (self.layout.dim,) or self.log_scales.shape != (self.layout.dim,):
            raise ModelError(
                f"posterior dimensions {self.locations.shape}/{self.log_scales.shape} "
                f"do not match layout dim {self.layout.dim}"
            )

    @property
    def scales(self) -> np.ndarray:
        return np.exp(self.log_scales)

    @property
    def dim(self) -> int:
        return self.layout.dim

    def copy(self) -> "VariationalPosterior":
        return VariationalPosterior(self.locations.copy(), self.log_scales.copy(), self.layout)

    def entropy(self) -> float:
        """Exact Gaussian entropy: sum_k log s_k + 1/2 log(2 pi e)."""
        return float(np.sum(self.log_scales) + 0.5 * self.dim * (np.log(2.0 * np.pi) + 1.0))


def sample_posterior(q: VariationalPosterior, count: int, seed: SeedLike) -> np.ndarray:
    """count x dim independent draws from the factorised Gaussian."""
    if count < 1:
        raise ModelError(f"count must be positive, got {count}")
    z = rng_for(seed).standard_normal((count, q.dim))
    return q.locations + q.scales * z
