"""
Posterior regression-coefficient draws from a fitted variational posterior.
"""

from typing import Optional

import numpy as np

from ..config import ModelSpec
from ..errors import ModelError
from ..inference.posterior import VariationalPosterior, sample_posterior
from ..sim.covariance import SeedLike
from .layout import ParameterLayout, ParameterSet, to_constrained


def coefficients_from_params(model: ModelSpec, params: ParameterSet) -> np.ndarray:
    """beta = eta * lambda for the product prior, beta itself otherwise."""
    if model.prior.kind == "product":
        return params["eta"] * params["lambda"]
    return params["beta"]


def coefficient_draws(
    posterior: VariationalPosterior,
    model: ModelSpec,
    layout: ParameterLayout,
    count: int,
    seed: SeedLike,
    scale: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    count x p matrix of independent posterior draws of the regression coefficients.

    With `scale`, the column sds used to standardise the covariates, draws are
    returned on the original covariate scale.

    Raises:
        ModelError: fewer than two draws, or a scale of the wrong length
    """
    if count < 2:
        raise ModelError(f"need at least two coefficient draws, got {count}")
    u = sample_posterior(posterior, count, seed)
    params, _ = to_constrained(u, layout)
    beta = coefficients_from_params(model, params)
    if scale is None:
        return beta
    scale = np.asarray(scale, dtype=float)
    if scale.shape != (beta.shape[1],):
        raise ModelError(f"scale has shape {scale.shape}, expected ({beta.shape[1]},)")
    return beta / scale
