"""
Data-splitting mirror statistic: LASSO on one half of the rows, OLS on the
selected support in the other half, mirror values of the two estimates.
"""

import logging

import numpy as np

from ..errors import BaselineError
from ..model.prep import standardize
from ..sim.covariance import SeedLike, rng_for, substream
from ..sim.scenarios import Dataset
from .lasso import lasso_cv, lasso_fit
from .mirror import MirrorSamples, SelectionResult, mirror_transform, optimal_threshold

logger = logging.getLogger(__name__)

MIN_ROWS = 40


def restricted_ols(X: np.ndarray, y: np.ndarray, support: np.ndarray) -> np.ndarray:
    """
    OLS with intercept on the support columns; zeros elsewhere.

    Raises:
        BaselineError: support at least as large as the row count
    """
    beta = np.zeros(X.shape[1])
    if not support.size:
        return beta
    if support.size >= X.shape[0]:
        raise BaselineError(
            f"restricted OLS infeasible: {support.size} covariates for {X.shape[0]} rows"
        )
    design = np.column_stack([np.ones(X.shape[0]), X[:, support]])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    beta[support] = coef[1:]
    return beta


def _half_estimates(X: np.ndarray, y: np.ndarray, first: np.ndarray, second: np.ndarray, seed: SeedLike):
    Z, _, scale = standardize(X[first])
    lam = lasso_cv(Z, y[first], seed=seed)
    lasso = lasso_fit(Z, y[first], lam)
    beta_first = lasso.coefficients / scale
    support = lasso.support

    beta_second = restricted_ols(X[second], y[second], support)
    return beta_first, beta_second, support


def ds_select(dataset: Dataset, alpha: float, seed: SeedLike) -> SelectionResult:
    """
    Raises:
        BaselineError: non-linear family, too few rows or an infeasible restricted OLS
    """
    if dataset.family != "linear":
        raise BaselineError(f"data splitting runs on linear data, got {dataset.family}")
    n = dataset.n_rows
    if n < MIN_ROWS:
        raise BaselineError(f"data splitting needs at least {MIN_ROWS} rows, got {n}")
    rng = rng_for(seed)
    perm = rng.permutation(n)
    first, second = perm[: n // 2], perm[n // 2:]
    beta_first, beta_second, support = _half_estimates(
        dataset.X, dataset.y, first, second, substream(seed, 1)
    )

    w = mirror_transform(beta_first, beta_second)
    t_alpha, fdp = optimal_threshold(MirrorSamples(w[None, :]), alpha)
    if t_alpha is None:
        selected = np.empty(0, dtype=int)
    else:
        selected = np.flatnonzero(w > t_alpha)
    logger.debug("DS: support %d, selected %d", support.size, selected.size)
    indicator = np.zeros(dataset.p)
    indicator[selected] = 1.0
    return SelectionResult(
        t_alpha=t_alpha,
        inclusion_probs=indicator,
        tau_alpha=None if t_alpha is None else 0.0,
        selected=selected,
        alpha=alpha,
        estimated_fdp_at_t=fdp,
        method="ds",
        extras={"mirror": w.tolist()},
    )
