"""
Model-X Gaussian knockoffs with a known covariance and the knockoff+ filter.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import linalg

from ..config import GAUSSIAN_FAMILIES
from ..errors import BaselineError, CovarianceError, SelectionError
from ..model.prep import standardize
from ..sim.covariance import SeedLike, rng_for, substream
from ..sim.scenarios import Dataset
from .lasso import glm_lasso_cv, glm_lasso_fit, lasso_cv, lasso_fit
from .mirror import SelectionResult

logger = logging.getLogger(__name__)

EIGEN_FLOOR = 1e-10


@dataclass
class KnockoffDesign:
    X_tilde: np.ndarray
    s: np.ndarray


def equicorrelated_s(sigma: np.ndarray) -> np.ndarray:
    """s_j = min(2 lambda_min(C), 1) on the correlation scale C, mapped back to the covariance scale."""
    sd = np.sqrt(np.diag(sigma))
    corr = sigma / np.outer(sd, sd)
    lam_min = float(linalg.eigvalsh(corr, subset_by_index=[0, 0])[0])
    return np.full(len(sd), min(2.0 * lam_min, 1.0)) * sd ** 2


def gaussian_knockoffs(X: np.ndarray, sigma: np.ndarray, seed: SeedLike) -> KnockoffDesign:
    """
    Draw X_tilde | X ~ N(X (I - Sigma^-1 D), 2D - D Sigma^-1 D) with D = diag(s).

    Raises:
        CovarianceError: Sigma not symmetric positive definite or of the wrong size
    """
    X = np.asarray(X, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    n, p = X.shape
    if sigma.shape != (p, p) or not np.allclose(sigma, sigma.T):
        raise CovarianceError(f"covariance must be a symmetric {p} x {p} matrix, got {sigma.shape}")
    try:
        factor = linalg.cho_factor(sigma, lower=True)
    except linalg.LinAlgError as e:
        raise CovarianceError("covariance is not positive definite") from e

    s = equicorrelated_s(sigma)
    sigma_inv_d = linalg.cho_solve(factor, np.diag(s))
    mean = X - X @ sigma_inv_d
    cond_cov = 2.0 * np.diag(s) - np.diag(s) @ sigma_inv_d
    cond_cov = (cond_cov + cond_cov.T) / 2.0
    vals, vecs = linalg.eigh(cond_cov)
    root = vecs * np.sqrt(np.maximum(vals, EIGEN_FLOOR))
    z = rng_for(seed).standard_normal((n, p))
    return KnockoffDesign(X_tilde=mean + z @ root.T, s=s)


def knockoff_threshold(W: np.ndarray, alpha: float, offset: int = 1) -> Optional[float]:
    """
    Smallest t among the nonzero |W_j| with (offset + #{W <= -t}) / max(#{W >= t}, 1) <= alpha.

    offset=1 is knockoff+, offset=0 the plain knockoff filter. None when no t qualifies.
    """
    if not 0.0 < alpha < 1.0:
        raise SelectionError(f"alpha must lie in (0, 1), got {alpha}")
    W = np.asarray(W, dtype=float)
    candidates = np.unique(np.abs(W[W != 0]))
    if candidates.size == 0:
        return None
    ordered = np.sort(W)
    negatives = np.searchsorted(ordered, -candidates, side="right")
    positives = W.size - np.searchsorted(ordered, candidates, side="left")
    ratio = (offset + negatives) / np.maximum(positives, 1)
    ok = np.flatnonzero(ratio <= alpha)
    return None if ok.size == 0 else float(candidates[ok[0]])


def _lasso_statistic(Z: np.ndarray, y: np.ndarray, family: str, seed: SeedLike) -> np.ndarray:
    if family in GAUSSIAN_FAMILIES:
        lam = lasso_cv(Z, y, seed=seed)
        return lasso_fit(Z, y, lam).coefficients
    lam = glm_lasso_cv(Z, y, family, seed=seed)
    return glm_lasso_fit(Z, y, family, lam).coefficients


def knockoff_select(dataset: Dataset, sigma: np.ndarray, alpha: float, seed: SeedLike) -> SelectionResult:
    """
    W_j = |b_j| - |b_j~| from one CV-tuned LASSO on the standardized [X, X_tilde],
    thresholded with knockoff+.
    """
    if sigma is None:
        raise BaselineError("knockoff selection needs the true covariance")
    p = dataset.p
    design = gaussian_knockoffs(dataset.X, sigma, substream(seed, 0))
    Z, _, _ = standardize(np.hstack([dataset.X, design.X_tilde]))
    coef = _lasso_statistic(Z, dataset.y, dataset.family, substream(seed, 1))
    W = np.abs(coef[:p]) - np.abs(coef[p:])

    T = knockoff_threshold(W, alpha)
    selected = np.empty(0, dtype=int) if T is None else np.flatnonzero(W >= T)
    logger.debug("knockoff: T=%s, selected %d of %d", T, selected.size, p)
    indicator = np.zeros(p)
    indicator[selected] = 1.0
    return SelectionResult(
        t_alpha=T,
        inclusion_probs=indicator,
        tau_alpha=None if T is None else 0.0,
        selected=selected,
        alpha=alpha,
        method="knockoff",
        extras={"W": W.tolist()},
    )
