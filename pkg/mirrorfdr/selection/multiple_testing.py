"""
Benjamini-Hochberg step-up selection and the regression p-values that feed it.
"""

import logging

import numpy as np
from scipy import stats

from ..errors import BaselineError, SelectionError

logger = logging.getLogger(__name__)


def bh_select(pvalues: np.ndarray, alpha: float) -> np.ndarray:
    """
    Reject the k smallest p-values, k the largest index with p_(k) <= k alpha / m.

    Returns:
        sorted 0-based indices of the rejected hypotheses
    """
    p = np.asarray(pvalues, dtype=float).ravel()
    if not 0.0 < alpha <= 1.0:
        raise SelectionError(f"alpha must lie in (0, 1], got {alpha}")
    if p.size and (np.any(~np.isfinite(p)) or p.min() < 0.0 or p.max() > 1.0):
        raise SelectionError("p-values must lie in [0, 1]")
    m = p.size
    order = np.argsort(p, kind="stable")
    passing = np.flatnonzero(p[order] <= alpha * np.arange(1, m + 1) / m)
    if passing.size == 0:
        return np.empty(0, dtype=int)
    return np.sort(order[: passing[-1] + 1])


def regression_pvalues(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """
    Two-sided t-test p-values: joint OLS with intercept when n > p + 1,
    one univariate regression per covariate otherwise.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = X.shape
    if y.shape != (n,):
        raise BaselineError(f"shape mismatch: X {X.shape}, y {y.shape}")
    if n > p + 1:
        design = np.column_stack([np.ones(n), X])
        coef, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
        if rank < p + 1:
            raise BaselineError("design matrix is rank deficient")
        df = n - p - 1
        resid = y - design @ coef
        sigma2 = resid @ resid / df
        cov = sigma2 * np.linalg.inv(design.T @ design)
        t = coef[1:] / np.sqrt(np.diag(cov)[1:])
        return 2.0 * stats.t.sf(np.abs(t), df)

    logger.warning("n=%d <= p+1=%d: using marginal regression p-values", n, p + 1)
    if n < 3:
        raise BaselineError(f"marginal regression needs n >= 3, got {n}")
    Xc = X - X.mean(axis=0)
    yc = y - y.mean()
    sxx = np.einsum("ij,ij->j", Xc, Xc)
    pvalues = np.ones(p)
    ok = sxx > 0
    slope = (Xc[:, ok].T @ yc) / sxx[ok]
    rss = np.sum((yc[:, None] - Xc[:, ok] * slope) ** 2, axis=0)
    se = np.sqrt(rss / (n - 2) / sxx[ok])
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(se > 0, slope / se, np.inf * np.sign(slope))
    pvalues[ok] = np.nan_to_num(2.0 * stats.t.sf(np.abs(t), n - 2), nan=1.0)
    return pvalues
