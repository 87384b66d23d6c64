"""
L1-penalised regression by cyclic coordinate descent with soft-thresholding.

The Gaussian solver minimises

    (1 / 2n) sum_i w_i (y_i - b0 - x_i' beta)^2 + lambda ||beta||_1

with an unpenalised intercept and optional observation weights; the GLM
solver wraps it in an IRLS loop for logistic and Poisson outcomes.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.special import expit, xlogy

from ..errors import BaselineError
from ..sim.covariance import SeedLike, rng_for

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-7
DEFAULT_MAX_SWEEPS = 10_000
MAX_GLM_ETA = 30.0
# |rho| within this relative distance of lambda counts as on the threshold
THRESHOLD_RTOL = 1e-10
GLM_FAMILIES = ("logistic", "poisson")


@dataclass
class LassoFit:
    coefficients: np.ndarray
    intercept: float
    lambda_: float
    iterations_used: int
    converged: bool = True

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.intercept + X @ self.coefficients

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.coefficients)


def soft_threshold(x, t):
    return np.sign(x) * np.maximum(np.abs(x) - t, 0.0)


def _check_inputs(X: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or y.shape != (X.shape[0],):
        raise BaselineError(f"shape mismatch: X {X.shape}, y {y.shape}")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise BaselineError("LASSO inputs contain non-finite values")
    return X, y


def _centered(X, y, weights):
    """Weighted centering that absorbs the unpenalised intercept."""
    total = weights.sum()
    x_mean = weights @ X / total
    y_mean = float(weights @ y / total)
    return X - x_mean, y - y_mean, x_mean, y_mean


def _null_correlation(wX: np.ndarray, yc: np.ndarray) -> float:
    return float(np.max(np.abs(wX.T @ yc)) / len(yc)) if wX.shape[1] else 0.0


def lambda_max(X: np.ndarray, y: np.ndarray, weights: Optional[np.ndarray] = None) -> float:
    """Smallest lambda with an all-zero solution."""
    X, y = _check_inputs(X, y)
    weights = np.ones(len(y)) if weights is None else np.asarray(weights, dtype=float)
    Xc, yc, _, _ = _centered(X, y, weights)
    return _null_correlation(Xc * weights[:, None], yc)


def _sweep(Xc, wX, col_sq, residual, beta, lam, n, coords) -> float:
    max_change = 0.0
    for j in coords:
        if col_sq[j] == 0.0:
            continue
        old = beta[j]
        rho = wX[:, j] @ residual / n + col_sq[j] * old
        if abs(rho) <= lam * (1.0 + THRESHOLD_RTOL):
            new = 0.0
        else:
            new = soft_threshold(rho, lam) / col_sq[j]
        if new != old:
            residual -= Xc[:, j] * (new - old)
            beta[j] = new
            max_change = max(max_change, abs(new - old))
    return max_change


def lasso_fit(
    X: np.ndarray,
    y: np.ndarray,
    lam: float,
    tol: float = DEFAULT_TOL,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
    weights: Optional[np.ndarray] = None,
    warm_start: Optional[np.ndarray] = None,
) -> LassoFit:
    """
    Cyclic coordinate descent with an active-set strategy: sweeps run over the
    nonzero coordinates until they settle, then a full sweep checks whether the
    active set changed.

    Raises:
        BaselineError: negative lambda, shape mismatch or non-finite inputs
    """
    X, y = _check_inputs(X, y)
    if lam < 0:
        raise BaselineError(f"lambda must be non-negative, got {lam}")
    n, p = X.shape
    weights = np.ones(n) if weights is None else np.asarray(weights, dtype=float)
    Xc, yc, x_mean, y_mean = _centered(X, y, weights)
    wX = Xc * weights[:, None]
    col_sq = np.einsum("ij,ij->j", wX, Xc) / n
    if lam >= _null_correlation(wX, yc):
        return LassoFit(np.zeros(p), y_mean, float(lam), 0)

    beta = np.zeros(p) if warm_start is None else np.array(warm_start, dtype=float)
    residual = yc - Xc @ beta
    all_coords = np.arange(p)
    sweeps = 0
    converged = False
    while sweeps < max_sweeps:
        change = _sweep(Xc, wX, col_sq, residual, beta, lam, n, all_coords)
        sweeps += 1
        if change < tol:
            converged = True
            break
        active = np.flatnonzero(beta)
        while sweeps < max_sweeps:
            change = _sweep(Xc, wX, col_sq, residual, beta, lam, n, active)
            sweeps += 1
            if change < tol:
                break

    if not converged:
        logger.warning("LASSO did not converge in %d sweeps (lambda=%.3g)", max_sweeps, lam)
    intercept = y_mean - float(x_mean @ beta)
    return LassoFit(beta, intercept, float(lam), sweeps, converged)


def lambda_grid(lam_max: float, grid_size: int = 50, decades: float = 4.0) -> np.ndarray:
    """Log-spaced, descending from lam_max."""
    if lam_max <= 0:
        return np.zeros(1)
    grid = np.logspace(np.log10(lam_max), np.log10(lam_max) - decades, grid_size)
    grid[0] = lam_max
    return grid


def lasso_path(X, y, lambdas, weights=None, tol=DEFAULT_TOL, max_sweeps=DEFAULT_MAX_SWEEPS) -> List[LassoFit]:
    """Warm-started fits along a descending lambda grid."""
    fits = []
    warm = None
    for lam in lambdas:
        fit = lasso_fit(X, y, lam, tol=tol, max_sweeps=max_sweeps, weights=weights, warm_start=warm)
        warm = fit.coefficients
        fits.append(fit)
    return fits


def cv_folds(n: int, folds: int, seed: SeedLike) -> List[np.ndarray]:
    if folds < 2 or folds > n:
        raise BaselineError(f"folds must lie in [2, n={n}], got {folds}")
    return np.array_split(rng_for(seed).permutation(n), folds)


def lasso_cv_curve(
    X: np.ndarray,
    y: np.ndarray,
    grid_size: int = 50,
    folds: int = 5,
    seed: SeedLike = 0,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Returns:
        (lambda grid, mean held-out squared error per lambda)

    Raises:
        BaselineError: a training fold with constant y
    """
    X, y = _check_inputs(X, y)
    grid = lambda_grid(lambda_max(X, y), grid_size)
    errors = np.zeros(len(grid))
    for test in cv_folds(len(y), folds, seed):
        train = np.setdiff1d(np.arange(len(y)), test)
        if np.ptp(y[train]) == 0:
            raise BaselineError("degenerate fold: constant outcome in training rows")
        for k, fit in enumerate(lasso_path(X[train], y[train], grid)):
            errors[k] += np.sum((y[test] - fit.predict(X[test])) ** 2)
    return grid, errors / len(y)


def lasso_cv(X: np.ndarray, y: np.ndarray, grid_size: int = 50, folds: int = 5, seed: SeedLike = 0) -> float:
    """Lambda minimising the cross-validated squared error."""
    grid, errors = lasso_cv_curve(X, y, grid_size, folds, seed)
    lam = float(grid[int(np.argmin(errors))])
    logger.debug("lasso_cv chose lambda=%.4g (lambda_max=%.4g)", lam, grid[0])
    return lam


def _glm_mean(family: str, eta: np.ndarray) -> np.ndarray:
    if family == "logistic":
        return expit(eta)
    if family == "poisson":
        return np.exp(np.minimum(eta, MAX_GLM_ETA))
    raise BaselineError(f"GLM LASSO supports logistic and poisson, got {family}")


def glm_deviance(family: str, y: np.ndarray, mu: np.ndarray) -> np.ndarray:
    """Per-observation deviance."""
    if family == "logistic":
        mu = np.clip(mu, 1e-12, 1.0 - 1e-12)
        return -2.0 * (xlogy(y, mu) + xlogy(1.0 - y, 1.0 - mu))
    return 2.0 * (xlogy(y, y) - xlogy(y, mu) - (y - mu))


def glm_lambda_max(X: np.ndarray, y: np.ndarray) -> float:
    Xc = X - X.mean(axis=0)
    return float(np.max(np.abs(Xc.T @ (y - y.mean()))) / len(y))


def glm_lasso_fit(
    X: np.ndarray,
    y: np.ndarray,
    family: str,
    lam: float,
    tol: float = DEFAULT_TOL,
    max_outer: int = 100,
    warm_start: Optional[LassoFit] = None,
) -> LassoFit:
    """
    Penalised maximum likelihood by IRLS: each outer step solves the weighted
    LASSO of the working response.

    Raises:
        BaselineError: unsupported family or invalid inputs
    """
    X, y = _check_inputs(X, y)
    if family not in GLM_FAMILIES:
        raise BaselineError(f"GLM LASSO supports logistic and poisson, got {family}")
    n, p = X.shape
    if warm_start is None:
        y_bar = float(np.clip(y.mean(), 1e-6, None if family == "poisson" else 1.0 - 1e-6))
        intercept = np.log(y_bar / (1.0 - y_bar)) if family == "logistic" else np.log(y_bar)
        beta = np.zeros(p)
    else:
        intercept, beta = warm_start.intercept, warm_start.coefficients.copy()

    sweeps = 0
    converged = False
    for _ in range(max_outer):
        eta = intercept + X @ beta
        mu = _glm_mean(family, eta)
        w = np.maximum(mu * (1.0 - mu) if family == "logistic" else mu, 1e-5)
        z = eta + (y - mu) / w
        fit = lasso_fit(X, z, lam, tol=tol, weights=w, warm_start=beta)
        sweeps += fit.iterations_used
        change = max(np.max(np.abs(fit.coefficients - beta), initial=0.0), abs(fit.intercept - intercept))
        beta, intercept = fit.coefficients, fit.intercept
        if change < max(tol * 10, 1e-6):
            converged = True
            break
    if not converged:
        logger.warning("GLM LASSO (%s) did not converge in %d IRLS steps", family, max_outer)
    return LassoFit(beta, float(intercept), float(lam), sweeps, converged)


def glm_lasso_cv(
    X: np.ndarray,
    y: np.ndarray,
    family: str,
    grid_size: int = 30,
    folds: int = 5,
    seed: SeedLike = 0,
    decades: float = 2.0,
) -> float:
    """Lambda minimising the mean held-out deviance."""
    X, y = _check_inputs(X, y)
    grid = lambda_grid(glm_lambda_max(X, y), grid_size, decades)
    deviance = np.zeros(len(grid))
    for test in cv_folds(len(y), folds, seed):
        train = np.setdiff1d(np.arange(len(y)), test)
        if np.ptp(y[train]) == 0:
            raise BaselineError("degenerate fold: constant outcome in training rows")
        warm = None
        for k, lam in enumerate(grid):
            warm = glm_lasso_fit(X[train], y[train], family, lam, warm_start=warm)
            mu = _glm_mean(family, warm.predict(X[test]))
            deviance[k] += np.sum(glm_deviance(family, y[test], mu))
    lam = float(grid[int(np.argmin(deviance))])
    logger.debug("glm_lasso_cv (%s) chose lambda=%.4g", family, lam)
    return lam
