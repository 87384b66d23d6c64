"""
Bayesian mirror-statistic selection.

Pairs of independent posterior coefficient draws are folded into mirror
values w = |a + b| - |a - b|. A pooled threshold t controls the estimated
false discovery proportion of the mirror draws, the fraction of draws above
t gives each coefficient an inclusion probability, and a second threshold
on those probabilities yields the final selection.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.stats import norm

from ..errors import SelectionError
from ..sim.covariance import SeedLike, rng_for

logger = logging.getLogger(__name__)

# absorbs rounding in sums such as 3 * (1 - 0.9) / 3 <= 0.1
FDP_TOLERANCE = 1e-12


def mirror_transform(a, b):
    """m(a, b) = |a + b| - |a - b|, equal to 2 sign(ab) min(|a|, |b|)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.abs(a + b) - np.abs(a - b)


@dataclass
class MirrorSamples:
    """N x p matrix of mirror draws."""
    w: np.ndarray

    def __post_init__(self):
        self.w = np.atleast_2d(np.asarray(self.w, dtype=float))
        if self.w.ndim != 2 or self.w.shape[0] < 1:
            raise SelectionError(f"mirror samples must be an N x p matrix with N >= 1, got {self.w.shape}")
        if not np.all(np.isfinite(self.w)):
            raise SelectionError("mirror samples contain non-finite values")

    @property
    def n_pairs(self) -> int:
        return self.w.shape[0]

    @property
    def p(self) -> int:
        return self.w.shape[1]


@dataclass
class SelectionResult:
    """
    Outcome of a selection procedure. Indices in `selected` are 0-based.

    `t_alpha` and `tau_alpha` are None when no threshold qualifies, in which
    case nothing is selected.
    """
    t_alpha: Optional[float]
    inclusion_probs: np.ndarray
    tau_alpha: Optional[float]
    selected: np.ndarray
    alpha: float
    estimated_fdp_at_t: Optional[float] = None
    estimated_fdp_at_tau: Optional[float] = None
    method: str = "bayesms"
    extras: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        self.inclusion_probs = np.asarray(self.inclusion_probs, dtype=float)
        self.selected = np.sort(np.asarray(self.selected, dtype=int))

    @property
    def n_selected(self) -> int:
        return int(self.selected.size)

    def to_dict(self) -> dict:
        """JSON-ready form; `selected` is reported with 1-based covariate indices."""
        return {
            "method": self.method,
            "alpha": self.alpha,
            "t_alpha": self.t_alpha,
            "tau_alpha": self.tau_alpha,
            "estimated_fdp_at_t": self.estimated_fdp_at_t,
            "estimated_fdp_at_tau": self.estimated_fdp_at_tau,
            "n_selected": self.n_selected,
            "selected": [int(j) + 1 for j in self.selected],
            "inclusion_probs": self.inclusion_probs.tolist(),
            **self.extras,
        }


@dataclass(frozen=True)
class WNormalApprox:
    mean: float
    sd: float

    def __post_init__(self):
        if not self.sd > 0:
            raise SelectionError(f"sd must be positive, got {self.sd}")


def _check_alpha(alpha: float):
    if not 0.0 < alpha < 1.0:
        raise SelectionError(f"alpha must lie in (0, 1), got {alpha}")


def mirror_samples(beta_draws: np.ndarray, seed: SeedLike) -> MirrorSamples:
    """
    Shuffle the 2N draws once, split them into halves and fold each pair.

    Raises:
        SelectionError: fewer than four draws or an odd draw count
    """
    draws = np.asarray(beta_draws, dtype=float)
    if draws.ndim != 2:
        raise SelectionError(f"beta draws must be a matrix, got shape {draws.shape}")
    total = draws.shape[0]
    if total < 4 or total % 2:
        raise SelectionError(f"need an even number of at least 4 draws, got {total}")
    shuffled = draws[rng_for(seed).permutation(total)]
    half = total // 2
    return MirrorSamples(mirror_transform(shuffled[:half], shuffled[half:]))


def threshold_candidates(w: np.ndarray) -> np.ndarray:
    """
    Distinct positive |w| plus one point of (0, min |w|), ascending.

    Together these realise every distinct pair of strict counts
    #{w < -t}, #{w > t} over t > 0.
    """
    magnitudes = np.unique(np.abs(w[w != 0]))
    if magnitudes.size == 0:
        return magnitudes
    return np.concatenate([[magnitudes[0] / 2.0], magnitudes])


def pooled_fdp(w: np.ndarray, thresholds: np.ndarray) -> np.ndarray:
    """Probability-averaged FDP estimate sum_j P(w_j < -t) / max(sum_j P(w_j > t), 1)."""
    w = np.atleast_2d(w)
    n_pairs = w.shape[0]
    flat = np.sort(w.ravel())
    thresholds = np.asarray(thresholds, dtype=float)
    below = np.searchsorted(flat, -thresholds, side="left") / n_pairs
    above = (flat.size - np.searchsorted(flat, thresholds, side="right")) / n_pairs
    return below / np.maximum(above, 1.0)


def optimal_threshold(ms: MirrorSamples, alpha: float) -> Tuple[Optional[float], Optional[float]]:
    """
    Smallest t > 0 whose pooled FDP estimate is at most alpha.

    Returns:
        (t_alpha, estimated_fdp), both None when no candidate qualifies
    """
    _check_alpha(alpha)
    candidates = threshold_candidates(ms.w)
    if candidates.size == 0:
        return None, None
    fdp = pooled_fdp(ms.w, candidates)
    ok = np.flatnonzero(fdp <= alpha + FDP_TOLERANCE)
    if ok.size == 0:
        return None, None
    k = int(ok[0])
    return float(candidates[k]), float(fdp[k])


def inclusion_probabilities(ms: MirrorSamples, t_alpha: float) -> np.ndarray:
    if t_alpha is None or not np.isfinite(t_alpha) or t_alpha <= 0:
        raise SelectionError(f"t_alpha must be finite and positive, got {t_alpha}")
    return (ms.w > t_alpha).mean(axis=0)


def select_covariates(pi: np.ndarray, alpha: float) -> Tuple[Optional[float], np.ndarray, Optional[float]]:
    """
    Smallest tau whose estimated FDP sum (1 - pi_j) 1(pi_j > tau) / #{pi_j > tau} is at most alpha.

    Returns:
        (tau_alpha, selected indices, estimated_fdp); (None, empty, None) when no tau qualifies
    """
    _check_alpha(alpha)
    pi = np.asarray(pi, dtype=float)
    if pi.size and (pi.min() < 0.0 or pi.max() > 1.0):
        raise SelectionError("inclusion probabilities must lie in [0, 1]")
    empty = np.empty(0, dtype=int)
    if pi.size == 0:
        return None, empty, None

    candidates = np.unique(np.concatenate([[0.0], pi[pi < pi.max()]]))
    order = np.sort(pi)
    # suffix sums of (1 - pi) over the sorted probabilities
    tail_false = np.concatenate([np.cumsum((1.0 - order)[::-1])[::-1], [0.0]])
    first_above = np.searchsorted(order, candidates, side="right")
    counts = pi.size - first_above
    fdp = np.divide(tail_false[first_above], counts, out=np.full(candidates.shape, np.inf), where=counts > 0)
    ok = np.flatnonzero((counts > 0) & (fdp <= alpha + FDP_TOLERANCE))
    if ok.size == 0:
        return None, empty, None
    k = int(ok[0])
    tau = float(candidates[k])
    return tau, np.flatnonzero(pi > tau), float(fdp[k])


def select_from_mirror(ms: MirrorSamples, alpha: float, method: str = "bayesms") -> SelectionResult:
    t_alpha, fdp_t = optimal_threshold(ms, alpha)
    if t_alpha is None:
        logger.info("No mirror threshold reaches alpha=%.3f; nothing selected", alpha)
        return SelectionResult(
            t_alpha=None,
            inclusion_probs=np.zeros(ms.p),
            tau_alpha=None,
            selected=np.empty(0, dtype=int),
            alpha=alpha,
            method=method,
        )
    pi = inclusion_probabilities(ms, t_alpha)
    tau_alpha, selected, fdp_tau = select_covariates(pi, alpha)
    logger.debug("t_alpha=%.4g tau_alpha=%s selected=%d", t_alpha, tau_alpha, selected.size)
    return SelectionResult(
        t_alpha=t_alpha,
        inclusion_probs=pi,
        tau_alpha=tau_alpha,
        selected=selected,
        alpha=alpha,
        estimated_fdp_at_t=fdp_t,
        estimated_fdp_at_tau=fdp_tau,
        method=method,
    )


def bayes_ms(beta_draws: np.ndarray, alpha: float, seed: SeedLike) -> SelectionResult:
    """Mirror samples, pooled threshold, inclusion probabilities, final selection."""
    _check_alpha(alpha)
    return select_from_mirror(mirror_samples(beta_draws, seed), alpha)


def folded_normal_moments(mu, sigma) -> Tuple[np.ndarray, np.ndarray]:
    """Mean and variance of |Y| for Y ~ N(mu, sigma^2)."""
    mu = np.asarray(mu, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    mean = sigma * np.sqrt(2.0 / np.pi) * np.exp(-(mu ** 2) / (2.0 * sigma ** 2)) + mu * (
        1.0 - 2.0 * norm.cdf(-mu / sigma)
    )
    var = np.maximum(mu ** 2 + sigma ** 2 - mean ** 2, 0.0)
    return mean, var


def analytic_w_distribution(mu: float, sigma: float) -> WNormalApprox:
    """
    Normal approximation of m(a, b) for independent a, b ~ N(mu, sigma^2).

    a + b ~ N(2 mu, 2 sigma^2) and a - b ~ N(0, 2 sigma^2) are independent, so
    w = |a + b| - |a - b| has mean mu_A - mu_B and variance var_A + var_B.
    """
    if not sigma > 0:
        raise SelectionError(f"sigma must be positive, got {sigma}")
    pair_sd = np.sqrt(2.0) * sigma
    mean_a, var_a = folded_normal_moments(2.0 * mu, pair_sd)
    mean_b, var_b = folded_normal_moments(0.0, pair_sd)
    return WNormalApprox(mean=float(mean_a - mean_b), sd=float(np.sqrt(var_a + var_b)))


def analytic_bayes_ms(
    means: np.ndarray,
    sds: np.ndarray,
    alpha: float,
    n_pairs: int = 1000,
    seed: SeedLike = 0,
) -> SelectionResult:
    """Selection with mirror draws sampled from the per-coefficient normal approximation."""
    _check_alpha(alpha)
    means = np.asarray(means, dtype=float)
    sds = np.asarray(sds, dtype=float)
    if means.shape != sds.shape or means.ndim != 1:
        raise SelectionError("means and sds must be vectors of equal length")
    if n_pairs < 1:
        raise SelectionError(f"n_pairs must be positive, got {n_pairs}")
    approx = [analytic_w_distribution(m, s) for m, s in zip(means, sds)]
    loc = np.array([a.mean for a in approx])
    scale = np.array([a.sd for a in approx])
    w = rng_for(seed).normal(loc, scale, size=(n_pairs, means.size))
    return select_from_mirror(MirrorSamples(w), alpha, method="bayesms_analytic")
