"""
Mean-field ADVI: reparameterised ELBO estimates, their gradients and the
fixed-budget optimisation loop.

The ELBO of q = N(m, diag(s^2)) against a target log p is

    (1/S) sum_s [log p(T(u_s)) + log|J_T(u_s)|] + H(q),   u_s = m + s * z_s

with the entropy H(q) computed exactly. Gradients use the same z_s, so the
estimate is a deterministic, differentiable function of (m, log s) for a
fixed seed.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from ..config import AdviConfig, ModelSpec
from ..errors import DivergenceError, NonFiniteError
from ..model.densities import JointDensity, bind_model
from ..sim.covariance import SeedLike, rng_for
from ..sim.scenarios import Dataset
from .optim import DecayedAdaGrad
from .posterior import VariationalPosterior

logger = logging.getLogger(__name__)


@dataclass
class FitTrace:
    iterations: np.ndarray
    elbo: np.ndarray
    posterior: VariationalPosterior
    wall_time: float = 0.0
    elbo_raw: np.ndarray = field(default_factory=lambda: np.empty(0))

    def window_mean(self, start: float, stop: float) -> float:
        """Mean smoothed ELBO over a fractional window of the trace, e.g. (0.9, 1.0)."""
        n = len(self.elbo)
        lo, hi = int(np.floor(start * n)), max(int(np.ceil(stop * n)), int(np.floor(start * n)) + 1)
        return float(np.mean(self.elbo[lo:hi]))


def initial_posterior(target: JointDensity, config: AdviConfig) -> VariationalPosterior:
    dim = target.layout.dim
    locations = np.zeros(dim)
    if config.init_location_scale > 0.0:
        locations = rng_for(config.seed, 1).normal(0.0, config.init_location_scale, size=dim)
    return VariationalPosterior(locations, np.full(dim, config.init_log_scale), target.layout)


def _evaluate(q: VariationalPosterior, target: JointDensity, z: np.ndarray) -> Tuple[float, np.ndarray, np.ndarray]:
    scales = q.scales
    u = q.locations + scales * z
    values, grad_u = target.log_prob_and_grad(u)
    elbo = float(np.mean(values)) + q.entropy()
    grad_m = grad_u.mean(axis=0)
    # d/d(log s) of E[log p(m + s z)] is s * E[g z]; the entropy adds 1
    grad_log_s = (grad_u * z).mean(axis=0) * scales + 1.0
    return elbo, grad_m, grad_log_s


def _draw_noise(q: VariationalPosterior, n_mc: int, seed: SeedLike) -> np.ndarray:
    return rng_for(seed).standard_normal((n_mc, q.dim))


def elbo_estimate(q: VariationalPosterior, target: JointDensity, n_mc: int, seed: SeedLike) -> float:
    """
    Unbiased Monte-Carlo ELBO estimate.

    Raises:
        NonFiniteError: if the estimate is not finite
    """
    z = _draw_noise(q, n_mc, seed)
    u = q.locations + q.scales * z
    values = target.log_prob(u)
    elbo = float(np.mean(values)) + q.entropy()
    if not np.isfinite(elbo):
        raise NonFiniteError(f"ELBO estimate is not finite ({elbo})", term="elbo")
    return elbo


def elbo_gradient(q: VariationalPosterior, target: JointDensity, n_mc: int, seed: SeedLike) -> np.ndarray:
    """
    Reparameterisation gradient, concatenated as (d/dm, d/dlog_s).

    Raises:
        NonFiniteError: naming the first non-finite coordinate
    """
    _, grad_m, grad_log_s = _evaluate(q, target, _draw_noise(q, n_mc, seed))
    grad = np.concatenate([grad_m, grad_log_s])
    bad = np.flatnonzero(~np.isfinite(grad))
    if bad.size:
        names = q.layout.coordinate_names()
        k = int(bad[0])
        name = names[k] if k < q.dim else f"log_scale:{names[k - q.dim]}"
        raise NonFiniteError(f"ELBO gradient is not finite for {name}", term=name)
    return grad


def fit(target: JointDensity, config: Optional[AdviConfig] = None) -> FitTrace:
    """
    Ascend the ELBO for a fixed number of iterations with DecayedAdaGrad.

    Raises:
        DivergenceError: on a non-finite ELBO or gradient, with the trace so far
    """
    config = config or AdviConfig()
    start = time.perf_counter()
    q = initial_posterior(target, config)
    dim = q.dim
    optimizer = DecayedAdaGrad(config.step_size, config.decay_rate, config.epsilon)
    rng = rng_for(config.seed)
    params = np.concatenate([q.locations, q.log_scales])

    raw = np.empty(config.iterations)
    smoothed = np.empty(config.iterations)
    ema = None
    for it in range(config.iterations):
        z = rng.standard_normal((config.n_mc, dim))
        elbo, grad_m, grad_log_s = _evaluate(q, target, z)
        grad = np.concatenate([grad_m, grad_log_s])
        if not np.isfinite(elbo) or not np.all(np.isfinite(grad)):
            raise DivergenceError(
                f"ADVI diverged at iteration {it} (elbo={elbo})", trace=smoothed[:it]
            )
        ema = elbo if ema is None else (1.0 - config.smoothing) * ema + config.smoothing * elbo
        raw[it], smoothed[it] = elbo, ema
        params = optimizer.step(params, grad)
        q = VariationalPosterior(params[:dim], params[dim:], target.layout)
        if (it + 1) % config.log_every == 0:
            logger.debug("iteration %d: smoothed ELBO %.4f", it + 1, ema)

    wall_time = time.perf_counter() - start
    if config.iterations:
        logger.info(
            "ADVI finished %d iterations in %.1fs (smoothed ELBO %.4f)",
            config.iterations, wall_time, smoothed[-1],
        )
    return FitTrace(
        iterations=np.arange(1, config.iterations + 1),
        elbo=smoothed,
        posterior=q,
        wall_time=wall_time,
        elbo_raw=raw,
    )


def fit_model(model: ModelSpec, data: Dataset, config: Optional[AdviConfig] = None) -> FitTrace:
    """Bind the model to the data and run ADVI."""
    return fit(bind_model(model, data), config)
