"""
Log joint densities (likelihood + priors) for the four regression families
under the horseshoe, product and normal coefficient priors.

Every scale argument is a standard deviation. Gradients are derived by hand
per term; `RegressionDensity.log_prob_and_grad` chains them through the
constraining transforms so ADVI can work in the unconstrained space.
"""

import logging
from abc import ABC, abstractmethod
from typing import Dict, Mapping, Optional, Tuple, Union

import numpy as np
from scipy import sparse
from scipy.special import betaln, expit, gammaln, xlog1py, xlogy

from ..config import GAUSSIAN_FAMILIES, ModelSpec
from ..errors import ModelError, NonFiniteError
from ..sim.scenarios import Dataset
from .layout import ParameterLayout, ParameterSet, constrain, layout_for

logger = logging.getLogger(__name__)

LOG_2PI = np.log(2.0 * np.pi)
LOG_2_OVER_PI = np.log(2.0 / np.pi)


def normal_logpdf(x, loc, scale):
    z = (x - loc) / scale
    return -0.5 * LOG_2PI - np.log(scale) - 0.5 * z * z


def half_normal_logpdf(x, scale):
    return 0.5 * LOG_2_OVER_PI - np.log(scale) - 0.5 * (x / scale) ** 2


def half_cauchy_logpdf(x, scale):
    return np.log(2.0) - np.log(np.pi) - np.log(scale) - np.log1p((x / scale) ** 2)


def beta_logpdf(x, a, b):
    return xlogy(a - 1.0, x) + xlog1py(b - 1.0, -x) - betaln(a, b)


def log_likelihood(family: str, y: np.ndarray, eta: np.ndarray, sigma_y=None) -> np.ndarray:
    """Summed log-likelihood over the last axis of eta (the linear predictor)."""
    if family in GAUSSIAN_FAMILIES:
        return normal_logpdf(y, eta, sigma_y).sum(axis=-1)
    if family == "logistic":
        return (y * eta - np.logaddexp(0.0, eta)).sum(axis=-1)
    if family == "poisson":
        return (y * eta - np.exp(eta) - gammaln(y + 1.0)).sum(axis=-1)
    raise ModelError(f"unknown family {family}")


def _model_shape(data: Dataset) -> Tuple[int, int, int]:
    return data.n_subjects, data.p, data.M


class JointDensity(ABC):
    """Unnormalised log posterior over an unconstrained parameter vector."""

    layout: ParameterLayout

    @abstractmethod
    def log_prob_and_grad(self, u: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """
        Evaluate log p(T(u), D) + log|det J_T(u)| and its gradient.

        Args:
            u: (S, dim) batch of unconstrained points

        Returns:
            values of shape (S,) and gradients of shape (S, dim)
        """

    def log_prob(self, u: np.ndarray) -> np.ndarray:
        return self.log_prob_and_grad(u)[0]


class RegressionDensity(JointDensity):
    """A ModelSpec bound to a Dataset."""

    def __init__(self, model: ModelSpec, data: Dataset, layout: Optional[ParameterLayout] = None):
        if data.family is not None and data.family != model.family:
            raise ModelError(f"data family {data.family} does not match model family {model.family}")
        if model.family == "random_intercept" and data.subject_index is None:
            raise ModelError("random_intercept model needs subject indices")
        self.model = model
        self.data = data
        self.layout = layout or layout_for(model, _model_shape(data))
        self._y = data.y
        self._X = data.X
        self._subjects = None
        if model.family == "random_intercept":
            rows = np.arange(data.n_rows)
            self._subjects = sparse.csr_matrix(
                (np.ones(data.n_rows), (rows, data.subject_index)),
                shape=(data.n_rows, data.n_subjects),
            )

    def terms(self, params: ParameterSet, with_grad: bool = False):
        """
        Per-term log densities for a batch of constrained parameters.

        Returns:
            dict term -> (S,) values, and (when with_grad) dict name -> (S, size)
            gradients with respect to the constrained parameters
        """
        model, prior = self.model, self.model.prior
        P = {name: np.atleast_2d(params[name]) for name in self.layout.names}
        grads = {name: np.zeros_like(value) for name, value in P.items()}
        terms: Dict[str, np.ndarray] = {}

        # coefficient prior
        if prior.kind in ("horseshoe", "product"):
            coef_name = "beta" if prior.kind == "horseshoe" else "eta"
            coef, lam, tau = P[coef_name], P["lambda"], P["tau"]
            scale = lam * tau
            terms[f"prior_{coef_name}"] = normal_logpdf(coef, 0.0, scale).sum(axis=-1)
            grads[coef_name] += -coef / scale**2
            dscale = -1.0 / scale + coef**2 / scale**3
            grads["lambda"] += dscale * tau
            grads["tau"] += (dscale * lam).sum(axis=-1, keepdims=True)
            terms["prior_tau"] = half_cauchy_logpdf(tau, prior.sigma_tau).sum(axis=-1)
            grads["tau"] += -2.0 * tau / (prior.sigma_tau**2 + tau**2)
            if prior.kind == "horseshoe":
                terms["prior_lambda"] = half_cauchy_logpdf(lam, 1.0).sum(axis=-1)
                grads["lambda"] += -2.0 * lam / (1.0 + lam**2)
                theta = coef
            else:
                terms["prior_lambda"] = beta_logpdf(lam, prior.a, prior.b).sum(axis=-1)
                if prior.a != 1.0:
                    grads["lambda"] += (prior.a - 1.0) / lam
                if prior.b != 1.0:
                    grads["lambda"] -= (prior.b - 1.0) / (1.0 - lam)
                theta = coef * lam
        else:
            theta = P["beta"]
            terms["prior_beta"] = normal_logpdf(theta, 0.0, prior.scale).sum(axis=-1)
            grads["beta"] += -theta / prior.scale**2

        beta0 = P["beta0"]
        terms["prior_beta0"] = normal_logpdf(beta0, 0.0, model.intercept_prior_scale).sum(axis=-1)
        grads["beta0"] += -beta0 / model.intercept_prior_scale**2

        sigma_y = None
        if model.family in GAUSSIAN_FAMILIES:
            if model.has_sigma_y:
                sigma_y = P["sigma_y"]
                terms["prior_sigma_y"] = half_normal_logpdf(sigma_y, model.sigma_y_prior_scale).sum(axis=-1)
                grads["sigma_y"] += -sigma_y / model.sigma_y_prior_scale**2
            else:
                sigma_y = np.full_like(beta0, model.sigma_y_fixed)

        eta = beta0 + theta @ self._X.T
        if self._subjects is not None:
            b = P["beta0_random"]
            s = model.random_intercept_prior_scale
            terms["prior_beta0_random"] = normal_logpdf(b, 0.0, s).sum(axis=-1)
            grads["beta0_random"] += -b / s**2
            eta = eta + (self._subjects @ b.T).T

        terms["likelihood"] = log_likelihood(model.family, self._y, eta, sigma_y)
        if not with_grad:
            return terms, None

        if model.family in GAUSSIAN_FAMILIES:
            resid = self._y - eta
            g_eta = resid / sigma_y**2
            if model.has_sigma_y:
                grads["sigma_y"] += (-1.0 / sigma_y + resid**2 / sigma_y**3).sum(axis=-1, keepdims=True)
        elif model.family == "logistic":
            g_eta = self._y - expit(eta)
        else:
            g_eta = self._y - np.exp(eta)

        g_theta = g_eta @ self._X
        if prior.kind == "product":
            grads["eta"] += g_theta * P["lambda"]
            grads["lambda"] += g_theta * P["eta"]
        else:
            grads["beta"] += g_theta
        grads["beta0"] += g_eta.sum(axis=-1, keepdims=True)
        if self._subjects is not None:
            grads["beta0_random"] += (self._subjects.T @ g_eta.T).T
        return terms, grads

    def log_prob_and_grad(self, u: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        u = np.atleast_2d(u)
        params, log_jac, dx_du, dlogjac = constrain(u, self.layout)
        terms, grads = self.terms(params, with_grad=True)
        value = sum(terms.values()) + log_jac
        grad_u = dlogjac.copy()
        for entry in self.layout:
            grad_u[:, entry.slice] += grads[entry.name] * dx_du[entry.name]
        return value, grad_u


def bind_model(model: ModelSpec, data: Dataset) -> RegressionDensity:
    """Bind a model to a dataset, producing the ADVI target."""
    return RegressionDensity(model, data)


def log_joint_terms(
    model: ModelSpec,
    params: Union[ParameterSet, Mapping[str, np.ndarray]],
    data: Dataset,
    layout: Optional[ParameterLayout] = None,
) -> Dict[str, np.ndarray]:
    """Log-likelihood and every log-prior term, keyed by term name."""
    if not isinstance(params, ParameterSet):
        params = ParameterSet({k: np.asarray(v, dtype=float) for k, v in params.items()})
    density = RegressionDensity(model, data, layout)
    missing = [name for name in density.layout.names if name not in params]
    if missing:
        raise ModelError(f"parameters {missing} are missing for the {model.family} model")
    terms, _ = density.terms(params)
    batched = np.ndim(params[density.layout.names[0]]) > 1
    return {name: (value if batched else value[0]) for name, value in terms.items()}


def log_joint(
    model: ModelSpec,
    params: Union[ParameterSet, Mapping[str, np.ndarray]],
    data: Dataset,
    layout: Optional[ParameterLayout] = None,
):
    """
    Log-likelihood plus all log-prior terms at constrained parameter values.

    Raises:
        NonFiniteError: naming the first non-finite term
    """
    terms = log_joint_terms(model, params, data, layout)
    for name, value in terms.items():
        if not np.all(np.isfinite(value)):
            raise NonFiniteError(f"log joint term {name} is not finite", term=name)
    return sum(terms.values())
