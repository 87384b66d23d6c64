from .posterior import VariationalPosterior, sample_posterior
from .optim import DecayedAdaGrad
from .advi import FitTrace, elbo_estimate, elbo_gradient, fit, fit_model, initial_posterior
from .io import StoredPosterior, load_posterior, save_posterior

__all__ = [
    "DecayedAdaGrad",
    "FitTrace",
    "StoredPosterior",
    "VariationalPosterior",
    "elbo_estimate",
    "elbo_gradient",
    "fit",
    "fit_model",
    "initial_posterior",
    "load_posterior",
    "sample_posterior",
    "save_posterior",
]
