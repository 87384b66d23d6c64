from .densities import (
    JointDensity,
    RegressionDensity,
    bind_model,
    half_cauchy_logpdf,
    log_joint,
    log_joint_terms,
    log_likelihood,
    normal_logpdf,
)
from .layout import ParameterLayout, ParameterSet, layout_for, to_constrained, to_unconstrained
from .prep import standardize, standardize_dataset
from .coefficients import coefficient_draws, coefficients_from_params

__all__ = [
    "JointDensity",
    "ParameterLayout",
    "ParameterSet",
    "RegressionDensity",
    "bind_model",
    "coefficient_draws",
    "coefficients_from_params",
    "half_cauchy_logpdf",
    "layout_for",
    "log_joint",
    "log_joint_terms",
    "log_likelihood",
    "normal_logpdf",
    "standardize",
    "standardize_dataset",
    "to_constrained",
    "to_unconstrained",
]
