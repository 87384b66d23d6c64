from .mirror import (
    MirrorSamples,
    SelectionResult,
    WNormalApprox,
    analytic_bayes_ms,
    analytic_w_distribution,
    bayes_ms,
    folded_normal_moments,
    inclusion_probabilities,
    mirror_samples,
    mirror_transform,
    optimal_threshold,
    select_covariates,
)
from .lasso import LassoFit, glm_lasso_cv, glm_lasso_fit, lasso_cv, lasso_fit
from .splitting import ds_select, restricted_ols
from .knockoffs import KnockoffDesign, gaussian_knockoffs, knockoff_select, knockoff_threshold
from .multiple_testing import bh_select, regression_pvalues

__all__ = [
    "KnockoffDesign",
    "LassoFit",
    "MirrorSamples",
    "SelectionResult",
    "WNormalApprox",
    "analytic_bayes_ms",
    "analytic_w_distribution",
    "bayes_ms",
    "bh_select",
    "ds_select",
    "folded_normal_moments",
    "gaussian_knockoffs",
    "glm_lasso_cv",
    "glm_lasso_fit",
    "inclusion_probabilities",
    "knockoff_select",
    "knockoff_threshold",
    "lasso_cv",
    "lasso_fit",
    "mirror_samples",
    "mirror_transform",
    "optimal_threshold",
    "regression_pvalues",
    "restricted_ols",
    "select_covariates",
]
