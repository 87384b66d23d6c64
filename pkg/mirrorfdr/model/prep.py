"""
Covariate standardisation applied before model fitting.
"""

from dataclasses import replace
from typing import Tuple

import numpy as np

from ..sim.scenarios import Dataset


def standardize(X: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Centre columns and scale to unit (population) variance; constant columns keep scale 1."""
    X = np.asarray(X, dtype=float)
    center = X.mean(axis=0) if X.shape[0] else np.zeros(X.shape[1])
    scale = X.std(axis=0) if X.shape[0] else np.ones(X.shape[1])
    scale = np.where(scale > 0.0, scale, 1.0)
    return (X - center) / scale, center, scale


def standardize_dataset(data: Dataset) -> Tuple[Dataset, np.ndarray, np.ndarray]:
    """Copy of the dataset with standardised covariates; column order is unchanged."""
    Z, center, scale = standardize(data.X)
    return replace(data, X=Z), center, scale
