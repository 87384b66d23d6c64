"""
mirrorfdr: false discovery rate control for Bayesian variable selection
with the mirror statistic, plus the frequentist baselines it is compared to.
"""

from .config import (
    AdviConfig,
    BenchmarkConfig,
    HorseshoePrior,
    ModelSpec,
    NormalPrior,
    ProductPrior,
    ScenarioConfig,
    get_settings,
)
from .errors import MirrorFdrError

__version__ = "0.1.0"

__all__ = [
    "AdviConfig",
    "BenchmarkConfig",
    "HorseshoePrior",
    "MirrorFdrError",
    "ModelSpec",
    "NormalPrior",
    "ProductPrior",
    "ScenarioConfig",
    "get_settings",
]
