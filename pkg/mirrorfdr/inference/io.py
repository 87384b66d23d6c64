"""
Posterior JSON files written by `mirrorfdr fit` and read by `mirrorfdr select`.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np
from pydantic import ValidationError

from ..config import ModelSpec
from ..errors import ConfigurationError
from ..model.layout import ParameterLayout
from .advi import FitTrace
from .posterior import VariationalPosterior

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


@dataclass
class StoredPosterior:
    posterior: VariationalPosterior
    model: ModelSpec
    elbo_trace: np.ndarray
    scale: Optional[np.ndarray] = None


def save_posterior(
    trace: FitTrace,
    path: PathLike,
    model: ModelSpec,
    scale: Optional[np.ndarray] = None,
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    q = trace.posterior
    payload = {
        "layout": [list(entry) for entry in q.layout.to_list()],
        "locations": q.locations.tolist(),
        "log_scales": q.log_scales.tolist(),
        "elbo_trace": trace.elbo.tolist(),
        "model": model.model_dump(mode="json"),
        "scale": None if scale is None else np.asarray(scale).tolist(),
    }
    path.write_text(json.dumps(payload))
    logger.info("Wrote posterior with %d coordinates to %s", q.dim, path)
    return path


def load_posterior(path: PathLike) -> StoredPosterior:
    """
    Raises:
        ConfigurationError: missing file, malformed JSON or inconsistent contents
    """
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"posterior file not found: {path}")
    try:
        payload = json.loads(path.read_text())
        layout = ParameterLayout.from_list(payload["layout"])
        posterior = VariationalPosterior(
            np.asarray(payload["locations"], dtype=float),
            np.asarray(payload["log_scales"], dtype=float),
            layout,
        )
        model = ModelSpec.model_validate(payload["model"])
    except (json.JSONDecodeError, KeyError, TypeError, ValueError, ValidationError) as e:
        raise ConfigurationError(f"invalid posterior file {path}: {e}") from e
    scale = payload.get("scale")
    return StoredPosterior(
        posterior=posterior,
        model=model,
        elbo_trace=np.asarray(payload.get("elbo_trace", []), dtype=float),
        scale=None if scale is None else np.asarray(scale, dtype=float),
    )
