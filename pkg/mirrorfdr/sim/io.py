"""
CSV persistence for datasets, ground truth and covariance matrices.

Layout of a dataset directory:
    data.csv   y,subject,measurement,x1..xp (subject/measurement empty when absent)
    truth.csv  j,beta,active (optional)
    meta.json  family and scalar truth parameters
    sigma.csv  covariate covariance, no header (optional)
"""

import json
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd

from ..errors import SimulationError
from .scenarios import Dataset, GroundTruth

PathLike = Union[str, Path]


def write_dataset(dataset: Dataset, directory: PathLike, sigma: Optional[np.ndarray] = None) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    frame = pd.DataFrame(dataset.X, columns=[f"x{j + 1}" for j in range(dataset.p)])
    if dataset.subject_index is not None:
        subject = pd.array(dataset.subject_index + 1, dtype="Int64")
        measurement = pd.array(dataset.measurement_index, dtype="Int64")
    else:
        subject = measurement = pd.array([pd.NA] * dataset.n_rows, dtype="Int64")
    frame.insert(0, "measurement", measurement)
    frame.insert(0, "subject", subject)
    frame.insert(0, "y", dataset.y)
    frame.to_csv(directory / "data.csv", index=False)

    meta = {"family": dataset.family}
    truth = dataset.truth
    if truth is not None:
        pd.DataFrame({
            "j": np.arange(1, truth.p + 1),
            "beta": truth.beta,
            "active": truth.active_mask.astype(int),
        }).to_csv(directory / "truth.csv", index=False)
        meta.update(beta0=truth.beta0, sigma_y=truth.sigma_y, sigma_b0R=truth.sigma_b0R)
    (directory / "meta.json").write_text(json.dumps(meta, indent=2), encoding="utf-8")

    if sigma is not None:
        write_covariance(sigma, directory / "sigma.csv")
    return directory


def read_dataset(directory: PathLike) -> Dataset:
    directory = Path(directory)
    data_path = directory / "data.csv"
    if not data_path.exists():
        raise SimulationError(f"no data.csv in {directory}")
    frame = pd.read_csv(data_path)
    x_columns = [c for c in frame.columns if c.startswith("x")]
    subject_index = measurement_index = None
    if frame["subject"].notna().all() and len(frame):
        subject_index = frame["subject"].to_numpy(dtype=int) - 1
        measurement_index = frame["measurement"].to_numpy(dtype=int)

    meta_path = directory / "meta.json"
    meta = json.loads(meta_path.read_text(encoding="utf-8")) if meta_path.exists() else {}

    truth = None
    truth_path = directory / "truth.csv"
    if truth_path.exists():
        truth_frame = pd.read_csv(truth_path).sort_values("j")
        truth = GroundTruth(
            beta=truth_frame["beta"].to_numpy(dtype=float),
            active_mask=truth_frame["active"].to_numpy(dtype=int),
            beta0=meta.get("beta0", 0.0),
            sigma_y=meta.get("sigma_y", 1.0),
            sigma_b0R=meta.get("sigma_b0R"),
        )

    return Dataset(
        y=frame["y"].to_numpy(dtype=float),
        X=frame[x_columns].to_numpy(dtype=float),
        subject_index=subject_index,
        measurement_index=measurement_index,
        truth=truth,
        family=meta.get("family"),
    )


def write_covariance(sigma: np.ndarray, path: PathLike) -> Path:
    path = Path(path)
    pd.DataFrame(np.asarray(sigma)).to_csv(path, index=False, header=False)
    return path


def read_covariance(path: PathLike) -> np.ndarray:
    return pd.read_csv(path, header=None).to_numpy(dtype=float)
