from .covariance import CovarianceSpec, build_block_toeplitz, rng_for, sample_mvn, substream
from .io import read_covariance, read_dataset, write_covariance, write_dataset
from .scenarios import Dataset, GroundTruth, gen_ground_truth, scenario_covariance, simulate

__all__ = [
    "CovarianceSpec",
    "Dataset",
    "GroundTruth",
    "build_block_toeplitz",
    "gen_ground_truth",
    "read_covariance",
    "read_dataset",
    "rng_for",
    "sample_mvn",
    "scenario_covariance",
    "simulate",
    "substream",
    "write_covariance",
    "write_dataset",
]
