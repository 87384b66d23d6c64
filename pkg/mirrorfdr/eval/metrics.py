from typing import Iterable, Tuple

import numpy as np

from ..errors import SelectionError
from ..sim.scenarios import GroundTruth


def compute_metrics(selected: Iterable[int], truth: GroundTruth) -> Tuple[float, float]:
    """
    False discovery proportion and true positive rate of a selection (0-based indices).

    FDP uses a max(n_selected, 1) denominator, so an empty selection scores 0;
    TPR is 1 when the truth has no active covariates.
    """
    selected = np.unique(np.asarray(list(selected), dtype=int))
    if selected.size and (selected.min() < 0 or selected.max() >= truth.p):
        raise SelectionError(f"selected indices must lie in [0, {truth.p})")
    hits = int(truth.active_mask[selected].sum())
    fdp = (selected.size - hits) / max(selected.size, 1)
    tpr = 1.0 if truth.p1 == 0 else hits / truth.p1
    return float(fdp), float(tpr)
