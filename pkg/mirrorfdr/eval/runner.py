"""
Replicate orchestration: simulate, run each selection method, score it.

Replicate r uses seed base_seed + r for simulation, fitting and selection.
Every (method, replicate) pair yields exactly one ReplicateReport; failures
are recorded in the report's `error` field instead of being raised.
"""

import logging
import multiprocessing
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from ..config import METHODS, AdviConfig, BenchmarkConfig, ModelSpec, ScenarioConfig
from ..errors import BaselineError, MirrorFdrError
from ..inference.advi import fit
from ..model.coefficients import coefficient_draws
from ..model.densities import bind_model
from ..model.prep import standardize_dataset
from ..selection.knockoffs import knockoff_select
from ..selection.mirror import SelectionResult, bayes_ms
from ..selection.multiple_testing import bh_select, regression_pvalues
from ..selection.splitting import ds_select
from ..sim.covariance import substream
from ..sim.scenarios import Dataset, scenario_covariance, simulate
from .metrics import compute_metrics

logger = logging.getLogger(__name__)

QUARANTINED = (MirrorFdrError, FloatingPointError, np.linalg.LinAlgError)


@dataclass
class ReplicateReport:
    scenario: str
    method: str
    replicate: int
    seed: int
    fdp: float
    tpr: float
    n_selected: int
    runtime_s: float
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class MethodContext:
    """Everything a method needs beyond the dataset."""
    seed: int
    alpha: float = 0.1
    model: Optional[ModelSpec] = None
    advi: AdviConfig = field(default_factory=AdviConfig)
    draws: int = 2000
    sigma: Optional[np.ndarray] = None


def _run_bayesms(dataset: Dataset, context: MethodContext) -> SelectionResult:
    model = context.model or ModelSpec(family=dataset.family)
    standardized, _, scale = standardize_dataset(dataset)
    advi = context.advi.model_copy(update={"seed": context.seed})
    trace = fit(bind_model(model, standardized), advi)
    draws = coefficient_draws(
        trace.posterior, model, trace.posterior.layout, context.draws, substream(context.seed, 2), scale
    )
    return bayes_ms(draws, context.alpha, substream(context.seed, 3))


def _run_bh(dataset: Dataset, context: MethodContext) -> SelectionResult:
    selected = bh_select(regression_pvalues(dataset.X, dataset.y), context.alpha)
    indicator = np.zeros(dataset.p)
    indicator[selected] = 1.0
    return SelectionResult(
        t_alpha=None,
        inclusion_probs=indicator,
        tau_alpha=None,
        selected=selected,
        alpha=context.alpha,
        method="bh",
    )


def run_method(method: str, dataset: Dataset, context: MethodContext) -> SelectionResult:
    """
    Dispatch one selection method.

    Raises:
        BaselineError: unknown method
    """
    if method == "bayesms":
        return _run_bayesms(dataset, context)
    if method == "ds":
        return ds_select(dataset, context.alpha, context.seed)
    if method == "knockoff":
        return knockoff_select(dataset, context.sigma, context.alpha, context.seed)
    if method == "bh":
        return _run_bh(dataset, context)
    raise BaselineError(f"unknown method {method}; choose from {list(METHODS)}")


def _failed(scenario_id: str, method: str, replicate: int, seed: int, runtime: float, error: BaseException):
    return ReplicateReport(
        scenario=scenario_id,
        method=method,
        replicate=replicate,
        seed=seed,
        fdp=float("nan"),
        tpr=float("nan"),
        n_selected=0,
        runtime_s=runtime,
        error=f"{type(error).__name__}: {error}",
    )


def run_replicate(config: BenchmarkConfig, replicate: int, sigma: Optional[np.ndarray] = None) -> List[ReplicateReport]:
    """All methods on one simulated dataset."""
    seed = config.base_seed + replicate
    scenario_id = config.scenario_id
    if sigma is None:
        sigma = scenario_covariance(config.scenario)
    try:
        dataset = simulate(config.scenario.model_copy(update={"seed": seed}), sigma)
    except QUARANTINED as e:
        logger.warning("replicate %d: simulation failed (%s)", replicate, e)
        return [_failed(scenario_id, m, replicate, seed, 0.0, e) for m in config.methods]

    context = MethodContext(
        seed=seed,
        alpha=config.alpha,
        model=config.model,
        advi=config.advi,
        draws=config.draws,
        sigma=sigma,
    )
    reports = []
    for method in config.methods:
        start = time.perf_counter()
        try:
            result = run_method(method, dataset, context)
        except QUARANTINED as e:
            runtime = time.perf_counter() - start
            logger.warning("replicate %d, %s failed: %s", replicate, method, e)
            reports.append(_failed(scenario_id, method, replicate, seed, runtime, e))
            continue
        runtime = time.perf_counter() - start
        fdp, tpr = compute_metrics(result.selected, dataset.truth)
        logger.info(
            "replicate %d, %s: selected %d, fdp %.3f, tpr %.3f (%.1fs)",
            replicate, method, result.n_selected, fdp, tpr, runtime,
        )
        reports.append(
            ReplicateReport(
                scenario=scenario_id,
                method=method,
                replicate=replicate,
                seed=seed,
                fdp=fdp,
                tpr=tpr,
                n_selected=result.n_selected,
                runtime_s=runtime,
            )
        )
    return reports


def _run_replicate_task(args):
    config, replicate, sigma = args
    return run_replicate(config, replicate, sigma)


def run_benchmark(config: BenchmarkConfig, workers: int = 1) -> List[ReplicateReport]:
    """
    Run every replicate of a benchmark config, concurrently when workers > 1.

    Reports come back sorted by (replicate, method order).
    """
    sigma = scenario_covariance(config.scenario)
    tasks = [(config, r, sigma) for r in range(config.replicates)]
    logger.info(
        "Running %s: %d replicates x %s on %d worker(s)",
        config.scenario_id, config.replicates, ",".join(config.methods), workers,
    )
    if workers <= 1:
        batches = [_run_replicate_task(task) for task in tasks]
    else:
        context = multiprocessing.get_context("spawn")
        with ProcessPoolExecutor(max_workers=workers, mp_context=context) as pool:
            batches = list(pool.map(_run_replicate_task, tasks))
    order = {m: k for k, m in enumerate(config.methods)}
    reports = [report for batch in batches for report in batch]
    return sorted(reports, key=lambda r: (r.replicate, order[r.method]))


def run_replicates(
    scenario: ScenarioConfig,
    methods: Sequence[str],
    R: int,
    base_seed: int,
    alpha: float,
    model: Optional[ModelSpec] = None,
    advi: Optional[AdviConfig] = None,
    draws: int = 2000,
    workers: int = 1,
) -> List[ReplicateReport]:
    """R replicates of a scenario for each method."""
    config = BenchmarkConfig(
        scenario=scenario,
        model=model,
        advi=advi or AdviConfig(),
        alpha=alpha,
        replicates=R,
        base_seed=base_seed,
        methods=list(methods),
        draws=draws,
    )
    return run_benchmark(config, workers)
