"""
Aggregation of replicate reports and CSV emission.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Union

import pandas as pd

from .runner import ReplicateReport

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ["scenario", "method", "replicate", "seed", "fdp", "tpr", "n_selected", "runtime_s", "error"]
STATISTICS = ("mean", "median", "q10", "q90")


@dataclass
class BenchmarkSummary:
    """One row per (scenario, method) with fdp/tpr mean, median, q10, q90."""
    table: pd.DataFrame

    def row(self, scenario: str, method: str) -> pd.Series:
        match = self.table[(self.table["scenario"] == scenario) & (self.table["method"] == method)]
        if match.empty:
            raise KeyError(f"no summary for ({scenario}, {method})")
        return match.iloc[0]

    @property
    def methods(self) -> List[str]:
        return list(self.table["method"].unique())

    @property
    def scenarios(self) -> List[str]:
        return list(self.table["scenario"].unique())


def reports_frame(reports: Iterable[ReplicateReport]) -> pd.DataFrame:
    frame = pd.DataFrame([r.to_dict() for r in reports], columns=REPORT_COLUMNS)
    return frame.sort_values(["scenario", "method", "replicate"], kind="stable").reset_index(drop=True)


def _describe(values: pd.Series) -> Dict[str, float]:
    return {
        "mean": values.mean(),
        "median": values.median(),
        "q10": values.quantile(0.1, interpolation="linear"),
        "q90": values.quantile(0.9, interpolation="linear"),
    }


def summarize(reports: Iterable[ReplicateReport]) -> BenchmarkSummary:
    """
    Group by (scenario, method). Failed reports count towards `replicates` and
    `n_failed` but not towards the statistics.
    """
    frame = reports_frame(reports)
    if frame.empty:
        raise ValueError("cannot summarize an empty report list")
    rows = []
    for (scenario, method), group in frame.groupby(["scenario", "method"], sort=True):
        ok = group[group["error"].isna()]
        row = {
            "scenario": scenario,
            "method": method,
            "replicates": len(group),
            "n_failed": len(group) - len(ok),
        }
        for metric in ("fdp", "tpr"):
            for stat, value in _describe(ok[metric].astype(float)).items():
                row[f"{metric}_{stat}"] = value
        row["n_selected_mean"] = ok["n_selected"].mean()
        row["runtime_s_mean"] = ok["runtime_s"].mean()
        rows.append(row)
    return BenchmarkSummary(pd.DataFrame(rows))


def _plot_frame(frame: pd.DataFrame, metric: str) -> pd.DataFrame:
    ok = frame[frame["error"].isna()]
    return ok[["scenario", "method", "replicate", metric]].rename(columns={metric: "value"}).assign(metric=metric)


def write_results(
    reports: Iterable[ReplicateReport], summary: BenchmarkSummary, out_dir: Union[str, Path]
) -> Dict[str, Path]:
    """Write reports.csv, summary.csv and the long-format plotdata_fdr.csv / plotdata_tpr.csv."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    frame = reports_frame(reports)
    paths = {
        "reports": out / "reports.csv",
        "summary": out / "summary.csv",
        "plotdata_fdr": out / "plotdata_fdr.csv",
        "plotdata_tpr": out / "plotdata_tpr.csv",
    }
    frame.to_csv(paths["reports"], index=False)
    summary.table.to_csv(paths["summary"], index=False)
    _plot_frame(frame, "fdp").to_csv(paths["plotdata_fdr"], index=False)
    _plot_frame(frame, "tpr").to_csv(paths["plotdata_tpr"], index=False)
    logger.info("Wrote %d reports to %s", len(frame), out)
    return paths


def directional_check(summary: BenchmarkSummary, better: str = "bayesms", worse: str = "ds") -> Dict[str, bool]:
    """
    Per scenario, whether `better` has a higher mean TPR than `worse`.

    Informational only: a failure is logged as a warning.
    """
    outcome = {}
    for scenario in summary.scenarios:
        try:
            high = summary.row(scenario, better)["tpr_mean"]
            low = summary.row(scenario, worse)["tpr_mean"]
        except KeyError:
            continue
        passed = bool(high > low)
        outcome[scenario] = passed
        if not passed:
            logger.warning(
                "%s: %s mean TPR %.3f does not exceed %s mean TPR %.3f", scenario, better, high, worse, low
            )
    return outcome
