from .metrics import compute_metrics
from .runner import MethodContext, ReplicateReport, run_benchmark, run_method, run_replicate, run_replicates
from .summary import BenchmarkSummary, directional_check, reports_frame, summarize, write_results

__all__ = [
    "BenchmarkSummary",
    "MethodContext",
    "ReplicateReport",
    "compute_metrics",
    "directional_check",
    "reports_frame",
    "run_benchmark",
    "run_method",
    "run_replicate",
    "run_replicates",
    "summarize",
    "write_results",
]
