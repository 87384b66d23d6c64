#!/usr/bin/env python3
"""
mirrorfdr command line: simulate data, fit a posterior, select covariates,
run baselines and whole benchmarks.
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

from rich.console import Console
from rich.table import Table

from .config import (
    METHODS,
    AdviConfig,
    BenchmarkConfig,
    ModelSpec,
    ScenarioConfig,
    configure_logging,
    get_settings,
    load_advi_config,
    load_benchmark_config,
    load_model_spec,
    load_scenario_config,
    validate_configuration,
)
from .errors import ConfigurationError, MirrorFdrError
from .eval.runner import MethodContext, run_benchmark, run_method
from .eval.summary import BenchmarkSummary, directional_check, summarize, write_results
from .inference.advi import fit
from .inference.io import load_posterior, save_posterior
from .model.coefficients import coefficient_draws
from .model.densities import bind_model
from .model.prep import standardize_dataset
from .selection.mirror import SelectionResult, bayes_ms
from .sim.io import read_covariance, read_dataset, write_dataset
from .sim.scenarios import scenario_covariance, simulate

logger = logging.getLogger(__name__)

console = Console()


def _write_selection(result: SelectionResult, out: Optional[str]):
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(result.to_dict(), indent=2))
        console.print(f"📄 Selection written to {path}")


def get_selection_table(result: SelectionResult) -> Table:
    table = Table(title=f"Selection ({result.method}, alpha={result.alpha})")
    table.add_column("Field", justify="left", style="cyan")
    table.add_column("Value", justify="left", style="magenta")
    table.add_row("t_alpha", "no-threshold" if result.t_alpha is None else f"{result.t_alpha:.4g}")
    table.add_row("tau_alpha", "no-threshold" if result.tau_alpha is None else f"{result.tau_alpha:.4g}")
    if result.estimated_fdp_at_tau is not None:
        table.add_row("estimated FDP", f"{result.estimated_fdp_at_tau:.4f}")
    table.add_row("selected", str(result.n_selected))
    table.add_row("indices", ", ".join(str(j + 1) for j in result.selected[:30]))
    return table


def get_summary_table(summary: BenchmarkSummary) -> Table:
    table = Table(title="Benchmark summary")
    for column, style in (("Scenario", "cyan"), ("Method", "magenta")):
        table.add_column(column, justify="left", style=style)
    for column in ("R", "failed", "FDP mean", "FDP median", "TPR mean", "TPR median"):
        table.add_column(column, justify="right")
    for _, row in summary.table.iterrows():
        table.add_row(
            row["scenario"],
            row["method"],
            str(row["replicates"]),
            str(row["n_failed"]),
            f"{row['fdp_mean']:.3f}",
            f"{row['fdp_median']:.3f}",
            f"{row['tpr_mean']:.3f}",
            f"{row['tpr_median']:.3f}",
        )
    return table


def run_simulate(args) -> bool:
    scenario = load_scenario_config(args.config) if args.config else ScenarioConfig()
    overrides = {
        key: getattr(args, key)
        for key in ("family", "n", "p", "p1", "M", "rho", "beta0", "seed")
        if getattr(args, key) is not None
    }
    if overrides:
        try:
            scenario = ScenarioConfig.model_validate({**scenario.model_dump(), **overrides})
        except ValueError as exc:
            raise ConfigurationError(str(exc)) from exc
    sigma = scenario_covariance(scenario)
    dataset = simulate(scenario, sigma)
    path = write_dataset(dataset, args.out, sigma)
    console.print(
        f"✅ Simulated {scenario.family} data: {dataset.n_rows} rows, p={dataset.p}, "
        f"p1={dataset.truth.p1} -> {path}"
    )
    return True


def run_fit(args) -> bool:
    dataset = read_dataset(args.data)
    model = load_model_spec(args.model) if args.model else ModelSpec(family=dataset.family or "linear")
    advi = load_advi_config(args.advi) if args.advi else AdviConfig()
    if args.seed is not None:
        advi = advi.model_copy(update={"seed": args.seed})
    standardized, _, scale = standardize_dataset(dataset)
    console.print(f"🚀 Fitting {model.family} model with {model.prior.kind} prior ({advi.iterations} iterations)")
    trace = fit(bind_model(model, standardized), advi)
    save_posterior(trace, args.out, model, scale)
    final = trace.elbo[-1] if len(trace.elbo) else float("nan")
    console.print(f"✅ Posterior written to {args.out} (smoothed ELBO {final:.3f}, {trace.wall_time:.1f}s)")
    return True


def run_select(args) -> bool:
    stored = load_posterior(args.posterior)
    q = stored.posterior
    draws = coefficient_draws(q, stored.model, q.layout, args.draws, [args.seed, 2], stored.scale)
    result = bayes_ms(draws, args.alpha, [args.seed, 3])
    console.print(get_selection_table(result))
    _write_selection(result, args.out)
    return True


def run_baseline(args) -> bool:
    dataset = read_dataset(args.data)
    sigma = read_covariance(args.sigma) if args.sigma else None
    if args.method == "knockoff" and sigma is None:
        raise ConfigurationError("the knockoff baseline needs --sigma (the true covariance)")
    context = MethodContext(seed=args.seed, alpha=args.alpha, sigma=sigma)
    result = run_method(args.method, dataset, context)
    console.print(get_selection_table(result))
    _write_selection(result, args.out)
    return True


def resolve_workers(cli_workers: Optional[int]) -> int:
    """MIRRORFDR_WORKERS, when set, overrides --workers."""
    settings = get_settings()
    if os.environ.get("MIRRORFDR_WORKERS", "").strip():
        return settings.workers
    return cli_workers if cli_workers is not None else settings.workers


def run_benchmark_command(args) -> bool:
    config = load_benchmark_config(args.config)
    updates = {}
    if args.methods:
        updates["methods"] = [m.strip() for m in args.methods.split(",") if m.strip()]
    if args.replicates is not None:
        updates["replicates"] = args.replicates
    if args.alpha is not None:
        updates["alpha"] = args.alpha
    if args.base_seed is not None:
        updates["base_seed"] = args.base_seed
    if updates:
        try:
            config = BenchmarkConfig.model_validate({**config.model_dump(), **updates})
        except ValueError as exc:
            raise ConfigurationError(str(exc)) from exc

    workers = resolve_workers(args.workers)
    out = args.out or get_settings().results_dir
    console.print(f"📊 Benchmark {config.scenario_id}: {config.replicates} replicates, methods {config.methods}")
    reports = run_benchmark(config, workers)
    summary = summarize(reports)
    write_results(reports, summary, out)
    console.print(get_summary_table(summary))
    for scenario, passed in directional_check(summary).items():
        marker = "✅" if passed else "⚠️ "
        console.print(f"{marker} {scenario}: bayesms TPR {'exceeds' if passed else 'does not exceed'} ds TPR")
    console.print(f"🎉 Results written to {out}")
    return True


def run_config(args) -> bool:
    settings = get_settings()
    table = Table(title="mirrorfdr settings")
    table.add_column("Setting", justify="left", style="cyan")
    table.add_column("Value", justify="left", style="magenta")
    table.add_row("version", settings.version)
    table.add_row("workers", str(settings.workers))
    table.add_row("results_dir", settings.results_dir)
    table.add_row("log level", settings.logging.level)
    console.print(table)
    return validate_configuration(args.config)


COMMANDS = {
    "simulate": run_simulate,
    "fit": run_fit,
    "select": run_select,
    "baseline": run_baseline,
    "benchmark": run_benchmark_command,
    "config": run_config,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mirrorfdr",
        description="FDR-controlled variable selection with the Bayesian mirror statistic",
    )
    parser.add_argument("--log-level", default=None, help="Override the configured log level")
    commands = parser.add_subparsers(dest="command", required=True)

    simulate_cmd = commands.add_parser("simulate", help="Simulate one scenario dataset")
    simulate_cmd.add_argument("--config", help="Scenario or benchmark JSON (defaults to the linear scenario)")
    simulate_cmd.add_argument("--family", choices=["linear", "random_intercept", "logistic", "poisson"])
    for flag, kind in (("--n", int), ("--p", int), ("--p1", int), ("--M", int), ("--rho", float), ("--beta0", float)):
        simulate_cmd.add_argument(flag, type=kind, default=None)
    simulate_cmd.add_argument("--seed", type=int, default=None, help="Override the scenario seed")
    simulate_cmd.add_argument("--out", required=True, help="Output directory")

    fit_cmd = commands.add_parser("fit", help="Fit a mean-field ADVI posterior")
    fit_cmd.add_argument("--data", required=True, help="Dataset directory")
    fit_cmd.add_argument("--model", help="Model spec JSON")
    fit_cmd.add_argument("--advi", help="ADVI settings JSON")
    fit_cmd.add_argument("--seed", type=int, default=None)
    fit_cmd.add_argument("--out", required=True, help="Posterior JSON path")

    select_cmd = commands.add_parser("select", help="BayesMS selection from a fitted posterior")
    select_cmd.add_argument("--posterior", required=True)
    select_cmd.add_argument("--alpha", type=float, default=0.1)
    select_cmd.add_argument("--draws", type=int, default=2000, help="Posterior draws (2N)")
    select_cmd.add_argument("--seed", type=int, default=0)
    select_cmd.add_argument("--out", help="Selection JSON path")

    baseline_cmd = commands.add_parser("baseline", help="Run a frequentist baseline")
    baseline_cmd.add_argument("--method", choices=["ds", "knockoff", "bh"], required=True)
    baseline_cmd.add_argument("--data", required=True)
    baseline_cmd.add_argument("--alpha", type=float, default=0.1)
    baseline_cmd.add_argument("--seed", type=int, default=0)
    baseline_cmd.add_argument("--sigma", help="True covariance CSV (knockoff)")
    baseline_cmd.add_argument("--out", help="Selection JSON path")

    bench_cmd = commands.add_parser("benchmark", help="Run replicates and summarise FDP/TPR")
    bench_cmd.add_argument("--config", required=True, help="Benchmark JSON")
    bench_cmd.add_argument("--methods", help=f"Comma separated subset of {','.join(METHODS)}")
    bench_cmd.add_argument("--replicates", type=int, default=None)
    bench_cmd.add_argument("--alpha", type=float, default=None)
    bench_cmd.add_argument("--base-seed", type=int, default=None)
    bench_cmd.add_argument("--workers", type=int, default=None)
    bench_cmd.add_argument("--out", help="Results directory")

    config_cmd = commands.add_parser("config", help="Show settings and validate a benchmark config")
    config_cmd.add_argument("--config", help="Benchmark JSON to validate")
    return parser


def main(argv: Optional[List[str]] = None) -> bool:
    """Main entry point with CLI argument parsing."""
    args = build_parser().parse_args(argv)
    logging_config = get_settings().logging
    if args.log_level:
        logging_config = logging_config.model_copy(update={"level": args.log_level})
    configure_logging(logging_config)
    try:
        return COMMANDS[args.command](args)
    except MirrorFdrError as exc:
        console.print(f"❌ [bold red]{type(exc).__name__}:[/bold red] {exc}")
        return False


def run():
    sys.exit(0 if main() else 1)


if __name__ == "__main__":
    run()
