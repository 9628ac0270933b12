"""
kmtlab command line

Subcommands: regularity, bound, couple, verify, family. Reports go to stdout
or, with --output, to a file written atomically; logs go to stderr.

Exit codes: 0 success, 1 verification failure, 2 invalid input,
3 infeasible parameters, 4 unsupported coupling strategy.
"""

import json
import logging
import sys
from functools import wraps
from typing import Any, Callable, Dict, List, Optional

import click
import pandas as pd

from bounds import (
    block_partition,
    exponential_bound_series,
    kmt_exponential_bound_uniform,
    power_bound_series,
    series_rows,
)
from config.experiment import ExperimentConfig
from coupling import STRATEGIES, LOG_WEIGHT, WEIGHTS, couple_paths, tail_estimate
from dist import child_rng
from ingestion.loaders import load_batch, load_spec, load_sweep, load_weight_sequence, parametric_sweep
from oracles import lemma_suite, partition_suite, run_batch
from regularity import exp_tail_profile, regularity_report, sakhanenko_parameter, uniform_tail_profile
from utils.exceptions import (
    InfeasibleParameterError,
    InvalidSpecError,
    KmtLabError,
    UnsupportedStrategyError,
)
from utils.helpers import atomic_write_text, frame_to_csv, to_json
from utils.performance_monitor import RunTracker

logger = logging.getLogger(__name__)

EXIT_VERIFY_FAILED = 1
EXIT_INVALID = 2
EXIT_INFEASIBLE = 3
EXIT_UNSUPPORTED = 4


def exit_code_for(error: Exception) -> int:
    if isinstance(error, UnsupportedStrategyError):
        return EXIT_UNSUPPORTED
    if isinstance(error, InvalidSpecError):
        return EXIT_INVALID
    if isinstance(error, InfeasibleParameterError):
        return EXIT_INFEASIBLE
    return EXIT_VERIFY_FAILED


def command_errors(func: Callable) -> Callable:
    """Maps kmtlab errors to exit codes after logging them"""

    @wraps(func)
    def wrapper(*args, **kwargs):
        with RunTracker(func.__name__.replace("_command", "")):
            try:
                return func(*args, **kwargs)
            except KmtLabError as e:
                code = exit_code_for(e)
                logger.error(f"❌ {e}")
                sys.exit(code)

    return wrapper


def parse_grid(text: str, cast: Callable = float) -> List:
    """'1,2,5' -> [1.0, 2.0, 5.0]"""
    try:
        values = [cast(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise InvalidSpecError(f"malformed grid '{text}': {e}") from e
    if not values:
        raise InvalidSpecError(f"empty grid '{text}'")
    return values


def emit(config: ExperimentConfig, payload: Dict[str, Any], frame: Optional[pd.DataFrame] = None):
    """Writes the report in the configured format"""
    if config.output.format == "csv":
        if frame is None:
            frame = pd.DataFrame([{k: v for k, v in payload.items() if not isinstance(v, (dict, list))}])
        text = frame_to_csv(frame)
    else:
        text = to_json({"config": config.echo(), "report": payload})
    if config.output.path:
        atomic_write_text(config.output.path, text)
        logger.info(f"✅ report written to {config.output.path}")
    else:
        click.echo(text, nl=False)


def output_options(func: Callable) -> Callable:
    func = click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
                        show_default=True, help="Report format")(func)
    func = click.option("--output", "-o", type=click.Path(dir_okay=False), default=None,
                        help="Report file (stdout when omitted)")(func)
    return func


@click.group()
@click.option("--log-level", default=None, help="Overrides LOG_LEVEL (DEBUG, INFO, WARNING, ...)")
def cli(log_level: Optional[str]):
    """kmtlab: KMT-type strong approximation bounds, regularity parameters and couplings"""
    if log_level:
        logging.getLogger().setLevel(log_level.upper())


@cli.command("regularity")
@click.argument("spec")
@click.option("--tol", type=float, default=None, help="Sakhanenko bisection tolerance")
@click.option("--qmax", type=int, default=None, help="Bernstein scan limit")
@click.option("--ubar-sigma", type=float, default=None, help="Variance floor for the relation checks")
@click.option("--t", "t", type=float, default=None, help="Tilt of the exponential-moment pair")
@output_options
@command_errors
def regularity_command(spec, tol, qmax, ubar_sigma, t, output, fmt):
    """Sakhanenko and Bernstein parameters of SPEC (JSON text or file)"""
    config = ExperimentConfig.build("regularity", {"spec": spec, "tol": tol, "qmax": qmax,
                                                   "ubar_sigma": ubar_sigma, "t": t}, output, fmt)
    law = load_spec(spec)
    logger.info(f"🚀 regularity of {law.label}")
    report = regularity_report(law, tol=tol, q_max=qmax, ubar_sigma=ubar_sigma, t=t)
    frame = report.relations.to_frame() if report.relations is not None else None
    emit(config, report.to_dict(), frame)


@cli.command("bound")
@click.option("--theorem", type=click.Choice(["exp", "power"]), required=True)
@click.option("--spec", default=None,
              help="Spec whose Sakhanenko parameter bounds lambda and whose sigma feeds the exp bound")
@click.option("--lam", type=float, default=None, help="Sakhanenko parameter lambda")
@click.option("--sigma", type=float, default=None, help="Standard deviation")
@click.option("--c", "c", type=float, default=None, help="Universal constant c")
@click.option("--lambda-bar", type=float, default=None, help="Upper limit on lambda")
@click.option("--uniform", is_flag=True, help="Distribution-uniform form at z = C_delta")
@click.option("--delta", type=float, default=0.5, show_default=True)
@click.option("--z-grid", default="1,2,5,10,20", show_default=True)
@click.option("--m-grid", default=None, help="Start indices (default 4,20,84 / 1,10,100)")
@click.option("--weights", type=click.Path(dir_okay=False), default=None, help="Weight CSV for the power bound")
@click.option("--sidecar", type=click.Path(dir_okay=False), default=None, help="Tail bound JSON of the weights")
@click.option("--eps-grid", default="1", show_default=True)
@click.option("--q", type=float, default=3.0, show_default=True)
@click.option("--cq", type=float, default=None, help="Constant C(q)")
@output_options
@command_errors
def bound_command(theorem, spec, lam, sigma, c, lambda_bar, uniform, delta, z_grid, m_grid, weights, sidecar,
                  eps_grid, q, cq, output, fmt):
    """Evaluates a bound over a parameter grid; one row per grid point"""
    params = {"theorem": theorem, "spec": spec, "lam": lam, "sigma": sigma, "c": c, "lambda_bar": lambda_bar,
              "uniform": uniform, "delta": delta, "z_grid": z_grid, "m_grid": m_grid, "weights": weights,
              "sidecar": sidecar, "eps_grid": eps_grid, "q": q, "cq": cq}
    config = ExperimentConfig.build("bound", params, output, fmt)
    if theorem == "exp":
        if spec is not None:
            law = load_spec(spec)
            lambda_bar = sakhanenko_parameter(law) if lambda_bar is None else lambda_bar
            # lam < lambda_bar strictly; half of it by default
            lam = lambda_bar / 2.0 if lam is None else lam
            sigma = law.law.sigma if sigma is None else sigma
        if lam is None or sigma is None:
            raise InvalidSpecError("the exp bound needs --lam and --sigma, or --spec")
        m_values = parse_grid(m_grid or "4,20,84", int)
        if uniform:
            values = [kmt_exponential_bound_uniform(lam, sigma, m, c, delta, lambda_bar) for m in m_values]
        else:
            values = exponential_bound_series(lam, sigma, parse_grid(z_grid), m_values, c, lambda_bar)
    else:
        if weights is None:
            raise InvalidSpecError("the power bound needs --weights")
        sequence = load_weight_sequence(weights, sidecar)
        if sequence.a is None or sequence.ubar_a is None:
            raise InvalidSpecError(f"{weights}: the power bound needs columns a_k and ubar_a_k")
        partition = block_partition(sequence.u, sequence.tail)
        values = power_bound_series(partition, sequence.a, sequence.ubar_a, parse_grid(m_grid or "1,10,100", int),
                                    parse_grid(eps_grid), cq, q)
    rows = series_rows(values)
    vacuous = sum(1 for row in rows if row["vacuous"])
    if vacuous:
        logger.warning(f"⚠️ {vacuous} of {len(rows)} rows are vacuous")
    warnings = sorted({w for v in values for w in v.warnings})
    logger.info(f"📊 {theorem} bound: {len(rows)} rows")
    emit(config, {"theorem": theorem, "rows": rows, "warnings": warnings}, pd.DataFrame(rows))


@cli.command("couple")
@click.argument("spec")
@click.option("--strategy", required=True, help=f"Coupling strategy: {', '.join(sorted(STRATEGIES))}")
@click.option("--weight", type=click.Choice(list(WEIGHTS)), default=LOG_WEIGHT, show_default=True)
@click.option("--q", type=float, default=None, help="Moment order of the power weight")
@click.option("--m", "m", type=int, default=4, show_default=True)
@click.option("--K", "K", type=int, default=1024, show_default=True)
@click.option("--z", "z", type=float, default=1.0, show_default=True)
@click.option("--reps", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=None, help="Master seed (default KMTLAB_SEED)")
@click.option("--workers", type=int, default=None, help="Processes (default WORKERS)")
@click.option("--run-csv", type=click.Path(dir_okay=False), default=None, help="Paths of replication 0 as CSV")
@output_options
@command_errors
def couple_command(spec, strategy, weight, q, m, K, z, reps, seed, workers, run_csv, output, fmt):
    """Monte Carlo tail estimate of the weighted discrepancy supremum"""
    params = {"spec": spec, "strategy": strategy, "weight": weight, "q": q, "m": m, "K": K, "z": z,
              "reps": reps, "run_csv": run_csv}
    config = ExperimentConfig.build("couple", params, output, fmt, seed, workers)
    law = load_spec(spec)
    logger.info(f"🚀 coupling {law.label} with {strategy}: K={K}, reps={reps}, workers={config.workers}")
    estimate = tail_estimate(law, strategy, weight, m, K, z, reps, config.seed, q, config.workers)
    if run_csv:
        run = couple_paths(law, K, strategy, config.seed, rng=child_rng(config.seed, 0))
        atomic_write_text(run_csv, frame_to_csv(run.to_frame()))
    row = {"spec": law.label, **{k: v for k, v in estimate.params.items() if k != "spec"}}
    row.update({"p_hat": estimate.p_hat, "ci_low": estimate.ci_low, "ci_high": estimate.ci_high, "reps": reps})
    emit(config, estimate.to_dict(), pd.DataFrame([row]))


@cli.command("verify")
@click.option("--suite", type=click.Choice(["lemmas", "partitions", "all"]), default="all", show_default=True)
@click.option("--cases", type=int, default=10_000, show_default=True, help="Random cases per battery")
@click.option("--partition-cases", type=int, default=100, show_default=True, help="Random weight sequences")
@click.option("--seed", type=int, default=None, help="Master seed (default KMTLAB_SEED)")
@click.option("--batch", type=click.Path(dir_okay=False), default=None, help="JSON list of check requests")
@output_options
@command_errors
def verify_command(suite, cases, partition_cases, seed, batch, output, fmt):
    """Runs the check batteries; exits 1 when a theorem-backed check fails"""
    params = {"suite": suite, "cases": cases, "partition_cases": partition_cases, "batch": batch}
    config = ExperimentConfig.build("verify", params, output, fmt, seed)
    if batch is not None:
        report = run_batch(load_batch(batch))
    else:
        if cases < 0 or partition_cases < 0:
            raise InfeasibleParameterError("case counts must be nonnegative")
        report = None
        if suite in ("lemmas", "all"):
            report = lemma_suite(cases, config.seed)
        if suite in ("partitions", "all"):
            # --cases 0 empties every battery
            partitions = partition_suite(partition_cases if cases > 0 else 0, config.seed)
            report = partitions if report is None else report.merge(partitions)
        report.name = suite
    payload = report.to_dict()
    frame = pd.DataFrame([{"check": name, **entry} for name, entry in payload["checks"].items()],
                         columns=["check", "cases", "violations", "min_slack"])
    emit(config, payload, frame)
    if not report.ok:
        for failure in report.failures:
            logger.error(f"❌ violated: {json.dumps(failure, sort_keys=True)}")
        sys.exit(EXIT_VERIFY_FAILED)
    logger.info(f"✅ {report.cases} cases, no violations")


@cli.command("family")
@click.option("--sweep", type=click.Path(dir_okay=False), default=None, help="Sweep JSON file")
@click.option("--family", "family_name", default=None, help="Family of a parametric sweep")
@click.option("--param", default=None, help="Parameter varied by the parametric sweep")
@click.option("--values", default=None, help="Comma separated parameter values")
@click.option("--fixed", default="{}", help="JSON object with the remaining parameters")
@click.option("--m-grid", default=None, help="Override the sweep m-grid")
@click.option("--q", type=float, default=3.0, show_default=True)
@click.option("--t", "t", type=float, default=None, help="Profile E[e^{t|X|} 1{e^{t|X|} >= K}] instead")
@click.option("--k-grid", default=None, help="Override the sweep K-grid")
@click.option("--threshold", type=float, default=None)
@click.option("--workers", type=int, default=None)
@output_options
@command_errors
def family_command(sweep, family_name, param, values, fixed, m_grid, q, t, k_grid, threshold, workers,
                   output, fmt):
    """Sup-over-family tail profile of a sweep (finite sweep surrogate)"""
    params = {"sweep": sweep, "family": family_name, "param": param, "values": values, "fixed": fixed,
              "m_grid": m_grid, "q": q, "t": t, "k_grid": k_grid, "threshold": threshold}
    config = ExperimentConfig.build("family", params, output, fmt, workers=workers)
    if sweep is not None:
        family_sweep = load_sweep(sweep)
    elif family_name and param and values:
        try:
            fixed_params = json.loads(fixed)
        except json.JSONDecodeError as e:
            raise InvalidSpecError(f"--fixed is not valid JSON: {e}") from e
        family_sweep = parametric_sweep(family_name, param, parse_grid(values), fixed_params)
    else:
        raise InvalidSpecError("give --sweep, or --family with --param and --values")
    if m_grid:
        family_sweep.m_grid = sorted(parse_grid(m_grid))
    if k_grid:
        family_sweep.k_grid = sorted(parse_grid(k_grid))
    if t is not None:
        profile = exp_tail_profile(family_sweep, t, threshold, config.workers)
    else:
        profile = uniform_tail_profile(family_sweep, q, threshold, config.workers)
    emit(config, profile.to_dict(), profile.to_frame())


def main():
    cli(prog_name="kmtlab")


if __name__ == "__main__":
    main()
