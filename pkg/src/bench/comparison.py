"""Run several solvers on one instance and collect their trajectories"""

import logging
from collections.abc import Sequence

from ..dicod.config import DicodConfig
from ..dicod.solver import run_dicod
from ..errors import ConfigurationError
from ..signals.types import Dictionary, MultivariateSignal, SparseCode
from ..solvers.config import SolverConfig
from ..solvers.greedy import greedy_cd
from ..solvers.prox_gradient import prox_gradient_baseline
from ..solvers.randomized import randomized_cd
from ..solvers.seq_dicod import seq_dicod
from .generation import GenerationSpec, generate_instance, resolve_regularization
from .report import ExperimentReport, SolverSummary

logger = logging.getLogger(__name__)

SOLVER_NAMES = ("greedy", "randomized", "seq-dicod", "dicod", "fista")

_SEQUENTIAL = {"greedy": greedy_cd, "randomized": randomized_cd, "seq-dicod": seq_dicod}


def default_segments(n_coords: int, width: int) -> int:
    """Segment count giving segments of about 10 W"""
    return max(1, n_coords // (10 * width))


def run_solver(
    name: str,
    signal: MultivariateSignal,
    dictionary: Dictionary,
    reg: float,
    tol: float = 1e-6,
    max_iter: int = 1_000_000,
    n_workers: int = 4,
    n_segments: int | None = None,
    seed: int = 0,
    log_every: int = 100,
    prox_iters: int = 2000,
    mode: str = "stepped",
    d_max: int = 1,
) -> tuple[SparseCode, SolverSummary]:
    """Run one named solver and summarize it together with its configuration"""
    n_coords = signal.n_times - dictionary.width + 1
    if name in _SEQUENTIAL:
        config = SolverConfig(
            reg=reg,
            tol=tol,
            max_iter=max_iter,
            strategy=name,
            n_segments=n_segments or default_segments(n_coords, dictionary.width),
            seed=seed,
            log_every=log_every,
        )
        code, trace = _SEQUENTIAL[name](signal, dictionary, config)
        return code, SolverSummary(name, config.model_dump(), trace)

    if name == "dicod":
        config = DicodConfig(
            reg=reg,
            tol=tol,
            n_workers=n_workers,
            mode=mode,
            seed=seed,
            d_max=d_max,
            max_iter=max_iter,
            log_every=log_every,
        )
        run = run_dicod(signal, dictionary, config)
        summary = SolverSummary(name, config.model_dump(), run.trace, run.stats, run.log)
        return run.code, summary

    if name == "fista":
        code, trace = prox_gradient_baseline(
            signal, dictionary, reg, prox_iters, accel=True, log_every=log_every, tol=tol
        )
        params = dict(reg=reg, iters=prox_iters, accel=True, tol=tol, log_every=log_every)
        return code, SolverSummary(name, params, trace)

    raise ConfigurationError(f"unknown solver {name!r}; choose from {', '.join(SOLVER_NAMES)}")


def run_comparison(
    spec: GenerationSpec,
    solvers: Sequence[str] = SOLVER_NAMES,
    tol: float = 1e-6,
    max_iter: int = 1_000_000,
    **solver_options,
) -> ExperimentReport:
    """Solve one generated instance with every listed solver.

    Non-convergence is recorded in the summaries, not raised.
    """
    signal, dictionary, _ = generate_instance(spec)
    reg = resolve_regularization(spec, signal, dictionary)
    report = ExperimentReport(spec=spec, reg=reg)
    for name in solvers:
        _, summary = run_solver(
            name, signal, dictionary, reg, tol=tol, max_iter=max_iter, **solver_options
        )
        summary.config["instance_seed"] = spec.seed
        if not summary.converged:
            message = f"{name} did not converge (final max|dZ| {summary.trace.final_max_dz:.3g})"
            report.warnings.append(message)
            logger.warning(message)
        report.summaries.append(summary)

    report.reference_cost = min(s.final_cost for s in report.summaries)
    logger.info(
        "Compared %d solvers, best cost %.8g", len(report.summaries), report.reference_cost
    )
    return report
