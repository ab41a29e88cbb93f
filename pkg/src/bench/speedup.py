"""Speedup measurements: wall-clock sweeps and the update-count proxy"""

import logging
import os
import statistics
from collections.abc import Sequence
from dataclasses import dataclass

from ..dicod.config import DicodConfig
from ..dicod.solver import DicodRun, run_dicod
from ..errors import ConfigurationError
from ..signals.kernels import cost
from ..signals.types import Dictionary, MultivariateSignal, SparseCode
from ..solvers.config import SolverConfig
from ..solvers.greedy import greedy_cd
from .bounds import theoretical_speedup_bound, transition_workers
from .generation import GenerationSpec, generate_instance, resolve_regularization
from .report import ExperimentReport, SolverSummary, SpeedupRow

logger = logging.getLogger(__name__)

TARGET_FRACTION = 1e-3


@dataclass(frozen=True)
class SpeedupProxy:
    n_workers: int
    cd_updates: int
    dicod_rounds: int
    value: float  # M * cd_updates / dicod_rounds


def target_cost(
    signal: MultivariateSignal, dictionary: Dictionary, reg: float, optimum: float
) -> float:
    """E* + 1e-3 E(0)"""
    initial = cost(signal, dictionary, SparseCode.for_problem(signal, dictionary), reg)
    return optimum + TARGET_FRACTION * initial


def _seconds_to_reach(run: DicodRun, threshold: float) -> float:
    for _, _, seconds, value in run.checkpoints:
        if value <= threshold:
            return seconds
    return run.seconds


def _ratio(baseline: float, seconds: float) -> float:
    if baseline == seconds:
        return 1.0
    return baseline / seconds if seconds > 0 else float("inf")


def available_workers() -> int:
    if hasattr(os, "sched_getaffinity"):
        return len(os.sched_getaffinity(0))
    return os.cpu_count() or 1


def update_count_speedup(
    signal: MultivariateSignal,
    dictionary: Dictionary,
    reg: float,
    n_workers: int,
    tol: float = 1e-6,
    seed: int = 0,
) -> SpeedupProxy:
    """Machine-independent speedup: CD updates over DICOD rounds, times the per-round work ratio M.

    Both counts are taken where the cost first reaches E* + 1e-3 E(0). A DICOD
    round costs one local scan of L/M coordinates per worker, a greedy CD
    update one scan of all L.
    """
    cd_config = SolverConfig(reg=reg, tol=tol, strategy="greedy", log_every=1)
    _, cd_trace = greedy_cd(signal, dictionary, cd_config)
    threshold = target_cost(signal, dictionary, reg, cd_trace.final_cost)
    cd_updates = cd_trace.updates_to_reach(threshold)

    config = DicodConfig(reg=reg, tol=tol, n_workers=n_workers, seed=seed, log_every=1)
    run = run_dicod(signal, dictionary, config)
    rounds = run.rounds_to_reach(threshold)
    if cd_updates is None or rounds is None or rounds == 0:
        raise ConfigurationError("target cost was not reached; lower tol or raise max_iter")
    return SpeedupProxy(
        n_workers=n_workers,
        cd_updates=cd_updates,
        dicod_rounds=rounds,
        value=n_workers * cd_updates / rounds,
    )


def run_speedup_sweep(
    spec: GenerationSpec,
    m_values: Sequence[int],
    repeats: int = 3,
    tol: float = 1e-6,
    mode: str = "free-running",
    max_iter: int = 1_000_000,
) -> ExperimentReport:
    """Median time to reach E* + 1e-3 E(0) for each M, relative to M = 1.

    Times include worker spawn; ``warm_seconds`` excludes everything before
    the last worker finished its initialization.
    """
    if repeats < 1:
        raise ConfigurationError(f"repeats must be >= 1, got {repeats}")
    ms = sorted(set(m_values) | {1})
    signal, dictionary, _ = generate_instance(spec)
    reg = resolve_regularization(spec, signal, dictionary)
    report = ExperimentReport(spec=spec, reg=reg)

    cd_config = SolverConfig(reg=reg, tol=tol, strategy="greedy", max_iter=max_iter)
    _, cd_trace = greedy_cd(signal, dictionary, cd_config)
    report.summaries.append(SolverSummary("greedy", cd_config.model_dump(), cd_trace))
    report.reference_cost = cd_trace.final_cost
    threshold = target_cost(signal, dictionary, reg, cd_trace.final_cost)

    available = available_workers()
    if mode == "free-running" and ms[-1] > available:
        message = f"M={ms[-1]} exceeds the {available} available CPUs; timings are oversubscribed"
        report.warnings.append(message)
        logger.warning(message)
    crossover = transition_workers(spec.alpha)
    if ms[-1] >= crossover:
        report.warnings.append(f"M >= {crossover:.1f} lies past the alpha M = 1/2 transition")

    timings: dict[int, list[tuple[float, float]]] = {}
    for M in ms:
        for run_index in range(repeats):
            config = DicodConfig(
                reg=reg,
                tol=tol,
                n_workers=M,
                mode=mode,
                seed=spec.seed + run_index,
                max_iter=max_iter,
                log_every=10,
            )
            run = run_dicod(signal, dictionary, config)
            if not run.trace.converged:
                report.warnings.append(f"M={M} run {run_index} did not converge")
            reach = _seconds_to_reach(run, threshold)
            setup = run.seconds - run.warm_seconds
            timings.setdefault(M, []).append((reach, max(reach - setup, 0.0)))
            logger.info("M=%d run %d: %.3fs to target", M, run_index, reach)

    baseline = statistics.median(seconds for seconds, _ in timings[1])
    for M in ms:
        bound = theoretical_speedup_bound(M, spec.alpha).value
        typical = statistics.median(seconds for seconds, _ in timings[M])
        speedup = _ratio(baseline, typical)
        for run_index, (seconds, warm) in enumerate(timings[M]):
            report.speedups.append(
                SpeedupRow(
                    M=M,
                    run=run_index,
                    seconds=seconds,
                    speedup=speedup,
                    run_speedup=_ratio(baseline, seconds),
                    bound=bound,
                    warm_seconds=warm,
                )
            )
    return report
