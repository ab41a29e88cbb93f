"""DICOD entry points: run a runtime, gather the code and certify it"""

import logging
from dataclasses import dataclass, field

from ..objective.beta import beta_init, max_abs_dz
from ..signals.types import Dictionary, MultivariateSignal, SparseCode
from ..solvers.trace import SolveTrace
from .config import DicodConfig
from .runtime_interface import RunOutcome, Runtime, assemble_code
from .runtimes import ProcessRuntime, SteppedRuntime
from .stats import InterferenceStats
from .worker import UpdateRecord

logger = logging.getLogger(__name__)


@dataclass
class DicodRun:
    code: SparseCode
    trace: SolveTrace
    stats: InterferenceStats
    log: list[UpdateRecord] = field(default_factory=list)
    checkpoints: list[tuple[int, int, float, float]] = field(default_factory=list)
    seconds: float = 0.0
    warm_seconds: float = 0.0

    def rounds_to_reach(self, threshold: float) -> int | None:
        """First checkpointed round whose cost is <= threshold"""
        for round_, _, _, value in self.checkpoints:
            if value <= threshold:
                return round_
        return None


def make_runtime(
    signal: MultivariateSignal, dictionary: Dictionary, config: DicodConfig
) -> Runtime:
    if config.mode == "stepped":
        return SteppedRuntime(signal, dictionary, config)
    return ProcessRuntime(signal, dictionary, config)


def run_dicod(
    signal: MultivariateSignal, dictionary: Dictionary, config: DicodConfig
) -> DicodRun:
    """Solve with M workers and return the code with its full run record"""
    runtime = make_runtime(signal, dictionary, config)
    outcome: RunOutcome = runtime.run()
    n_times = signal.n_times - dictionary.width + 1
    code = assemble_code(outcome.reports, dictionary.n_atoms, n_times)

    final_max_dz = max_abs_dz(beta_init(signal, dictionary, code, config.reg))
    converged = outcome.converged and final_max_dz < config.tol
    if outcome.converged and not converged:
        logger.warning(
            "DICOD terminated with max|dZ| %.3g >= tol %.3g on the gathered code",
            final_max_dz,
            config.tol,
        )

    stats = InterferenceStats.merge(outcome.reports, outcome.rounds)
    trace = SolveTrace(
        iterations=stats.total_updates,
        trajectory=[(updates, sec, value) for _, updates, sec, value in outcome.checkpoints],
        final_max_dz=final_max_dz,
        converged=converged,
        evaluations=sum(r.steps * r.segment.length for r in outcome.reports) * dictionary.n_atoms,
        steps=outcome.rounds,
    )
    return DicodRun(
        code=code,
        trace=trace,
        stats=stats,
        log=[rec for r in outcome.reports for rec in r.log],
        checkpoints=outcome.checkpoints,
        seconds=outcome.seconds,
        warm_seconds=outcome.warm_seconds,
    )


def dicod_solve(
    signal: MultivariateSignal, dictionary: Dictionary, config: DicodConfig
) -> tuple[SparseCode, SolveTrace, InterferenceStats]:
    run = run_dicod(signal, dictionary, config)
    return run.code, run.trace, run.stats
