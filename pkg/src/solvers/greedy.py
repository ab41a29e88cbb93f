"""Greedy convolutional coordinate descent"""

import logging

from ..errors import ConfigurationError
from ..objective.beta import beta_init, commit_update, max_abs_dz, propose_update
from ..signals.types import Dictionary, MultivariateSignal, SparseCode
from .config import SolverConfig
from .selection import BlockArgmax
from .trace import SolveTrace, TraceRecorder

logger = logging.getLogger(__name__)


def greedy_cd(
    signal: MultivariateSignal,
    dictionary: Dictionary,
    config: SolverConfig,
    code: SparseCode | None = None,
) -> tuple[SparseCode, SolveTrace]:
    """Update the coordinate with the largest |dZ| until it falls below tol.

    Args:
        signal: Signal X to encode
        dictionary: Fixed dictionary D
        config: Solver parameters; strategy must be "greedy"
        code: Optional warm start (defaults to Z = 0)

    Returns:
        Tuple of (final code, trace)
    """
    if config.strategy != "greedy":
        raise ConfigurationError(f"greedy_cd needs strategy 'greedy', got {config.strategy!r}")

    state = beta_init(signal, dictionary, code, config.reg)
    W = dictionary.width
    recorder = TraceRecorder(
        signal, dictionary, state.code, config.reg, config.log_every, name="greedy"
    )
    selector = BlockArgmax(state, block=W)

    n_updates = 0
    n_steps = 0
    converged = False
    for _ in range(config.max_iter):
        n_steps += 1
        k0, t0, _ = selector.best()
        upd = propose_update(state, k0, t0)
        if abs(upd.delta) < config.tol:
            converged = True
            break

        commit_update(state, upd)
        n_updates += 1
        selector.refresh(t0 - W + 1, t0 + W - 1)
        recorder.step(n_updates)

    trace = recorder.finish(
        n_updates, max_abs_dz(state), converged, selector.evaluations, n_steps
    )
    return state.code, trace
