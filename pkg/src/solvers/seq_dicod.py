"""Locally greedy coordinate descent over randomly drawn segments (SeqDICOD)"""

import numpy as np

from ..errors import ConfigurationError
from ..objective.beta import beta_init, commit_update, max_abs_dz, propose_update
from ..signals.types import Dictionary, MultivariateSignal, SparseCode
from .config import SolverConfig
from .selection import balanced_bounds, segment_argmax
from .trace import SolveTrace, TraceRecorder


def seq_dicod(
    signal: MultivariateSignal,
    dictionary: Dictionary,
    config: SolverConfig,
    code: SparseCode | None = None,
) -> tuple[SparseCode, SolveTrace]:
    """Sequential run of DICOD with M segments.

    Each iteration draws a segment uniformly and applies its locally greedy
    update. ``dz_last[m]`` holds |dZ| of the last choice in segment m; when all
    fall below tol a full scan decides whether to stop.
    """
    if config.strategy != "seq-dicod":
        raise ConfigurationError(
            f"seq_dicod needs strategy 'seq-dicod', got {config.strategy!r}"
        )

    state = beta_init(signal, dictionary, code, config.reg)
    K, L = state.beta.shape
    bounds = balanced_bounds(L, config.n_segments)
    recorder = TraceRecorder(
        signal, dictionary, state.code, config.reg, config.log_every, name="seq-dicod"
    )
    rng = np.random.default_rng(config.seed)
    dz_last = np.full(len(bounds), np.inf)

    n_updates = 0
    n_steps = 0
    evaluations = 0
    converged = False
    for _ in range(config.max_iter):
        n_steps += 1
        m = int(rng.integers(len(bounds)))
        start, stop = bounds[m]
        k0, t0, _ = segment_argmax(state, start, stop)
        evaluations += K * (stop - start)

        upd = propose_update(state, k0, t0)
        dz_last[m] = abs(upd.delta)
        if dz_last[m] >= config.tol:
            commit_update(state, upd)
            n_updates += 1
            recorder.step(n_updates)

        if dz_last.max() < config.tol:
            full = np.abs(state.dz())
            dz_last = np.array([full[:, a:b].max() for a, b in bounds])
            if dz_last.max() < config.tol:
                converged = True
                break

    trace = recorder.finish(n_updates, max_abs_dz(state), converged, evaluations, n_steps)
    return state.code, trace
