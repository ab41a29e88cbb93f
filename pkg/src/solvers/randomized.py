"""Randomized coordinate descent"""

import math

import numpy as np

from ..errors import ConfigurationError
from ..objective.beta import CoordinateUpdate, beta_init, commit_update, max_abs_dz
from ..signals.types import Dictionary, MultivariateSignal, SparseCode
from .config import SolverConfig
from .trace import SolveTrace, TraceRecorder

_DRAW_BATCH = 4096


def randomized_cd(
    signal: MultivariateSignal,
    dictionary: Dictionary,
    config: SolverConfig,
    code: SparseCode | None = None,
) -> tuple[SparseCode, SolveTrace]:
    """Update uniformly drawn coordinates to their optimal value.

    Stops after K*L consecutive draws that would all move by less than tol.
    """
    if config.strategy != "randomized":
        raise ConfigurationError(
            f"randomized_cd needs strategy 'randomized', got {config.strategy!r}"
        )

    state = beta_init(signal, dictionary, code, config.reg)
    K, L = state.beta.shape
    window = K * L
    recorder = TraceRecorder(
        signal, dictionary, state.code, config.reg, config.log_every, name="randomized"
    )
    rng = np.random.default_rng(config.seed)
    beta, codes, sq_norms, reg = state.beta, state.code.codes, state.dictionary.sq_norms, state.reg

    draws = rng.integers(window, size=_DRAW_BATCH)
    pos = 0
    quiet = 0
    n_updates = 0
    n_draws = 0
    converged = False
    for _ in range(config.max_iter):
        if pos == _DRAW_BATCH:
            draws = rng.integers(window, size=_DRAW_BATCH)
            pos = 0
        k, t = divmod(int(draws[pos]), L)
        pos += 1
        n_draws += 1

        # Scalar soft-threshold; this loop is the hot path.
        b = float(beta[k, t])
        shrunk = abs(b) - reg
        target = math.copysign(shrunk, b) / sq_norms[k] if shrunk > 0 else 0.0
        old = float(codes[k, t])
        if abs(old - target) < config.tol:
            quiet += 1
            if quiet >= window:
                converged = True
                break
            continue

        quiet = 0
        commit_update(state, CoordinateUpdate(k, t, old, float(target)))
        n_updates += 1
        recorder.step(n_updates)

    trace = recorder.finish(n_updates, max_abs_dz(state), converged, n_draws, n_draws)
    return state.code, trace
