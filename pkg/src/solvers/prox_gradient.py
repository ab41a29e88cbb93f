"""Proximal-gradient baseline (ISTA / FISTA with restart), used as an optimality oracle"""

import math

import numpy as np

from ..errors import ConfigurationError
from ..objective.beta import beta_init, max_abs_dz, soft_threshold
from ..signals.kernels import check_problem, correlate_all, cost, reconstruct
from ..signals.types import Dictionary, MultivariateSignal, SparseCode
from .trace import SolveTrace, TraceRecorder

POWER_ITERATIONS = 50
# Power iteration approaches the top eigenvalue from below.
STEP_SAFETY = 1.1


def gram_upper_bound(dictionary: Dictionary) -> float:
    """Row-sum bound on ||A^T A|| for the convolution operator A"""
    return float(np.max(np.sum(np.abs(dictionary.cross_corr.table), axis=(1, 2))))


def lipschitz_constant(
    dictionary: Dictionary, n_times: int, n_iter: int = POWER_ITERATIONS, seed: int = 0
) -> float:
    """Estimate ||A^T A|| by power iteration on Z -> correlate(D, Z * D)"""
    rng = np.random.default_rng(seed)
    v = rng.normal(size=(dictionary.n_atoms, n_times))
    v /= np.linalg.norm(v)
    estimate = 0.0
    for _ in range(n_iter):
        w = correlate_all(dictionary, reconstruct(SparseCode(v), dictionary))
        estimate = float(np.linalg.norm(w))
        if estimate == 0.0:
            break
        v = w / estimate
    return min(STEP_SAFETY * estimate, gram_upper_bound(dictionary))


def prox_gradient_baseline(
    signal: MultivariateSignal,
    dictionary: Dictionary,
    reg: float,
    iters: int,
    accel: bool = True,
    log_every: int = 100,
    tol: float = 0.0,
) -> tuple[SparseCode, SolveTrace]:
    """Run ``iters`` proximal-gradient steps from Z = 0.

    With ``accel`` the momentum sequence restarts whenever the cost goes up.
    A positive ``tol`` checks the coordinate-wise certificate every
    ``log_every`` iterations and stops once max|dZ| < tol; the run then counts
    as converged. A fixed-budget run (tol = 0) is converged once it completes.
    """
    if iters < 1:
        raise ConfigurationError(f"iters must be >= 1, got {iters}")
    if reg <= 0:
        raise ConfigurationError(f"regularization must be > 0, got {reg}")
    check_problem(signal, dictionary)

    K, L = dictionary.n_atoms, signal.n_times - dictionary.width + 1
    step = 1.0 / lipschitz_constant(dictionary, L)
    code = SparseCode.zeros(K, L)
    recorder = TraceRecorder(signal, dictionary, code, reg, log_every, name="prox-gradient")

    def prox_step(point: np.ndarray) -> np.ndarray:
        res = signal.samples - reconstruct(SparseCode(point), dictionary).samples
        grad = -correlate_all(dictionary, MultivariateSignal(res))
        return soft_threshold(point - step * grad, reg * step)

    def objective(point: np.ndarray) -> float:
        return cost(signal, dictionary, SparseCode(point), reg)

    z = code.codes
    y = z.copy()
    momentum = 1.0
    current = objective(z)
    done = 0
    stopped_early = False
    for i in range(iters):
        z_next = prox_step(y)
        if accel:
            value = objective(z_next)
            if value > current:
                momentum = 1.0
                z_next = prox_step(z)
                value = objective(z_next)
            momentum_next = (1.0 + math.sqrt(1.0 + 4.0 * momentum * momentum)) / 2.0
            y = z_next + ((momentum - 1.0) / momentum_next) * (z_next - z)
            momentum = momentum_next
            current = value
        else:
            y = z_next

        z = z_next
        code.codes[...] = z
        done = i + 1
        recorder.step(done)
        if tol > 0 and done % log_every == 0:
            if max_abs_dz(beta_init(signal, dictionary, code, reg)) < tol:
                stopped_early = True
                break

    final_dz = max_abs_dz(beta_init(signal, dictionary, code, reg))
    converged = (stopped_early or final_dz < tol) if tol > 0 else True
    trace = recorder.finish(done, final_dz, converged, evaluations=done * K * L, steps=done)
    return code, trace
