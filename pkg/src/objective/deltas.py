"""Cost variations of single and concurrent coordinate updates"""

import math
from typing import Protocol

from ..signals.types import CrossCorrTable, Dictionary
from .beta import BetaState, CoordinateUpdate


class CoordinateChange(Protocol):
    """Anything carrying a coordinate and its dZ (updates and border messages)"""

    k0: int
    t0: int
    delta: float


def delta_cost_single(
    z_value: float, u: float, beta_value: float, sq_norm: float, reg: float
) -> float:
    """E(Z) - E(Z with Z_k0[t0] replaced by u).

    Args:
        z_value: Current value Z_k0[t0]
        u: Candidate replacement value
        beta_value: beta_k0[t0] for the current Z
        sq_norm: ||D_k0||_2^2
        reg: Regularization lambda

    Returns:
        Cost decrease of the update (negative when the cost grows)
    """
    return (
        0.5 * sq_norm * (z_value * z_value - u * u)
        - beta_value * (z_value - u)
        + reg * (abs(z_value) - abs(u))
    )


def update_gain(state: BetaState, upd: CoordinateUpdate) -> float:
    """delta_cost_single evaluated for an update against the state it was computed from"""
    return delta_cost_single(
        upd.old_value,
        upd.new_value,
        float(state.beta[upd.k0, upd.t0]),
        float(state.dictionary.sq_norms[upd.k0]),
        state.reg,
    )


def delta_cost_pair(
    upd0: CoordinateChange,
    upd1: CoordinateChange,
    cross_corr: CrossCorrTable,
    gain0: float,
    gain1: float,
) -> float:
    """Cost decrease of two updates computed from the same Z and applied together.

    The interference term is S_{k0,k1}[t0 - t1] * dZ0 * dZ1, the inner product of
    the two shifted atoms.
    """
    if (upd0.k0, upd0.t0) == (upd1.k0, upd1.t0):
        raise ValueError("concurrent updates must target distinct coordinates")
    overlap = cross_corr.lag(upd0.k0, upd1.k0, upd0.t0 - upd1.t0)
    return gain0 + gain1 - overlap * upd0.delta * upd1.delta


def coherence(dictionary: Dictionary, k0: int, k1: int, lag: int) -> float:
    """Normalized cross-correlation S_{k0,k1}[lag] / (||D_k0|| ||D_k1||)"""
    norms = dictionary.sq_norms
    return dictionary.cross_corr.lag(k0, k1, lag) / math.sqrt(norms[k0] * norms[k1])


def interference_lower_bound(gain0: float, gain1: float, coherence_value: float) -> float:
    """Lower bound on the joint gain of two interfering optimal updates"""
    if gain0 < 0 or gain1 < 0:
        raise ValueError(f"single-update gains must be >= 0, got {gain0}, {gain1}")
    return gain0 + gain1 - 2.0 * abs(coherence_value) * math.sqrt(gain0 * gain1)


def strong_convexity_gap(upd: CoordinateUpdate, gain: float, sq_norm: float) -> float:
    """sqrt(2 gain) / ||D_k|| - |dZ|; non-negative for an optimal update"""
    return math.sqrt(2.0 * max(gain, 0.0) / sq_norm) - abs(upd.delta)
