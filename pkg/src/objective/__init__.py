"""Coordinate-descent mathematics: beta maintenance, cost deltas, coherence."""

from .beta import (
    BetaState,
    CoordinateUpdate,
    apply_cross_corr_update,
    beta_apply_update,
    beta_init,
    beta_recompute,
    commit_update,
    coordinate_target,
    max_abs_dz,
    optimal_value,
    propose_update,
    soft_threshold,
)
from .deltas import (
    coherence,
    delta_cost_pair,
    delta_cost_single,
    interference_lower_bound,
    strong_convexity_gap,
    update_gain,
)
from .hypotheses import H1Report, check_h1

__all__ = [
    "BetaState",
    "CoordinateUpdate",
    "H1Report",
    "apply_cross_corr_update",
    "beta_apply_update",
    "beta_init",
    "beta_recompute",
    "check_h1",
    "coherence",
    "commit_update",
    "coordinate_target",
    "delta_cost_pair",
    "delta_cost_single",
    "interference_lower_bound",
    "max_abs_dz",
    "optimal_value",
    "propose_update",
    "soft_threshold",
    "strong_convexity_gap",
    "update_gain",
]
