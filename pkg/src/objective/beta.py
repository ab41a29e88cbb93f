"""Auxiliary beta array and single-coordinate updates"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigurationError
from ..signals.kernels import check_problem, correlate_all, reconstruct
from ..signals.types import CrossCorrTable, Dictionary, MultivariateSignal, SparseCode


@dataclass(frozen=True)
class CoordinateUpdate:
    """Replacement of Z_{k0}[t0] by a new value; delta = old - new"""

    k0: int
    t0: int
    old_value: float
    new_value: float
    delta: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "delta", self.old_value - self.new_value)


@dataclass(eq=False)
class BetaState:
    """beta_k[t]: correlation of D_k with the residual where Z_k[t] is masked out.

    Single-writer; kept consistent with ``code`` through ``commit_update``.
    """

    beta: np.ndarray  # (K, L)
    signal: MultivariateSignal
    dictionary: Dictionary
    code: SparseCode
    reg: float

    def targets(self) -> np.ndarray:
        """Optimal value Z'_k[t] of every coordinate"""
        return soft_threshold(self.beta, self.reg) / self.dictionary.sq_norms[:, None]

    def dz(self) -> np.ndarray:
        """Delta Z_k[t] = Z_k[t] - Z'_k[t] for every coordinate"""
        return self.code.codes - self.targets()


def soft_threshold(u, reg: float):
    """sign(u) * max(|u| - reg, 0); works on scalars and arrays"""
    if reg <= 0:
        raise ConfigurationError(f"regularization must be > 0, got {reg}")
    out = np.sign(u) * np.maximum(np.abs(u) - reg, 0.0)
    if np.ndim(out) == 0:
        return float(out)
    return out


def optimal_value(beta_value: float, reg: float, sq_norm: float) -> float:
    return soft_threshold(beta_value, reg) / sq_norm


def beta_init(
    signal: MultivariateSignal,
    dictionary: Dictionary,
    code: SparseCode | None = None,
    reg: float = 1.0,
) -> BetaState:
    """Build beta from scratch for a copy of the code (zero code by default)"""
    if reg <= 0:
        raise ConfigurationError(f"regularization must be > 0, got {reg}")
    code = SparseCode.for_problem(signal, dictionary) if code is None else code.copy()
    check_problem(signal, dictionary, code)
    return BetaState(
        beta=_fresh_beta(signal, dictionary, code),
        signal=signal,
        dictionary=dictionary,
        code=code,
        reg=reg,
    )


def beta_recompute(state: BetaState) -> np.ndarray:
    """From-scratch beta for the state's current code (oracle for drift checks)"""
    return _fresh_beta(state.signal, state.dictionary, state.code)


def _fresh_beta(
    signal: MultivariateSignal, dictionary: Dictionary, code: SparseCode
) -> np.ndarray:
    if not np.any(code.codes):
        return correlate_all(dictionary, signal)
    res = signal.samples - reconstruct(code, dictionary).samples
    # Adding Z_k[t] ||D_k||^2 back masks the coordinate's own contribution.
    return (
        correlate_all(dictionary, MultivariateSignal(res))
        + code.codes * dictionary.sq_norms[:, None]
    )


def coordinate_target(state: BetaState, k0: int, t0: int) -> float:
    """Closed-form minimizer of E along coordinate (k0, t0)"""
    return optimal_value(state.beta[k0, t0], state.reg, state.dictionary.sq_norms[k0])


def propose_update(state: BetaState, k0: int, t0: int) -> CoordinateUpdate:
    return CoordinateUpdate(
        k0=k0,
        t0=t0,
        old_value=float(state.code.codes[k0, t0]),
        new_value=coordinate_target(state, k0, t0),
    )


def apply_cross_corr_update(
    beta: np.ndarray,
    offset: int,
    cross_corr: CrossCorrTable,
    k0: int,
    t0: int,
    delta: float,
) -> None:
    """Apply the incremental beta update of a change at (k0, t0) to a window of beta.

    ``beta`` holds columns ``offset ... offset + n - 1`` of the full array. Only
    columns with |t - t0| <= W - 1 change, and beta[k0, t0] keeps its value.
    """
    W = cross_corr.width
    n = beta.shape[1]
    lo = max(offset, t0 - W + 1)
    hi = min(offset + n - 1, t0 + W - 1)
    if lo > hi or delta == 0.0:
        return

    owns_t0 = offset <= t0 < offset + n
    if owns_t0:
        kept = beta[k0, t0 - offset]
    beta[:, lo - offset : hi - offset + 1] += (
        delta * cross_corr.table[:, k0, lo - t0 + W - 1 : hi - t0 + W]
    )
    if owns_t0:
        beta[k0, t0 - offset] = kept


def beta_apply_update(state: BetaState, upd: CoordinateUpdate) -> None:
    """Keep beta consistent with a coordinate update (Z itself is untouched)"""
    K, L = state.beta.shape
    if not (0 <= upd.k0 < K and 0 <= upd.t0 < L):
        raise IndexError(f"coordinate ({upd.k0}, {upd.t0}) outside (K, L) = ({K}, {L})")
    apply_cross_corr_update(
        state.beta, 0, state.dictionary.cross_corr, upd.k0, upd.t0, upd.delta
    )


def commit_update(state: BetaState, upd: CoordinateUpdate) -> None:
    """Update beta, then write the new value into the code"""
    beta_apply_update(state, upd)
    state.code.codes[upd.k0, upd.t0] = upd.new_value


def max_abs_dz(state: BetaState) -> float:
    """||Delta Z||_inf over all coordinates, from the current beta"""
    return float(np.max(np.abs(state.dz())))
