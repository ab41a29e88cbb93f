"""Theoretical DICOD speedup bound"""

import math
from dataclasses import dataclass

from ..errors import ConfigurationError

# value and expansion are both about M^2, so their difference carries ~eps M^2 rounding
RELATIVE_MARGIN = 1e-9
ABSOLUTE_MARGIN = 1e-14


@dataclass(frozen=True)
class SpeedupBound:
    n_workers: int
    alpha: float
    value: float  # M^2 (1 - 2 a^2 M^2 (1 + 2 a^2 M^2)^(M/2 - 1))
    expansion: float  # M^2 (1 - 2 a^2 M^2)
    hypothesis_holds: bool  # alpha M < 1/4


def theoretical_speedup_bound(n_workers: int, alpha: float) -> SpeedupBound:
    """Lower bound on the expected speedup of DICOD over greedy CD"""
    if n_workers < 1:
        raise ConfigurationError(f"M must be >= 1, got {n_workers}")
    if alpha < 0:
        raise ConfigurationError(f"alpha must be >= 0, got {alpha}")
    M = n_workers
    x = 2.0 * (alpha * M) ** 2
    return SpeedupBound(
        n_workers=M,
        alpha=alpha,
        value=M * M * (1.0 - x * (1.0 + x) ** (M / 2 - 1)),
        expansion=M * M * (1.0 - x),
        hypothesis_holds=alpha * M < 0.25,
    )


def expansion_tolerance(n_workers: int, alpha: float) -> float:
    """Bound on |value - expansion|; 2 (alpha M)^4 M^2 when M <= 3.

    The bound is tight at M = 4, so it carries a rounding margin.
    """
    M = n_workers
    am = alpha * M
    growth = max(1.0, (1.0 + 2.0 * am * am) ** (M / 2 - 2))
    exact = 2.0 * max(1, abs(M - 2)) * am**4 * M * M * growth
    return exact * (1.0 + RELATIVE_MARGIN) + ABSOLUTE_MARGIN * M * M


def transition_workers(alpha: float) -> float:
    """Worker count where alpha M = 1/2 and super-linear speedup is expected to stop"""
    if alpha <= 0:
        return math.inf
    return 0.5 / alpha
