"""Interference statistics and their comparison with the uniform-activation prediction"""

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigurationError
from .worker import InterferenceEvent, WorkerReport


@dataclass
class InterferenceStats:
    total_updates: int = 0
    border_updates: int = 0
    interfering_pairs: int = 0
    rounds: int = 0
    multi_interference: int = 0  # receipts hitting more than one of our own updates
    messages: int = 0
    events: list[InterferenceEvent] = field(default_factory=list)

    @classmethod
    def merge(cls, reports: Sequence[WorkerReport], rounds: int) -> "InterferenceStats":
        stats = cls(rounds=rounds)
        for r in reports:
            stats.total_updates += r.n_updates
            stats.border_updates += r.border_updates
            stats.interfering_pairs += r.interfering_pairs
            stats.multi_interference += r.multi_interference
            stats.messages += r.sent
            stats.events.extend(r.events)
        return stats


@dataclass(frozen=True)
class InterferenceRate:
    observed: float
    predicted: float

    @property
    def ratio(self) -> float:
        return self.observed / self.predicted if self.predicted > 0 else float("nan")


def interference_rate(
    stats: InterferenceStats, n_workers: int, alpha: float
) -> InterferenceRate:
    """Interfering pairs per round and per neighboring pair, against (M alpha)^2"""
    if not 0 < alpha <= 1:
        raise ConfigurationError(f"alpha must be in (0, 1], got {alpha}")
    slots = stats.rounds * (n_workers - 1)
    observed = stats.interfering_pairs / slots if slots > 0 else 0.0
    return InterferenceRate(observed=observed, predicted=(n_workers * alpha) ** 2)


def simulate_uniform_interference(
    n_workers: int, alpha: float, rounds: int, seed: int = 0, width: int = 16
) -> InterferenceStats:
    """Every round each worker updates a uniformly drawn time of its segment.

    Segments have length W / (M alpha); neighbors interfere when their chosen
    times are closer than W.
    """
    if n_workers < 2:
        raise ConfigurationError("interference needs at least two workers")
    seg_len = int(round(width / (n_workers * alpha)))
    if seg_len < width:
        raise ConfigurationError(f"M alpha = {n_workers * alpha} leaves segments shorter than W")
    rng = np.random.default_rng(seed)
    offsets = np.arange(n_workers) * seg_len
    times = offsets + rng.integers(0, seg_len, size=(rounds, n_workers))
    close = np.abs(np.diff(times, axis=1)) < width
    return InterferenceStats(
        total_updates=rounds * n_workers,
        interfering_pairs=int(close.sum()),
        rounds=rounds,
        multi_interference=int(np.sum(close[:, 1:] & close[:, :-1])),
    )
