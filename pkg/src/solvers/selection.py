"""Coordinate selection: full scans, segment scans and lazily maintained block maxima"""

import numpy as np

from ..errors import ConfigurationError
from ..objective.beta import BetaState, soft_threshold


def balanced_bounds(n_times: int, n_segments: int) -> list[tuple[int, int]]:
    """Split [0, n_times) into contiguous half-open ranges.

    The first ``n_times % n_segments`` ranges get one extra coordinate.
    """
    if n_segments < 1 or n_segments > n_times:
        raise ConfigurationError(f"need 1 <= M <= L, got M={n_segments}, L={n_times}")
    base, extra = divmod(n_times, n_segments)
    bounds = []
    start = 0
    for m in range(n_segments):
        stop = start + base + (1 if m < extra else 0)
        bounds.append((start, stop))
        start = stop
    return bounds


def local_dz(
    beta: np.ndarray, codes: np.ndarray, reg: float, sq_norms: np.ndarray
) -> np.ndarray:
    """Delta Z = Z - Sh(beta, reg) / ||D||^2 on matching slices of beta and Z"""
    return codes - soft_threshold(beta, reg) / sq_norms[:, None]


def full_scan_argmax(values: np.ndarray) -> tuple[int, int, float]:
    """Largest entry of a (K, n) array; ties go to the smallest (k, t)"""
    flat = int(np.argmax(values))
    k, t = divmod(flat, values.shape[1])
    return k, t, float(values[k, t])


def segment_argmax(state: BetaState, start: int, stop: int) -> tuple[int, int, float]:
    """Locally greedy choice over times [start, stop); returns absolute t"""
    values = np.abs(
        local_dz(
            state.beta[:, start:stop],
            state.code.codes[:, start:stop],
            state.reg,
            state.dictionary.sq_norms,
        )
    )
    k, t, value = full_scan_argmax(values)
    return k, start + t, value


class BlockArgmax:
    """Greedy argmax of |Delta Z| kept up to date block by block.

    After an update at t0 only the blocks meeting [t0 - W + 1, t0 + W - 1]
    are rescanned. Picks the same coordinate as ``full_scan_argmax`` on the
    whole array, including the tie rule.
    """

    def __init__(self, state: BetaState, block: int):
        self.state = state
        self.n_times = state.beta.shape[1]
        self.block = max(1, block)
        n_blocks = -(-self.n_times // self.block)
        self.block_max = np.full(n_blocks, -np.inf)
        self.block_arg = np.zeros((n_blocks, 2), dtype=np.int64)
        self.evaluations = 0
        self.refresh(0, self.n_times - 1)

    def refresh(self, t_lo: int, t_hi: int) -> None:
        """Rescan every block that intersects times [t_lo, t_hi]"""
        t_lo = max(t_lo, 0)
        t_hi = min(t_hi, self.n_times - 1)
        for b in range(t_lo // self.block, t_hi // self.block + 1):
            start = b * self.block
            stop = min(start + self.block, self.n_times)
            k, t, value = segment_argmax(self.state, start, stop)
            self.block_max[b] = value
            self.block_arg[b] = (k, t)
            self.evaluations += self.state.beta.shape[0] * (stop - start)

    def best(self) -> tuple[int, int, float]:
        top = self.block_max.max()
        tied = np.flatnonzero(self.block_max == top)
        k, t = min((int(self.block_arg[b, 0]), int(self.block_arg[b, 1])) for b in tied)
        return k, t, float(top)
