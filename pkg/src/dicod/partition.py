"""Contiguous segment assignment for DICOD workers"""

from dataclasses import dataclass

from ..errors import ConfigurationError
from ..solvers.selection import balanced_bounds


@dataclass(frozen=True)
class SegmentAssignment:
    """Times [start, end] owned by worker m, plus a W-1 halo on each side"""

    m: int
    start: int
    end: int
    halo: int

    @property
    def length(self) -> int:
        return self.end - self.start + 1

    def extended(self, n_times: int) -> tuple[int, int]:
        """Inclusive range of beta columns the worker stores (owned + halo)"""
        return max(0, self.start - self.halo), min(n_times - 1, self.end + self.halo)


def partition(n_times: int, n_workers: int, width: int) -> list[SegmentAssignment]:
    """Split [0, L-1] into M balanced segments, each at least W long"""
    bounds = balanced_bounds(n_times, n_workers)
    shortest = min(stop - start for start, stop in bounds)
    if shortest < width:
        raise ConfigurationError(
            f"L={n_times} split over M={n_workers} gives segments of {shortest} < W={width}"
        )
    return [
        SegmentAssignment(m=m, start=start, end=stop - 1, halo=width - 1)
        for m, (start, stop) in enumerate(bounds)
    ]
