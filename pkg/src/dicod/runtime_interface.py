"""Runtime interface and run outcome shared by the DICOD schedulers."""

from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Protocol

import numpy as np

from ..signals.types import SparseCode
from .worker import WorkerReport


@dataclass
class RunOutcome:
    """Result of executing the DICOD protocol to termination (or to the budget)."""

    reports: list[WorkerReport]
    converged: bool
    rounds: int  # parallel rounds that contained at least one update
    checkpoints: list[tuple[int, int, float, float]] = field(default_factory=list)
    seconds: float = 0.0  # cold: includes spawning workers
    warm_seconds: float = 0.0  # after every worker finished its initialization


def assemble_code(reports: Sequence[WorkerReport], n_atoms: int, n_times: int) -> SparseCode:
    """Concatenate the per-segment codes into the full Z"""
    codes = np.zeros((n_atoms, n_times))
    for r in reports:
        codes[:, r.segment.start : r.segment.end + 1] = r.codes
    return SparseCode(codes)


class Runtime(Protocol):
    """Protocol for DICOD schedulers.

    The stepped runtime interleaves workers deterministically in one process;
    the process runtime runs one OS process per worker. Both execute the same
    worker step and termination rules.
    """

    name: str

    def run(self) -> RunOutcome:
        """Run the workers until global termination or until the budget is spent.

        Returns:
            RunOutcome with per-worker reports, round count and cost checkpoints
        """
        ...
