"""Solver traces and cost-trajectory sampling"""

import logging
import math
import time
from dataclasses import dataclass, field

import numpy as np

from ..signals.kernels import cost
from ..signals.types import Dictionary, MultivariateSignal, SparseCode

logger = logging.getLogger(__name__)


@dataclass
class SolveTrace:
    """What a solver did: update count, sampled costs and stopping status"""

    iterations: int = 0
    trajectory: list[tuple[int, float, float]] = field(default_factory=list)
    final_max_dz: float = math.inf
    converged: bool = False
    evaluations: int = 0  # candidate coordinates examined by the selection rule
    steps: int = 0  # selection rounds, including ones that made no update

    @property
    def final_cost(self) -> float:
        return self.trajectory[-1][2]

    @property
    def initial_cost(self) -> float:
        return self.trajectory[0][2]

    def costs(self) -> np.ndarray:
        return np.array([c for _, _, c in self.trajectory])

    def updates_to_reach(self, threshold: float) -> int | None:
        """First sampled update count whose cost is <= threshold"""
        for iteration, _, value in self.trajectory:
            if value <= threshold:
                return iteration
        return None

    def seconds_to_reach(self, threshold: float) -> float | None:
        for _, seconds, value in self.trajectory:
            if value <= threshold:
                return seconds
        return None


class TraceRecorder:
    """Samples the exact cost every ``log_every`` updates"""

    def __init__(
        self,
        signal: MultivariateSignal,
        dictionary: Dictionary,
        code: SparseCode,
        reg: float,
        log_every: int,
        name: str = "solver",
    ):
        self.signal = signal
        self.dictionary = dictionary
        self.code = code
        self.reg = reg
        self.log_every = log_every
        self.name = name
        self.trace = SolveTrace()
        self._start = time.perf_counter()
        self.record(0)

    def record(self, iterations: int) -> None:
        value = cost(self.signal, self.dictionary, self.code, self.reg)
        seconds = time.perf_counter() - self._start
        self.trace.trajectory.append((iterations, seconds, value))
        logger.debug("%s: %d updates, cost %.6g", self.name, iterations, value)

    def step(self, iterations: int) -> None:
        if iterations % self.log_every == 0:
            self.record(iterations)

    def finish(
        self,
        iterations: int,
        final_max_dz: float,
        converged: bool,
        evaluations: int,
        steps: int,
    ) -> SolveTrace:
        if self.trace.trajectory[-1][0] != iterations:
            self.record(iterations)
        self.trace.iterations = iterations
        self.trace.final_max_dz = final_max_dz
        self.trace.converged = converged
        self.trace.evaluations = evaluations
        self.trace.steps = steps
        logger.info(
            "%s: %s after %d updates, cost %.6g, max|dZ| %.3g",
            self.name,
            "converged" if converged else "stopped",
            iterations,
            self.trace.final_cost,
            final_max_dz,
        )
        return self.trace
