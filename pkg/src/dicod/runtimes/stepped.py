"""Deterministic round-based interleaving of DICOD workers in one process"""

import logging
import time
from collections import deque

from ...errors import ProtocolViolation
from ...signals.kernels import cost
from ...signals.types import Dictionary, MultivariateSignal
from ..config import DicodConfig
from ..messages import UpdateMessage
from ..partition import partition
from ..runtime_interface import RunOutcome, assemble_code
from ..schedule import ScheduleScript
from ..termination import TerminationDetector
from ..worker import StepResult, WorkerState, signal_slice, worker_step

logger = logging.getLogger(__name__)


class SteppedRuntime:
    """Runs every worker in lockstep rounds under a seeded schedule.

    A round delivers the messages due, then lets each active worker (in a
    seeded order) consume its inbox and make at most one update. Identical
    inputs and seed give identical runs.
    """

    name = "stepped"

    def __init__(
        self, signal: MultivariateSignal, dictionary: Dictionary, config: DicodConfig
    ):
        self.signal = signal
        self.dictionary = dictionary
        self.config = config
        self.script = ScheduleScript.from_config(config)
        self.rng = self.script.rng()
        self.n_times = signal.n_times - dictionary.width + 1
        self.segments = partition(self.n_times, config.n_workers, dictionary.width)
        self.workers = [
            WorkerState.create(
                seg,
                signal_slice(signal, seg, dictionary.width),
                dictionary,
                config.reg,
                config.tol,
                config.n_workers,
                self.n_times,
            )
            for seg in self.segments
        ]
        M = config.n_workers
        self.links: dict[tuple[int, int], deque[tuple[int, UpdateMessage]]] = {
            (m, n): deque() for m in range(M) for n in (m - 1, m + 1) if 0 <= n < M
        }
        self.inboxes: list[list[UpdateMessage]] = [[] for _ in range(M)]
        self.detector = TerminationDetector(M)
        self.round = 0
        self.active_rounds = 0
        self.terminated = False

    def in_flight(self) -> int:
        return sum(len(q) for q in self.links.values()) + sum(len(i) for i in self.inboxes)

    def _deliver(self) -> None:
        for (_, dst), queue in self.links.items():
            while queue and queue[0][0] <= self.round:
                self.inboxes[dst].append(queue.popleft()[1])

    def _send(self, msg: UpdateMessage) -> None:
        queue = self.links[(msg.sender, msg.receiver)]
        due = self.round + int(self.rng.integers(1, self.script.d_max + 1))
        if queue:
            due = max(due, queue[-1][0])  # FIFO per link
        queue.append((due, msg))

    def step_round(self) -> list[StepResult]:
        """Advance one round; returns the results of the steps that made an update"""
        self.round += 1
        self._deliver()
        results = []
        for m in self.rng.permutation(len(self.workers)):
            worker = self.workers[m]
            inbox = self.inboxes[m]
            if worker.paused and not inbox:
                continue
            p = self.script.step_probability
            if p < 1 and self.rng.random() >= p:
                continue
            self.inboxes[m] = []
            worker.clock = self.round
            result = worker_step(worker, inbox)
            for msg in result.outbound:
                self._send(msg)
            if result.update is not None:
                results.append(result)
        if results:
            self.active_rounds += 1
        return results

    def probe(self) -> bool:
        epoch = self.detector.next_epoch()
        replies = [w.probe_reply(epoch) for w in self.workers]
        if not self.detector.observe(replies):
            return False
        if self.in_flight():
            raise ProtocolViolation(
                f"termination detected with {self.in_flight()} messages in flight"
            )
        return True

    def _checkpoint(self, checkpoints: list, start: float) -> None:
        code = assemble_code(
            [w.report() for w in self.workers], self.dictionary.n_atoms, self.n_times
        )
        updates = sum(w.n_updates for w in self.workers)
        value = cost(self.signal, self.dictionary, code, self.config.reg)
        checkpoints.append((self.round, updates, time.perf_counter() - start, value))

    def run(self) -> RunOutcome:
        start = time.perf_counter()
        checkpoints: list[tuple[int, int, float, float]] = []
        self._checkpoint(checkpoints, start)
        for _ in range(self.config.max_iter):
            self.step_round()
            if self.round % self.config.log_every == 0:
                self._checkpoint(checkpoints, start)
            if self.round % self.config.probe_every == 0 and self.probe():
                self.terminated = True
                break
        if checkpoints[-1][0] != self.round:
            self._checkpoint(checkpoints, start)

        seconds = time.perf_counter() - start
        logger.info(
            "stepped DICOD: M=%d %s after %d rounds (%d with updates)",
            len(self.workers),
            "terminated" if self.terminated else "stopped",
            self.round,
            self.active_rounds,
        )
        return RunOutcome(
            reports=[w.report() for w in self.workers],
            converged=self.terminated,
            rounds=self.active_rounds,
            checkpoints=checkpoints,
            seconds=seconds,
            warm_seconds=seconds,
        )
