"""Free-running DICOD: one OS process per worker, queues as links"""

import logging
import multiprocessing as mp
import queue
import time
import traceback

import numpy as np

from ...errors import WorkerFailure
from ...signals.kernels import cost
from ...signals.types import Dictionary, MultivariateSignal
from ..config import DicodConfig
from ..messages import ProbeReply
from ..partition import SegmentAssignment, partition
from ..runtime_interface import RunOutcome, assemble_code
from ..termination import TerminationDetector
from ..worker import WorkerState, receive_messages, signal_slice, worker_step

logger = logging.getLogger(__name__)

_POLL_SECONDS = 0.05


def _serve(
    segment: SegmentAssignment,
    samples: np.ndarray,
    atoms: np.ndarray,
    config: DicodConfig,
    n_times: int,
    inbox: mp.Queue,
    peers: dict[int, mp.Queue],
    replies: mp.Queue,
    results: mp.Queue,
    start: float,
) -> None:
    """Worker main loop: drain the inbox, step, answer probes, stop on request"""
    try:
        state = WorkerState.create(
            segment,
            MultivariateSignal(samples),
            Dictionary(atoms),
            config.reg,
            config.tol,
            config.n_workers,
            n_times,
        )
        ready = time.perf_counter() - start
        timeline: list[tuple[float, float]] = []
        stopping = False
        while not stopping:
            exhausted = state.steps >= config.max_iter
            items = []
            try:
                if state.paused or exhausted:
                    items.append(inbox.get(timeout=_POLL_SECONDS))
                while True:
                    items.append(inbox.get_nowait())
            except queue.Empty:
                pass

            messages = [payload for kind, payload in items if kind == "update"]
            if exhausted:
                receive_messages(state, messages)
            elif messages or not state.paused:
                state.clock = state.steps + 1
                result = worker_step(state, messages)
                if result.update is not None:
                    timeline.append((time.perf_counter() - start, result.gain))
                for msg in result.outbound:
                    peers[msg.receiver].put(("update", msg))

            for kind, payload in items:
                if kind == "probe":
                    replies.put(
                        state.probe_reply(payload, exhausted=state.steps >= config.max_iter)
                    )
                elif kind == "stop":
                    stopping = True

        report = state.report()
        report.timeline = timeline
        report.ready_seconds = ready
        results.put(("done", segment.m, report))
    except Exception:
        results.put(("error", segment.m, traceback.format_exc()))


class ProcessRuntime:
    """Runs the workers concurrently and detects termination by probing them"""

    name = "free-running"

    def __init__(
        self, signal: MultivariateSignal, dictionary: Dictionary, config: DicodConfig
    ):
        self.signal = signal
        self.dictionary = dictionary
        self.config = config
        self.n_times = signal.n_times - dictionary.width + 1
        self.segments = partition(self.n_times, config.n_workers, dictionary.width)

    def run(self) -> RunOutcome:
        M = self.config.n_workers
        ctx = mp.get_context()
        inboxes = [ctx.Queue() for _ in range(M)]
        replies = ctx.Queue()
        results = ctx.Queue()
        start = time.perf_counter()
        procs = []
        for seg in self.segments:
            peers = {n: inboxes[n] for n in (seg.m - 1, seg.m + 1) if 0 <= n < M}
            proc = ctx.Process(
                target=_serve,
                args=(
                    seg,
                    signal_slice(self.signal, seg, self.dictionary.width).samples,
                    self.dictionary.atoms,
                    self.config,
                    self.n_times,
                    inboxes[seg.m],
                    peers,
                    replies,
                    results,
                    start,
                ),
                name=f"dicod-worker-{seg.m}",
                daemon=True,
            )
            proc.start()
            procs.append(proc)

        try:
            converged = self._wait_for_termination(inboxes, replies, results, procs, start)
            for inbox in inboxes:
                inbox.put(("stop", None))
            reports = self._collect(results, procs)
        finally:
            for proc in procs:
                proc.join(timeout=1.0)
                if proc.is_alive():
                    proc.terminate()

        seconds = time.perf_counter() - start
        warm_start = max(r.ready_seconds for r in reports)
        logger.info(
            "free-running DICOD: M=%d %s in %.3fs (%.3fs after initialization)",
            M,
            "terminated" if converged else "stopped",
            seconds,
            seconds - warm_start,
        )
        return RunOutcome(
            reports=reports,
            converged=converged,
            rounds=max(r.n_updates for r in reports),
            checkpoints=self._estimated_checkpoints(reports, seconds),
            seconds=seconds,
            warm_seconds=seconds - warm_start,
        )

    def _check_failures(self, results: mp.Queue, procs: list) -> None:
        try:
            kind, m, payload = results.get_nowait()
        except queue.Empty:
            kind = None
        if kind is not None:
            raise WorkerFailure(m, payload if kind == "error" else "reported before stop")
        for m, proc in enumerate(procs):
            if proc.exitcode not in (None, 0):
                raise WorkerFailure(m, f"exit code {proc.exitcode}")

    def _wait_for_termination(self, inboxes, replies, results, procs, start) -> bool:
        M = self.config.n_workers
        detector = TerminationDetector(M)
        deadline = start + self.config.timeout
        while time.perf_counter() < deadline:
            self._check_failures(results, procs)
            epoch = detector.next_epoch()
            for inbox in inboxes:
                inbox.put(("probe", epoch))
            answers: dict[int, ProbeReply] = {}
            while len(answers) < M and time.perf_counter() < deadline:
                try:
                    reply = replies.get(timeout=_POLL_SECONDS)
                except queue.Empty:
                    self._check_failures(results, procs)
                    continue
                if reply.epoch == epoch:
                    answers[reply.worker] = reply
            if detector.observe(list(answers.values())):
                return all(r.local_converged for r in answers.values())
            time.sleep(self.config.probe_interval)
        logger.warning("free-running DICOD: no termination within %.1fs", self.config.timeout)
        return False

    def _collect(self, results: mp.Queue, procs: list) -> list:
        reports = {}
        while len(reports) < len(procs):
            try:
                kind, m, payload = results.get(timeout=self.config.timeout)
            except queue.Empty as e:
                raise WorkerFailure(-1, "no result after stop") from e
            if kind == "error":
                raise WorkerFailure(m, payload)
            reports[m] = payload
        return [reports[m] for m in range(len(procs))]

    def _estimated_checkpoints(
        self, reports: list, seconds: float
    ) -> list[tuple[int, int, float, float]]:
        """Cost trajectory from the workers' timestamped gains, closed by the exact cost.

        Concurrent gains are summed as if sequential, so the estimate ignores
        interference between neighbors.
        """
        initial = 0.5 * float(np.sum(self.signal.samples**2))
        events = sorted(e for r in reports for e in r.timeline)
        checkpoints = [(0, 0, 0.0, initial)]
        value = initial
        for i, (stamp, gain) in enumerate(events, start=1):
            value -= gain
            if i % self.config.log_every == 0:
                checkpoints.append((i, i, stamp, value))
        code = assemble_code(reports, self.dictionary.n_atoms, self.n_times)
        total = len(events)
        checkpoints.append(
            (total, total, seconds, cost(self.signal, self.dictionary, code, self.config.reg))
        )
        return checkpoints
