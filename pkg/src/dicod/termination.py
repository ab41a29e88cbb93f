"""Global termination detection by repeated counter probes"""

from collections.abc import Sequence

from .messages import ProbeReply


def _quiet(replies: Sequence[ProbeReply]) -> bool:
    return all(r.local_converged or r.exhausted for r in replies) and sum(
        r.sent for r in replies
    ) == sum(r.received for r in replies)


def _snapshot(replies: Sequence[ProbeReply]) -> tuple:
    return tuple(
        sorted((r.worker, r.sent, r.received, r.generation) for r in replies)
    )


def detect_termination(
    current: Sequence[ProbeReply], previous: Sequence[ProbeReply] | None
) -> bool:
    """True iff two consecutive probes both saw every worker idle with no message in flight.

    A single probe is not enough: a worker may report before a message is
    sent to it and its neighbor after. If nothing changed between two quiet
    probes, no update or delivery happened in between.
    """
    if previous is None or not _quiet(current) or not _quiet(previous):
        return False
    return _snapshot(current) == _snapshot(previous)


class TerminationDetector:
    """Stateful wrapper that remembers the previous probe"""

    def __init__(self, n_workers: int):
        self.n_workers = n_workers
        self.epoch = 0
        self.previous: list[ProbeReply] | None = None
        self.fired = False

    def next_epoch(self) -> int:
        self.epoch += 1
        return self.epoch

    def observe(self, replies: Sequence[ProbeReply]) -> bool:
        if len(replies) != self.n_workers:
            return False
        self.fired = detect_termination(replies, self.previous)
        self.previous = list(replies)
        return self.fired
