"""A single DICOD worker: local beta, border messages and interference bookkeeping"""

import logging
from dataclasses import dataclass, field

import numpy as np

from ..errors import ProtocolViolation
from ..objective.beta import CoordinateUpdate, apply_cross_corr_update, optimal_value
from ..objective.deltas import delta_cost_single
from ..signals.kernels import correlate_all
from ..signals.types import Dictionary, MultivariateSignal
from ..solvers.selection import full_scan_argmax, local_dz
from .messages import ProbeReply, UpdateMessage
from .partition import SegmentAssignment

logger = logging.getLogger(__name__)


@dataclass
class UpdateRecord:
    """One row of the update log"""

    round: int
    worker: int
    k: int
    t: int
    old: float
    new: float
    interfering: bool = False
    seq: int = 0


@dataclass(frozen=True)
class InterferenceEvent:
    """Two concurrent border updates closer than W, seen by the higher-index worker"""

    mine: UpdateMessage
    theirs: UpdateMessage


@dataclass
class StepResult:
    update: CoordinateUpdate | None
    outbound: list[UpdateMessage]
    local_converged: bool
    gain: float = 0.0


@dataclass
class WorkerReport:
    """What a worker hands back once the run is over"""

    segment: SegmentAssignment
    codes: np.ndarray
    log: list[UpdateRecord]
    events: list[InterferenceEvent]
    n_updates: int
    border_updates: int
    interfering_pairs: int
    multi_interference: int
    sent: int
    received: int
    steps: int
    local_converged: bool
    timeline: list[tuple[float, float]] = field(default_factory=list)
    ready_seconds: float = 0.0


def signal_slice(
    signal: MultivariateSignal, segment: SegmentAssignment, width: int
) -> MultivariateSignal:
    """Samples a worker needs to build beta over its extended range"""
    lo, hi = segment.extended(signal.n_times - width + 1)
    return MultivariateSignal(signal.samples[lo : hi + width])


@dataclass(eq=False)
class WorkerState:
    """State owned by worker m; only the worker itself writes to it.

    ``beta`` covers the extended range (owned times plus a W-1 halo), starting
    at absolute time ``offset``; ``codes`` covers the owned times only.
    """

    segment: SegmentAssignment
    n_workers: int
    dictionary: Dictionary
    reg: float
    tol: float
    beta: np.ndarray
    offset: int
    codes: np.ndarray
    paused: bool = False
    local_converged: bool = False
    clock: int = 0
    steps: int = 0
    seq: int = 0
    generation: int = 0
    sent: int = 0
    received: int = 0
    n_updates: int = 0
    border_updates: int = 0
    interfering_pairs: int = 0
    multi_interference: int = 0
    acks: dict[int, int] = field(default_factory=dict)
    unacked: dict[int, list[UpdateMessage]] = field(default_factory=dict)
    log: list[UpdateRecord] = field(default_factory=list)
    events: list[InterferenceEvent] = field(default_factory=list)
    _log_index: dict[int, int] = field(default_factory=dict)

    @classmethod
    def create(
        cls,
        segment: SegmentAssignment,
        local_signal: MultivariateSignal,
        dictionary: Dictionary,
        reg: float,
        tol: float,
        n_workers: int,
        n_times: int,
    ) -> "WorkerState":
        """Initialize beta over the extended range from the worker's slice of X"""
        lo, hi = segment.extended(n_times)
        beta = correlate_all(dictionary, local_signal)
        if beta.shape[1] != hi - lo + 1:
            raise ProtocolViolation(
                f"worker {segment.m}: slice gives {beta.shape[1]} beta columns, "
                f"expected {hi - lo + 1}"
            )
        neighbors = [n for n in (segment.m - 1, segment.m + 1) if 0 <= n < n_workers]
        return cls(
            segment=segment,
            n_workers=n_workers,
            dictionary=dictionary,
            reg=reg,
            tol=tol,
            beta=beta,
            offset=lo,
            codes=np.zeros((dictionary.n_atoms, segment.length)),
            acks={n: 0 for n in neighbors},
            unacked={n: [] for n in neighbors},
        )

    @property
    def m(self) -> int:
        return self.segment.m

    def owned_beta(self) -> np.ndarray:
        lo = self.segment.start - self.offset
        return self.beta[:, lo : lo + self.segment.length]

    def probe_reply(self, epoch: int, exhausted: bool = False) -> ProbeReply:
        return ProbeReply(
            worker=self.m,
            epoch=epoch,
            local_converged=self.local_converged,
            sent=self.sent,
            received=self.received,
            generation=self.generation,
            exhausted=exhausted,
        )

    def report(self) -> WorkerReport:
        return WorkerReport(
            segment=self.segment,
            codes=self.codes,
            log=self.log,
            events=self.events,
            n_updates=self.n_updates,
            border_updates=self.border_updates,
            interfering_pairs=self.interfering_pairs,
            multi_interference=self.multi_interference,
            sent=self.sent,
            received=self.received,
            steps=self.steps,
            local_converged=self.local_converged,
        )


def receive_messages(state: WorkerState, inbox: list[UpdateMessage]) -> None:
    """Fold neighbor updates into beta and check them against our unacknowledged ones"""
    W = state.dictionary.width
    seg = state.segment
    for msg in inbox:
        if msg.sender not in state.acks or msg.receiver != state.m:
            raise ProtocolViolation(
                f"worker {state.m} got a message from {msg.sender} addressed to {msg.receiver}"
            )
        if seg.start <= msg.t0 <= seg.end or not (seg.start - W <= msg.t0 <= seg.end + W):
            raise ProtocolViolation(
                f"worker {state.m} owning [{seg.start}, {seg.end}] got an update at t={msg.t0}"
            )

        apply_cross_corr_update(
            state.beta, state.offset, state.dictionary.cross_corr, msg.k0, msg.t0, msg.delta
        )
        state.received += 1
        state.generation += 1
        state.acks[msg.sender] = msg.seq

        # Our updates the sender had not seen when it made this one.
        pending = [u for u in state.unacked[msg.sender] if u.seq > msg.ack]
        state.unacked[msg.sender] = pending
        hits = [u for u in pending if abs(u.t0 - msg.t0) < W]
        for mine in hits:
            state.log[state._log_index[mine.seq]].interfering = True
            if state.m > msg.sender:
                state.interfering_pairs += 1
                state.events.append(InterferenceEvent(mine=mine, theirs=msg))
        if len(hits) > 1:
            state.multi_interference += 1

    if inbox:
        state.paused = False
        state.local_converged = False


def worker_step(state: WorkerState, inbox: list[UpdateMessage]) -> StepResult:
    """Consume the inbox, then make the locally greedy update if it is large enough"""
    state.steps += 1
    receive_messages(state, inbox)
    if state.paused:
        return StepResult(update=None, outbound=[], local_converged=True)

    seg = state.segment
    sq_norms = state.dictionary.sq_norms
    owned = state.owned_beta()
    k0, t_rel, _ = full_scan_argmax(np.abs(local_dz(owned, state.codes, state.reg, sq_norms)))
    t0 = seg.start + t_rel
    beta_value = float(owned[k0, t_rel])
    upd = CoordinateUpdate(
        k0=k0,
        t0=t0,
        old_value=float(state.codes[k0, t_rel]),
        new_value=optimal_value(beta_value, state.reg, sq_norms[k0]),
    )
    if abs(upd.delta) < state.tol:
        state.local_converged = True
        state.paused = True
        return StepResult(update=None, outbound=[], local_converged=True)

    gain = delta_cost_single(
        upd.old_value, upd.new_value, beta_value, float(sq_norms[k0]), state.reg
    )
    apply_cross_corr_update(
        state.beta, state.offset, state.dictionary.cross_corr, k0, t0, upd.delta
    )
    state.codes[k0, t_rel] = upd.new_value
    state.seq += 1
    state.n_updates += 1
    state.generation += 1
    state.local_converged = False
    state._log_index[state.seq] = len(state.log)
    state.log.append(
        UpdateRecord(
            round=state.clock,
            worker=state.m,
            k=k0,
            t=t0,
            old=upd.old_value,
            new=upd.new_value,
            seq=state.seq,
        )
    )

    W = state.dictionary.width
    receivers = []
    if seg.m > 0 and t0 - seg.start < W:
        receivers.append(seg.m - 1)
    if seg.m < state.n_workers - 1 and seg.end + 1 - t0 <= W:
        receivers.append(seg.m + 1)

    outbound = []
    for n in receivers:
        msg = UpdateMessage(
            k0=k0,
            t0=t0,
            delta=upd.delta,
            sender=seg.m,
            receiver=n,
            seq=state.seq,
            ack=state.acks[n],
            gain=gain,
        )
        state.unacked[n].append(msg)
        outbound.append(msg)
    state.sent += len(outbound)
    if outbound:
        state.border_updates += 1
    return StepResult(update=upd, outbound=outbound, local_converged=False, gain=gain)
