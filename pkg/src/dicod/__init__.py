"""Distributed convolutional coordinate descent (DICOD)."""

from .config import DicodConfig
from .messages import ProbeReply, UpdateMessage
from .partition import SegmentAssignment, partition
from .schedule import ScheduleScript, check_h3
from .solver import DicodRun, dicod_solve, run_dicod
from .stats import (
    InterferenceRate,
    InterferenceStats,
    interference_rate,
    simulate_uniform_interference,
)
from .termination import TerminationDetector, detect_termination
from .update_log import check_h2, read_update_log, replay_update_log, write_update_log
from .worker import UpdateRecord, WorkerState, worker_step

__all__ = [
    "DicodConfig",
    "DicodRun",
    "InterferenceRate",
    "InterferenceStats",
    "ProbeReply",
    "ScheduleScript",
    "SegmentAssignment",
    "TerminationDetector",
    "UpdateMessage",
    "UpdateRecord",
    "WorkerState",
    "check_h2",
    "check_h3",
    "detect_termination",
    "dicod_solve",
    "interference_rate",
    "partition",
    "read_update_log",
    "replay_update_log",
    "run_dicod",
    "simulate_uniform_interference",
    "worker_step",
    "write_update_log",
]
