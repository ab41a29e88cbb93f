"""Update logs: CSV persistence, sequential replay and the bounded-staleness check"""

import logging
from collections.abc import Sequence
from pathlib import Path

import pandas as pd

from ..errors import ConfigurationError, FormatError
from ..objective.beta import beta_init, commit_update, propose_update
from ..signals.types import Dictionary, MultivariateSignal, SparseCode
from .worker import UpdateRecord

logger = logging.getLogger(__name__)

LOG_COLUMNS = ["round", "worker", "k", "t", "old", "new", "interfering"]


def _ordered(records: Sequence[UpdateRecord]) -> list[UpdateRecord]:
    return sorted(records, key=lambda r: (r.round, r.worker, r.seq))


def update_log_frame(records: Sequence[UpdateRecord]) -> pd.DataFrame:
    rows = [
        (r.round, r.worker, r.k, r.t, r.old, r.new, int(r.interfering))
        for r in _ordered(records)
    ]
    return pd.DataFrame(rows, columns=LOG_COLUMNS)


def write_update_log(path: Path, records: Sequence[UpdateRecord]) -> None:
    update_log_frame(records).to_csv(path, index=False, float_format="%.17g")
    logger.info("Wrote %d log rows to %s", len(records), path)


def read_update_log(path: Path) -> list[UpdateRecord]:
    frame = pd.read_csv(path, float_precision="round_trip")
    if list(frame.columns) != LOG_COLUMNS:
        raise FormatError(f"{path}: expected columns {LOG_COLUMNS}, got {list(frame.columns)}")
    return [
        UpdateRecord(
            round=int(row.round),
            worker=int(row.worker),
            k=int(row.k),
            t=int(row.t),
            old=float(row.old),
            new=float(row.new),
            interfering=bool(row.interfering),
            seq=i,
        )
        for i, row in enumerate(frame.itertuples(index=False))
    ]


def replay_update_log(
    signal: MultivariateSignal,
    dictionary: Dictionary,
    reg: float,
    records: Sequence[UpdateRecord],
) -> SparseCode:
    """Apply the logged coordinates one at a time, in (round, worker) order.

    Each coordinate is re-optimized against the sequentially maintained beta,
    so the result is a valid coordinate-descent run over the same choices.
    """
    state = beta_init(signal, dictionary, reg=reg)
    for r in _ordered(records):
        commit_update(state, propose_update(state, r.k, r.t))
    return state.code


def check_h2(records: Sequence[UpdateRecord], n_workers: int, window: int) -> bool:
    """Each worker updates at least once every ``window`` rounds while it still has updates"""
    if window < 1:
        raise ConfigurationError(f"window must be >= 1, got {window}")
    rounds: dict[int, list[int]] = {m: [] for m in range(n_workers)}
    for r in records:
        rounds[r.worker].append(r.round)
    for seen in rounds.values():
        previous = 0
        for current in sorted(seen):
            if current - previous > window:
                return False
            previous = current
    return True
