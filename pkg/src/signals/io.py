"""CSC1 binary records and CSV import/export for signals, dictionaries and codes"""

import math
from pathlib import Path

import numpy as np
import pandas as pd

from ..errors import FormatError
from .types import Dictionary, MultivariateSignal, SparseCode

MAGIC = b"CSC1"
KIND_SIGNAL = 1
KIND_DICTIONARY = 2
KIND_CODE = 3

_N_DIMS = {KIND_SIGNAL: 2, KIND_DICTIONARY: 3, KIND_CODE: 2}

Record = MultivariateSignal | Dictionary | SparseCode


def encode_csc1(record: Record) -> bytes:
    """Serialize a record: magic, kind byte, u64 LE dims, f64 LE row-major data"""
    if isinstance(record, MultivariateSignal):
        kind, data = KIND_SIGNAL, record.samples
    elif isinstance(record, Dictionary):
        kind, data = KIND_DICTIONARY, record.atoms
    elif isinstance(record, SparseCode):
        kind, data = KIND_CODE, record.codes
    else:
        raise TypeError(f"cannot encode {type(record).__name__} as CSC1")

    header = MAGIC + bytes([kind]) + np.asarray(data.shape, dtype="<u8").tobytes()
    return header + np.ascontiguousarray(data, dtype="<f8").tobytes()


def decode_csc1(payload: bytes) -> Record:
    if len(payload) < 5 or payload[:4] != MAGIC:
        raise FormatError("missing CSC1 magic")
    kind = payload[4]
    if kind not in _N_DIMS:
        raise FormatError(f"unknown CSC1 record kind {kind}")

    n_dims = _N_DIMS[kind]
    header_end = 5 + 8 * n_dims
    if len(payload) < header_end:
        raise FormatError("truncated CSC1 header")
    dims = tuple(int(d) for d in np.frombuffer(payload[5:header_end], dtype="<u8"))
    expected = header_end + 8 * math.prod(dims)
    if len(payload) != expected:
        raise FormatError(f"CSC1 payload has {len(payload)} bytes, expected {expected}")

    try:
        data = np.frombuffer(payload[header_end:], dtype="<f8").reshape(dims)
    except ValueError as e:
        raise FormatError(f"CSC1 dims {dims} are not a valid array shape") from e
    data = data.astype(np.float64)
    if kind == KIND_SIGNAL:
        return MultivariateSignal(data)
    if kind == KIND_DICTIONARY:
        return Dictionary(data)
    return SparseCode(data)


def write_csc1(path: Path, record: Record) -> None:
    Path(path).write_bytes(encode_csc1(record))


def read_csc1(path: Path) -> Record:
    return decode_csc1(Path(path).read_bytes())


def read_signal(path: Path) -> MultivariateSignal:
    """Read a signal from a CSC1 file or a ``t,ch0,...`` CSV"""
    path = Path(path)
    record = read_signal_csv(path) if path.suffix == ".csv" else read_csc1(path)
    if not isinstance(record, MultivariateSignal):
        raise FormatError(f"{path} does not hold a signal")
    return record


def read_dictionary(path: Path) -> Dictionary:
    record = read_csc1(path)
    if not isinstance(record, Dictionary):
        raise FormatError(f"{path} does not hold a dictionary")
    return record


def write_signal_csv(path: Path, signal: MultivariateSignal) -> None:
    frame = pd.DataFrame(
        signal.samples, columns=[f"ch{p}" for p in range(signal.n_channels)]
    )
    frame.insert(0, "t", np.arange(signal.n_times))
    frame.to_csv(path, index=False, float_format="%.17g")


def read_signal_csv(path: Path) -> MultivariateSignal:
    frame = pd.read_csv(path, float_precision="round_trip")
    channels = [c for c in frame.columns if c.startswith("ch")]
    if list(frame.columns[:1]) != ["t"] or not channels:
        raise FormatError(f"{path}: expected header 't,ch0,...'")
    frame = frame.sort_values("t")
    if not np.array_equal(frame["t"].to_numpy(), np.arange(len(frame))):
        raise FormatError(f"{path}: time column must cover 0..T-1")
    return MultivariateSignal(frame[channels].to_numpy(dtype=np.float64))


def write_code_csv(path: Path, code: SparseCode) -> None:
    """Time-major export of a sparse code, header ``t,k0,k1,...``"""
    frame = pd.DataFrame(code.codes.T, columns=[f"k{k}" for k in range(code.n_atoms)])
    frame.insert(0, "t", np.arange(code.n_times))
    frame.to_csv(path, index=False, float_format="%.17g")


def read_code_csv(path: Path) -> SparseCode:
    frame = pd.read_csv(path, float_precision="round_trip").sort_values("t")
    atoms = [c for c in frame.columns if c != "t"]
    return SparseCode(frame[atoms].to_numpy(dtype=np.float64).T)
