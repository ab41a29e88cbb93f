"""Core numerical types: signals, atoms, dictionaries and sparse codes"""

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from ..errors import DimensionError


def _as_matrix(values, name: str) -> np.ndarray:
    array = np.array(values, dtype=np.float64)
    if array.ndim == 1:
        array = array[:, None]
    if array.ndim != 2:
        raise DimensionError(f"{name} must be 2-D (time x channels), got shape {array.shape}")
    return array


@dataclass(frozen=True, eq=False)
class MultivariateSignal:
    """A length-T sequence of P-dimensional samples, zero outside [0, T-1]"""

    samples: np.ndarray  # (T, P)

    def __post_init__(self):
        samples = _as_matrix(self.samples, "samples")
        if samples.shape[0] < 1 or samples.shape[1] < 1:
            raise DimensionError(f"signal needs T >= 1 and P >= 1, got {samples.shape}")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    @property
    def n_times(self) -> int:
        return self.samples.shape[0]

    @property
    def n_channels(self) -> int:
        return self.samples.shape[1]

    def at(self, t: int) -> np.ndarray:
        """Sample at time t, or the zero vector outside the support"""
        if 0 <= t < self.n_times:
            return self.samples[t]
        return np.zeros(self.n_channels)

    @classmethod
    def zeros(cls, n_times: int, n_channels: int) -> "MultivariateSignal":
        return cls(np.zeros((n_times, n_channels)))


@dataclass(frozen=True, eq=False)
class Atom:
    """One W x P pattern of a dictionary"""

    weights: np.ndarray  # (W, P)

    def __post_init__(self):
        weights = _as_matrix(self.weights, "weights")
        if weights.shape[0] < 1:
            raise DimensionError("atom needs W >= 1")
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)

    @property
    def width(self) -> int:
        return self.weights.shape[0]

    @property
    def n_channels(self) -> int:
        return self.weights.shape[1]

    @property
    def sq_norm(self) -> float:
        return float(np.sum(self.weights * self.weights))


@dataclass(frozen=True, eq=False)
class CrossCorrTable:
    """Pairwise atom cross-correlations S_{k,l}[t] for lags -W+1 ... W-1.

    ``table[k, l, t + W - 1]`` stores ``sum_tau <D_k[tau], D_l[tau + t]>``.
    """

    table: np.ndarray  # (K, K, 2W - 1)

    @property
    def width(self) -> int:
        return (self.table.shape[2] + 1) // 2

    def lag(self, k: int, l: int, t: int) -> float:
        """S_{k,l}[t], zero for |t| >= W"""
        W = self.width
        if abs(t) >= W:
            return 0.0
        return float(self.table[k, l, t + W - 1])


@dataclass(frozen=True, eq=False)
class Dictionary:
    """K atoms sharing W and P, with cached squared norms and cross-correlations"""

    atoms: np.ndarray  # (K, W, P)
    sq_norms: np.ndarray = field(init=False)
    cross_corr: CrossCorrTable = field(init=False)

    def __post_init__(self):
        from .kernels import cross_correlation_table

        atoms = np.array(self.atoms, dtype=np.float64)
        if atoms.ndim == 2:
            atoms = atoms[:, :, None]
        if atoms.ndim != 3 or min(atoms.shape) < 1:
            raise DimensionError(f"atoms must have shape (K, W, P), got {atoms.shape}")
        sq_norms = np.sum(atoms * atoms, axis=(1, 2))
        if np.any(sq_norms <= 0):
            bad = int(np.flatnonzero(sq_norms <= 0)[0])
            raise DimensionError(f"atom {bad} has zero norm")
        atoms.setflags(write=False)
        sq_norms.setflags(write=False)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "sq_norms", sq_norms)
        object.__setattr__(self, "cross_corr", cross_correlation_table(atoms))

    @classmethod
    def from_atoms(cls, atoms: list[Atom]) -> "Dictionary":
        shapes = {a.weights.shape for a in atoms}
        if len(shapes) != 1:
            raise DimensionError(f"atoms must share (W, P), got {sorted(shapes)}")
        return cls(np.stack([a.weights for a in atoms]))

    @property
    def n_atoms(self) -> int:
        return self.atoms.shape[0]

    @property
    def width(self) -> int:
        return self.atoms.shape[1]

    @property
    def n_channels(self) -> int:
        return self.atoms.shape[2]

    def atom(self, k: int) -> Atom:
        return Atom(self.atoms[k])

    def __iter__(self) -> Iterator[Atom]:
        return (self.atom(k) for k in range(self.n_atoms))

    def __len__(self) -> int:
        return self.n_atoms

    def subset(self, order) -> "Dictionary":
        """Dictionary with atoms taken in the given order"""
        return Dictionary(self.atoms[list(order)])


@dataclass(eq=False)
class SparseCode:
    """K activation signals of length L = T - W + 1 (the variable Z)"""

    codes: np.ndarray  # (K, L)

    def __post_init__(self):
        codes = np.array(self.codes, dtype=np.float64)
        if codes.ndim != 2 or min(codes.shape) < 1:
            raise DimensionError(f"codes must have shape (K, L), got {codes.shape}")
        self.codes = codes

    @classmethod
    def zeros(cls, n_atoms: int, n_times: int) -> "SparseCode":
        return cls(np.zeros((n_atoms, n_times)))

    @classmethod
    def for_problem(cls, signal: MultivariateSignal, dictionary: Dictionary) -> "SparseCode":
        return cls.zeros(dictionary.n_atoms, signal.n_times - dictionary.width + 1)

    @property
    def n_atoms(self) -> int:
        return self.codes.shape[0]

    @property
    def n_times(self) -> int:
        return self.codes.shape[1]

    def at(self, k: int, t: int) -> float:
        if 0 <= t < self.n_times:
            return float(self.codes[k, t])
        return 0.0

    def copy(self) -> "SparseCode":
        return SparseCode(self.codes.copy())

    def nnz(self) -> int:
        return int(np.count_nonzero(self.codes))
