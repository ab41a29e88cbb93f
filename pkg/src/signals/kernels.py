"""Direct-summation convolution and correlation kernels.

All kernels evaluate the defining sums (no FFT), so the O(KW) cost of a
coordinate update stays visible. Index conventions:

    convolve:  (z * D)[t]      = sum_{tau=0}^{W-1} z[t - tau] D[tau]
    correlate: beta[t]         = sum_{tau=0}^{W-1} <D[tau], X[t + tau]>,  t in [0, L-1]
    S_{k,l}[t]                 = sum_tau <D_k[tau], D_l[tau + t]>,        |t| < W
"""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..errors import ConfigurationError, DimensionError
from .types import Atom, CrossCorrTable, Dictionary, MultivariateSignal, SparseCode


def convolve(
    activation: np.ndarray, atom: Atom, n_channels: int | None = None
) -> MultivariateSignal:
    """Full linear convolution of one activation signal with one atom.

    Args:
        activation: Length-L activation Z_k
        atom: Atom D_k of width W
        n_channels: Expected P; a mismatching atom raises DimensionError

    Returns:
        Signal of length T = L + W - 1
    """
    z = np.asarray(activation, dtype=np.float64)
    if z.ndim != 1 or z.size < 1:
        raise DimensionError(f"activation must be a non-empty 1-D array, got shape {z.shape}")
    if n_channels is not None and atom.n_channels != n_channels:
        raise DimensionError(f"atom has P={atom.n_channels}, expected P={n_channels}")
    out = np.stack([np.convolve(z, atom.weights[:, p]) for p in range(atom.n_channels)], axis=1)
    return MultivariateSignal(out)


def correlate(atom: Atom, signal: MultivariateSignal) -> np.ndarray:
    """Valid-mode cross-correlation of an atom with a signal, summed over channels"""
    _check_channels(atom.n_channels, signal.n_channels)
    if signal.n_times < atom.width:
        raise DimensionError(f"signal length {signal.n_times} < atom width {atom.width}")
    x = signal.samples
    out = np.zeros(signal.n_times - atom.width + 1)
    for p in range(atom.n_channels):
        out += np.correlate(x[:, p], atom.weights[:, p], mode="valid")
    return out


def cross_correlation_table(atoms: np.ndarray) -> CrossCorrTable:
    """Cross-correlation table S of a (K, W, P) atom array"""
    atoms = np.asarray(atoms, dtype=np.float64)
    K, W, P = atoms.shape
    table = np.zeros((K, K, 2 * W - 1))
    for k in range(K):
        for l in range(K):
            for p in range(P):
                table[k, l] += np.correlate(atoms[l, :, p], atoms[k, :, p], mode="full")
    # Zero-lag diagonal is exactly the squared norm.
    table[np.arange(K), np.arange(K), W - 1] = np.sum(atoms * atoms, axis=(1, 2))
    table.setflags(write=False)
    return CrossCorrTable(table)


def reconstruct(code: SparseCode, dictionary: Dictionary) -> MultivariateSignal:
    """Sum over k of Z_k * D_k, evaluated for all atoms at once"""
    K, W, _ = dictionary.atoms.shape
    if code.n_atoms != K:
        raise DimensionError(f"code has {code.n_atoms} rows, dictionary has {K} atoms")
    padded = np.pad(code.codes, ((0, 0), (W - 1, W - 1)))
    # windows[k, s, j] = Z_k[s + j - W + 1]
    windows = sliding_window_view(padded, W, axis=1)
    return MultivariateSignal(np.einsum("ksj,kjp->sp", windows, dictionary.atoms[:, ::-1, :]))


def correlate_all(dictionary: Dictionary, signal: MultivariateSignal) -> np.ndarray:
    """correlate(D_k, X) for every atom, as a (K, L) array"""
    _check_channels(dictionary.n_channels, signal.n_channels)
    W = dictionary.width
    if signal.n_times < W:
        raise DimensionError(f"signal length {signal.n_times} < atom width {W}")
    # windows[t, p, j] = X[t + j, p]
    windows = sliding_window_view(signal.samples, W, axis=0)
    return np.einsum("tpj,kjp->kt", windows, dictionary.atoms)


def residual(
    signal: MultivariateSignal, dictionary: Dictionary, code: SparseCode
) -> MultivariateSignal:
    check_problem(signal, dictionary, code)
    return MultivariateSignal(signal.samples - reconstruct(code, dictionary).samples)


def cost(
    signal: MultivariateSignal, dictionary: Dictionary, code: SparseCode, reg: float
) -> float:
    """E(Z) = 1/2 ||X - sum_k Z_k * D_k||^2 + reg * sum_k ||Z_k||_1"""
    if reg <= 0:
        raise ConfigurationError(f"regularization must be > 0, got {reg}")
    res = residual(signal, dictionary, code).samples
    return float(0.5 * np.sum(res * res) + reg * np.sum(np.abs(code.codes)))


def check_problem(
    signal: MultivariateSignal, dictionary: Dictionary, code: SparseCode | None = None
) -> None:
    """Raise DimensionError unless (X, D, Z) have consistent shapes"""
    _check_channels(dictionary.n_channels, signal.n_channels)
    n_times = signal.n_times - dictionary.width + 1
    if n_times < 1:
        raise DimensionError(f"signal length {signal.n_times} < atom width {dictionary.width}")
    if code is not None and code.codes.shape != (dictionary.n_atoms, n_times):
        raise DimensionError(
            f"code shape {code.codes.shape} != (K, L) = ({dictionary.n_atoms}, {n_times})"
        )


def _check_channels(atom_channels: int, signal_channels: int) -> None:
    if atom_channels != signal_channels:
        raise DimensionError(f"atom has P={atom_channels}, signal has P={signal_channels}")
