"""Dictionary coherence check (hypothesis H1)"""

from dataclasses import dataclass

import numpy as np

from ..signals.types import Dictionary


@dataclass
class H1Report:
    """Outcome of the coherence scan"""

    holds: bool
    worst: tuple[int, int, int, float]  # (k0, k1, lag, C)

    def as_row(self) -> dict:
        k0, k1, lag, value = self.worst
        return {"holds": self.holds, "k0": k0, "k1": k1, "lag": lag, "coherence": value}


def normalized_cross_corr(dictionary: Dictionary) -> np.ndarray:
    """C_{k0,k1}[t] = S_{k0,k1}[t] / (||D_k0|| ||D_k1||), shape (K, K, 2W - 1)"""
    norms = np.sqrt(dictionary.sq_norms)
    return dictionary.cross_corr.table / (norms[:, None, None] * norms[None, :, None])


def check_h1(dictionary: Dictionary, tol: float = 1e-12) -> H1Report:
    """Check |C_{k0,k1}[t]| < 1 over all pairs, skipping k0 = k1 at lag 0.

    The skipped entries are a coordinate paired with itself, not two concurrent
    updates. ``tol`` absorbs rounding so that a duplicated atom reports C = 1.
    """
    W = dictionary.width
    scaled = normalized_cross_corr(dictionary)
    magnitude = np.abs(scaled)
    diag = np.arange(dictionary.n_atoms)
    magnitude[diag, diag, W - 1] = -1.0

    k0, k1, idx = np.unravel_index(int(np.argmax(magnitude)), magnitude.shape)
    worst_value = float(magnitude[k0, k1, idx])
    if worst_value < 0:
        # K = 1 and W = 1: nothing to compare.
        return H1Report(holds=True, worst=(0, 0, 0, 0.0))
    return H1Report(
        holds=worst_value < 1.0 - tol,
        worst=(int(k0), int(k1), int(idx) - (W - 1), float(scaled[k0, k1, idx])),
    )
