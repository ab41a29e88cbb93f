"""Signal types and convolution kernels."""

from .types import Atom, CrossCorrTable, Dictionary, MultivariateSignal, SparseCode
from .kernels import (
    convolve,
    correlate,
    correlate_all,
    cost,
    cross_correlation_table,
    reconstruct,
    residual,
)

__all__ = [
    "Atom",
    "CrossCorrTable",
    "Dictionary",
    "MultivariateSignal",
    "SparseCode",
    "convolve",
    "correlate",
    "correlate_all",
    "cost",
    "cross_correlation_table",
    "reconstruct",
    "residual",
]
