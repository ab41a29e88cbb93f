"""Synthetic Bernoulli-Gaussian convolutional instances"""

import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..errors import ConfigurationError
from ..signals.kernels import correlate_all, reconstruct
from ..signals.types import Dictionary, MultivariateSignal, SparseCode

logger = logging.getLogger(__name__)

# lambda is re-tuned when its initial active fraction falls outside (0, MAX_DENSITY]
MAX_DENSITY = 0.25
AUTO_REG_FRACTION = 0.1


class GenerationSpec(BaseModel):
    """Shape and distribution of a synthetic problem.

    Defaults are the desk-scale instance (T = 300 W); ``full_scale`` gives the
    full-size one.
    """

    model_config = ConfigDict(frozen=True)

    n_times: int = Field(default=6000, ge=1, description="Signal length T")
    width: int = Field(default=20, ge=1, description="Atom length W")
    n_atoms: int = Field(default=10, ge=1, description="Number of atoms K")
    n_channels: int = Field(default=3, ge=1, description="Channels P")
    rho: float = Field(default=0.007, ge=0, lt=1, description="Activation probability")
    sigma: float = Field(default=10.0, gt=0, description="Activation standard deviation")
    noise_std: float = Field(default=1.0, ge=0)
    reg: float = Field(default=1.0, gt=0, description="Regularization lambda")
    auto_reg: bool = Field(default=True, description="Re-tune lambda when it is degenerate")
    seed: int = Field(default=0, ge=0, lt=2**64)

    @model_validator(mode="after")
    def _width_fits(self) -> "GenerationSpec":
        if self.width > self.n_times:
            raise ValueError(f"W={self.width} exceeds T={self.n_times}")
        return self

    @classmethod
    def full_scale(cls, **overrides) -> "GenerationSpec":
        values = dict(n_times=600 * 200, width=200, n_atoms=25, n_channels=7, auto_reg=False)
        values.update(overrides)
        return cls(**values)

    @property
    def n_coords(self) -> int:
        return self.n_times - self.width + 1

    @property
    def alpha(self) -> float:
        return self.width / self.n_times


def generate_instance(
    spec: GenerationSpec,
) -> tuple[MultivariateSignal, Dictionary, SparseCode]:
    """Draw (X, D, Z_true): unit-norm Gaussian atoms, Bernoulli-Gaussian codes, white noise"""
    rng = np.random.default_rng(spec.seed)
    atoms = rng.standard_normal((spec.n_atoms, spec.width, spec.n_channels))
    atoms /= np.sqrt(np.sum(atoms * atoms, axis=(1, 2)))[:, None, None]
    dictionary = Dictionary(atoms)

    shape = (spec.n_atoms, spec.n_coords)
    active = rng.random(shape) < spec.rho
    z_true = SparseCode(np.where(active, rng.normal(0.0, spec.sigma, shape), 0.0))

    noise = rng.normal(0.0, 1.0, (spec.n_times, spec.n_channels)) * spec.noise_std
    signal = MultivariateSignal(reconstruct(z_true, dictionary).samples + noise)
    logger.debug(
        "Generated T=%d W=%d K=%d P=%d with %d activations",
        spec.n_times,
        spec.width,
        spec.n_atoms,
        spec.n_channels,
        z_true.nnz(),
    )
    return signal, dictionary, z_true


def resolve_regularization(
    spec: GenerationSpec, signal: MultivariateSignal, dictionary: Dictionary
) -> float:
    """lambda to use on this instance.

    With ``auto_reg`` a lambda that leaves every coordinate inactive at Z = 0,
    or more than a quarter of them active, becomes 0.1 max|beta(0)|.
    """
    if not spec.auto_reg:
        return spec.reg
    beta0 = np.abs(correlate_all(dictionary, signal))
    density = float(np.mean(beta0 > spec.reg))
    if 0.0 < density <= MAX_DENSITY:
        return spec.reg
    peak = float(beta0.max())
    if peak <= 0:
        raise ConfigurationError("signal is zero; no regularization gives a nonzero code")
    tuned = AUTO_REG_FRACTION * peak
    logger.info("lambda=%.4g gives density %.3f; using %.4g instead", spec.reg, density, tuned)
    return tuned
