"""Validated DICOD configuration"""

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

Mode = Literal["free-running", "stepped"]


class DicodConfig(BaseModel):
    """Parameters of a distributed run"""

    model_config = ConfigDict(frozen=True)

    reg: float = Field(gt=0)
    tol: float = Field(default=1e-6, gt=0)
    n_workers: int = Field(default=1, ge=1)
    mode: Mode = "stepped"
    seed: int = Field(default=0, ge=0, lt=2**64)
    d_max: int = Field(default=1, ge=1, description="Max per-link delay in rounds (stepped)")
    step_probability: float = Field(
        default=1.0, gt=0, le=1, description="Chance an active worker steps in a round"
    )
    max_iter: int = Field(
        default=1_000_000, gt=0, description="Rounds (stepped) or steps per worker (free-running)"
    )
    log_every: int = Field(default=100, gt=0)
    probe_every: int = Field(default=1, ge=1, description="Rounds between probes (stepped)")
    probe_interval: float = Field(default=0.005, gt=0, description="Seconds between probes")
    timeout: float = Field(default=600.0, gt=0)
