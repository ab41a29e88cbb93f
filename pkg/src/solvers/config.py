"""Validated solver configuration"""

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

Strategy = Literal["greedy", "randomized", "seq-dicod"]


class SolverConfig(BaseModel):
    """Parameters of the sequential coordinate-descent solvers"""

    model_config = ConfigDict(frozen=True)

    reg: float = Field(gt=0, description="Regularization lambda")
    tol: float = Field(default=1e-6, gt=0, description="Stopping tolerance on |dZ|")
    max_iter: int = Field(default=1_000_000, gt=0)
    strategy: Strategy = "greedy"
    n_segments: int = Field(default=1, ge=1, description="Segment count M (seq-dicod)")
    seed: int = Field(default=0, ge=0, lt=2**64)
    log_every: int = Field(default=100, gt=0, description="Cost sampling stride")
