"""Seeded interleaving scripts for the stepped runtime"""

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .config import DicodConfig


@dataclass(frozen=True)
class ScheduleScript:
    """How the stepped scheduler interleaves worker steps and deliveries.

    Messages emitted in round r are delivered at the start of a round drawn in
    [r + 1, r + d_max], never before an earlier message on the same link.
    """

    seed: int = 0
    mode: Literal["free-running", "stepped"] = "stepped"
    d_max: int = 1
    step_probability: float = 1.0

    @classmethod
    def from_config(cls, config: DicodConfig) -> "ScheduleScript":
        return cls(
            seed=config.seed,
            mode=config.mode,
            d_max=config.d_max,
            step_probability=config.step_probability,
        )

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


def check_h3(script: ScheduleScript) -> bool:
    """Messages always arrive before the receiver's next step"""
    return script.mode == "stepped" and script.d_max <= 1
