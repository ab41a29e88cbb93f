"""Sequential solvers: greedy, randomized, locally greedy, proximal gradient."""

from .config import SolverConfig
from .greedy import greedy_cd
from .prox_gradient import prox_gradient_baseline
from .randomized import randomized_cd
from .seq_dicod import seq_dicod
from .trace import SolveTrace

__all__ = [
    "SolveTrace",
    "SolverConfig",
    "greedy_cd",
    "prox_gradient_baseline",
    "randomized_cd",
    "seq_dicod",
]
