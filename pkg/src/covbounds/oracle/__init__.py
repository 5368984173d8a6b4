"""Independent checks: a grid linear program and Monte Carlo family sweeps."""

from .lp import GridLpProblem, LpSolution, LpStatus, MomentKind, Sense, lp_bounds, solve_grid_lp
from .simplex import DEFAULT_BACKEND, KERNELS
from .sweeps import (
    sweep_beta_family,
    sweep_three_point_family,
    tolerance,
    verify_bounds,
)

__all__ = [
    "DEFAULT_BACKEND",
    "GridLpProblem",
    "KERNELS",
    "LpSolution",
    "LpStatus",
    "MomentKind",
    "Sense",
    "lp_bounds",
    "solve_grid_lp",
    "sweep_beta_family",
    "sweep_three_point_family",
    "tolerance",
    "verify_bounds",
]
