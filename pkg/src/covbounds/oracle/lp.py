"""Covariance extremes over distributions supported on a rectangular grid.

Every moment constraint is linear in the cell probabilities once the mean is
fixed, so the extremes of ``E(XY)`` form a linear program whose optimal
vertices are sparse joints. This is the brute-force counterpart of the
closed-form bounds and shares no code with them.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..domain import BoxDomain, DomainError, MomentSpec
from ..joint import DiscreteJoint
from . import simplex

MAX_CELLS = 1_000_000


class MomentKind(str, enum.Enum):
    MEAN_X = "MEAN_X"
    MEAN_Y = "MEAN_Y"
    VAR_X = "VAR_X"
    VAR_Y = "VAR_Y"


class Sense(str, enum.Enum):
    MIN = "MIN"
    MAX = "MAX"


class LpStatus(str, enum.Enum):
    OPTIMAL = "OPTIMAL"
    INFEASIBLE = "INFEASIBLE"


@dataclass(frozen=True)
class GridLpProblem:
    box: BoxDomain
    nx: int
    ny: int
    constraints: tuple = ()
    sense: Sense = Sense.MAX

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise DomainError("INVALID_GRID", "grid resolution must be at least 2 per axis")
        if self.nx * self.ny > MAX_CELLS:
            raise DomainError("INVALID_GRID", f"grid has more than {MAX_CELLS} cells")
        kinds = [MomentKind(k) for k, _ in self.constraints]
        if len(set(kinds)) != len(kinds):
            raise DomainError("INVALID_GRID", "duplicate moment constraint")
        if MomentKind.VAR_X in kinds and MomentKind.MEAN_X not in kinds:
            raise DomainError("INVALID_GRID", "a VAR_X constraint needs MEAN_X")
        if MomentKind.VAR_Y in kinds and MomentKind.MEAN_Y not in kinds:
            raise DomainError("INVALID_GRID", "a VAR_Y constraint needs MEAN_Y")

    @classmethod
    def from_spec(cls, box: BoxDomain, spec: MomentSpec, resolution: int, sense: Sense) -> "GridLpProblem":
        pairs = [
            (MomentKind.MEAN_X, spec.mean_x),
            (MomentKind.MEAN_Y, spec.mean_y),
            (MomentKind.VAR_X, spec.var_x),
            (MomentKind.VAR_Y, spec.var_y),
        ]
        cons = tuple((k, float(v)) for k, v in pairs if v is not None)
        return cls(box, resolution, resolution, cons, Sense(sense))

    def target(self, kind: MomentKind):
        for k, v in self.constraints:
            if MomentKind(k) is kind:
                return v
        return None


@dataclass(frozen=True)
class LpSolution:
    value: float | None
    witness: DiscreteJoint | None
    status: LpStatus
    iterations: int = 0
    method: str = field(default="dense")


def grid_axes(nx: int, ny: int) -> tuple[np.ndarray, np.ndarray]:
    """Unit-box grid coordinates; both endpoints are exact."""
    return np.linspace(0.0, 1.0, nx), np.linspace(0.0, 1.0, ny)


def solve_grid_lp(problem: GridLpProblem, *, rule: str = "dantzig", backend: str | None = None) -> LpSolution:
    """Extreme covariance over all grid distributions meeting the constraints.

    Returns the covariance of the optimal basic solution and that solution as
    a witness. Without mean constraints the covariance is evaluated at the
    optimal vertex of ``E(XY)``, which is then not a covariance extreme.
    """
    box = problem.box
    gx, gy = grid_axes(problem.nx, problem.ny)
    X = np.repeat(gx, problem.ny)
    Y = np.tile(gy, problem.nx)
    rows = [np.ones_like(X)]
    rhs = [1.0]
    mx = problem.target(MomentKind.MEAN_X)
    my = problem.target(MomentKind.MEAN_Y)
    vx = problem.target(MomentKind.VAR_X)
    vy = problem.target(MomentKind.VAR_Y)
    if mx is not None:
        ax = box.to_unit_x(mx)
        rows.append(X)
        rhs.append(ax)
    if my is not None:
        by = box.to_unit_y(my)
        rows.append(Y)
        rhs.append(by)
    if vx is not None:
        rows.append((X - ax) ** 2)
        rhs.append(vx / box.width_x**2)
    if vy is not None:
        rows.append((Y - by) ** 2)
        rhs.append(vy / box.width_y**2)
    A = np.vstack(rows)
    b = np.array(rhs)
    c = X * Y
    if problem.sense is Sense.MAX:
        c = -c

    res = simplex.solve(A, b, c, rule=rule, backend=backend)
    if res.status != simplex.OPTIMAL:
        return LpSolution(None, None, LpStatus.INFEASIBLE, res.iterations, res.method)

    x = np.where(res.x < 0.0, 0.0, res.x)
    support = np.flatnonzero(x > 0.0)
    unit = DiscreteJoint(X[support], Y[support], x[support] / x[support].sum(), oracle_witness=True)
    value = unit.cov * box.area
    return LpSolution(value, unit.from_unit(box), LpStatus.OPTIMAL, res.iterations, res.method)


def constraint_residuals(problem: GridLpProblem, joint: DiscreteJoint) -> dict:
    """Absolute constraint violations of ``joint``, in the problem's own units."""
    out = {"TOTAL": abs(float(joint.p.sum()) - 1.0)}
    realized = {
        MomentKind.MEAN_X: joint.mean_x,
        MomentKind.MEAN_Y: joint.mean_y,
        MomentKind.VAR_X: joint.var_x,
        MomentKind.VAR_Y: joint.var_y,
    }
    for k, v in problem.constraints:
        out[MomentKind(k).value] = abs(realized[MomentKind(k)] - v)
    return out


def lp_bounds(box: BoxDomain, spec: MomentSpec, resolution: int, **kw) -> tuple[LpSolution, LpSolution]:
    """``(MIN, MAX)`` grid LP solutions for the moments in ``spec``."""
    lo = solve_grid_lp(GridLpProblem.from_spec(box, spec, resolution, Sense.MIN), **kw)
    hi = solve_grid_lp(GridLpProblem.from_spec(box, spec, resolution, Sense.MAX), **kw)
    return lo, hi


def refine_by_inclusion(resolutions: Sequence[int]) -> bool:
    """True when each grid in the sequence contains the previous one."""
    return all((b - 1) % (a - 1) == 0 for a, b in zip(resolutions, resolutions[1:]))
