"""Finite-support joint distributions."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .domain import BoxDomain, DomainError, MomentSpec

PRUNE_BELOW = 1e-14


@dataclass(frozen=True, eq=False)
class DiscreteJoint:
    """Atoms ``(x[k], y[k])`` with probabilities ``p[k]``.

    ``oracle_witness`` marks joints that came from the LP oracle rather than
    from a closed-form construction.
    """

    x: np.ndarray
    y: np.ndarray
    p: np.ndarray
    oracle_witness: bool = field(default=False)

    @classmethod
    def from_atoms(cls, atoms, *, prune: bool = True, oracle_witness: bool = False) -> "DiscreteJoint":
        arr = np.asarray(list(atoms), dtype=float).reshape(-1, 3)
        joint = cls(arr[:, 0].copy(), arr[:, 1].copy(), arr[:, 2].copy(), oracle_witness)
        return joint.pruned() if prune else joint

    def pruned(self, threshold: float = PRUNE_BELOW) -> "DiscreteJoint":
        """Merge repeated support points, drop tiny atoms, renormalize."""
        merged: dict[tuple[float, float], float] = {}
        for xv, yv, pv in zip(self.x.tolist(), self.y.tolist(), self.p.tolist()):
            key = (xv, yv)
            merged[key] = merged.get(key, 0.0) + pv
        keep = [(k, v) for k, v in merged.items() if v >= threshold]
        total = sum(v for _, v in keep)
        x = np.array([k[0] for k, _ in keep])
        y = np.array([k[1] for k, _ in keep])
        p = np.array([v / total for _, v in keep])
        return DiscreteJoint(x, y, p, self.oracle_witness)

    @property
    def atoms(self) -> list[tuple[float, float, float]]:
        return list(zip(self.x.tolist(), self.y.tolist(), self.p.tolist()))

    def __len__(self) -> int:
        return len(self.p)

    @property
    def mean_x(self) -> float:
        return float(self.p @ self.x)

    @property
    def mean_y(self) -> float:
        return float(self.p @ self.y)

    @property
    def var_x(self) -> float:
        dx = self.x - self.mean_x
        return float(self.p @ (dx * dx))

    @property
    def var_y(self) -> float:
        dy = self.y - self.mean_y
        return float(self.p @ (dy * dy))

    @property
    def cov(self) -> float:
        # centred form; E(XY) - E(X)E(Y) cancels badly
        return float(self.p @ ((self.x - self.mean_x) * (self.y - self.mean_y)))

    def moments(self) -> MomentSpec:
        return MomentSpec(self.mean_x, self.mean_y, self.var_x, self.var_y)

    def map_affine(self, sx: float, tx: float, sy: float, ty: float) -> "DiscreteJoint":
        return DiscreteJoint(sx * self.x + tx, sy * self.y + ty, self.p.copy(), self.oracle_witness)

    def to_unit(self, box: BoxDomain) -> "DiscreteJoint":
        return DiscreteJoint(box.to_unit_x(self.x), box.to_unit_y(self.y), self.p.copy(), self.oracle_witness)

    def from_unit(self, box: BoxDomain) -> "DiscreteJoint":
        return DiscreteJoint(box.from_unit_x(self.x), box.from_unit_y(self.y), self.p.copy(), self.oracle_witness)

    def validate(self, box: BoxDomain, atol: float = 1e-12) -> None:
        """Raise :class:`DomainError` unless this is a distribution on ``box``."""
        if len(self.p) == 0:
            raise DomainError("INVALID_JOINT", "joint has no atoms")
        if np.any(self.p < -1e-15):
            raise DomainError("INVALID_JOINT", "negative probability")
        if abs(self.p.sum() - 1.0) > atol:
            raise DomainError("INVALID_JOINT", f"probabilities sum to {self.p.sum()!r}")
        sx = atol * box.width_x
        sy = atol * box.width_y
        if np.any(self.x < box.a - sx) or np.any(self.x > box.b + sx):
            raise DomainError("INVALID_JOINT", "atom outside [a, b]", "X")
        if np.any(self.y < box.c - sy) or np.any(self.y > box.d + sy):
            raise DomainError("INVALID_JOINT", "atom outside [c, d]", "Y")
