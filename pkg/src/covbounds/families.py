"""Parametric marginal families and couplings used by the examples and sweeps.

Both families are indexed by a relative mean ``alpha`` and a concentration
``r`` in ``(0, 1)``: the three-point law puts mass ``r`` on the mean and splits
the rest over the endpoints, the beta law is rescaled
``Beta(alpha*r/(1-r), (1-alpha)*r/(1-r))``. On the unit box both have mean
``alpha`` and variance ``(1 - r) * alpha * (1 - alpha)``.
"""

from __future__ import annotations

import numpy as np

from .domain import DomainError
from .joint import DiscreteJoint


def check_family_params(*, open_params: dict, half_open_params: dict | None = None) -> None:
    """Raise unless ``open_params`` lie in (0, 1) and ``half_open_params`` in [0, 1)."""
    for name, v in open_params.items():
        if not 0.0 < v < 1.0:
            raise DomainError("PARAMETER_OUT_OF_RANGE", f"{name} must lie in (0, 1), got {v!r}")
    for name, v in (half_open_params or {}).items():
        if not 0.0 <= v < 1.0:
            raise DomainError("PARAMETER_OUT_OF_RANGE", f"{name} must lie in [0, 1), got {v!r}")


def three_point_marginal(alpha: float, r: float, lo: float = 0.0, hi: float = 1.0):
    """Support ``(lo, mean, hi)`` and probabilities ``((1-r)(1-alpha), r, (1-r)alpha)``.

    ``r = 0`` is allowed and gives the two-point law on the endpoints.
    """
    check_family_params(open_params={"alpha": alpha}, half_open_params={"r": r})
    mean = lo + alpha * (hi - lo)
    values = np.array([lo, mean, hi])
    probs = np.array([(1.0 - r) * (1.0 - alpha), r, (1.0 - r) * alpha])
    return values, probs


def three_point_moments(alpha: float, r: float, lo: float = 0.0, hi: float = 1.0) -> tuple[float, float]:
    width = hi - lo
    return lo + alpha * width, (1.0 - r) * width * width * alpha * (1.0 - alpha)


def beta_shapes(alpha: float, r: float) -> tuple[float, float]:
    check_family_params(open_params={"alpha": alpha, "r": r})
    k = r / (1.0 - r)
    return alpha * k, (1.0 - alpha) * k


def beta_moments(alpha: float, r: float, lo: float = 0.0, hi: float = 1.0) -> tuple[float, float]:
    """Mean and variance from the beta shape parameters (not from ``alpha, r``)."""
    p, q = beta_shapes(alpha, r)
    width = hi - lo
    mean = p / (p + q)
    var = p * q / ((p + q) ** 2 * (p + q + 1.0))
    return lo + width * mean, width * width * var


def product_coupling(mx, my) -> DiscreteJoint:
    (xv, xp), (yv, yp) = mx, my
    X, Y = np.meshgrid(xv, yv, indexing="ij")
    P = np.outer(xp, yp)
    return DiscreteJoint(X.ravel(), Y.ravel(), P.ravel())


def _quantile_coupling(xv, xp, yv, yp) -> DiscreteJoint:
    # north-west corner rule on sorted supports
    i = j = 0
    rx, ry = float(xp[0]), float(yp[0])
    atoms = []
    while i < len(xv) and j < len(yv):
        m = min(rx, ry)
        if m > 0.0:
            atoms.append((xv[i], yv[j], m))
        rx -= m
        ry -= m
        if rx <= 1e-15 and i < len(xv):
            i += 1
            rx = float(xp[i]) if i < len(xv) else 0.0
        if ry <= 1e-15 and j < len(yv):
            j += 1
            ry = float(yp[j]) if j < len(yv) else 0.0
    return DiscreteJoint.from_atoms(atoms, prune=False)


def comonotone_coupling(mx, my) -> DiscreteJoint:
    """``Y`` a nondecreasing function of a common uniform with ``X``."""
    (xv, xp), (yv, yp) = mx, my
    ox, oy = np.argsort(xv, kind="stable"), np.argsort(yv, kind="stable")
    return _quantile_coupling(xv[ox], xp[ox], yv[oy], yp[oy])


def antitone_coupling(mx, my) -> DiscreteJoint:
    (xv, xp), (yv, yp) = mx, my
    ox, oy = np.argsort(xv, kind="stable"), np.argsort(yv, kind="stable")[::-1]
    return _quantile_coupling(xv[ox], xp[ox], yv[oy], yp[oy])
