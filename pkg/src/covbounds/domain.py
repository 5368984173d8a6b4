"""Value types shared by every module: the box, the known moments, and errors."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

REL_TOL = 1e-12
ABS_TOL = 1e-15
# unit-box variances below this are zero: sqrt(VAR_FLOOR) is under REL_TOL,
# and subnormal inputs lose the precision the witness slopes divide by
VAR_FLOOR = 1e-24


class DomainError(ValueError):
    """Invalid or infeasible input.

    ``code`` is a stable machine-readable tag (``INVALID_BOX``,
    ``MEAN_OUTSIDE_BOX``, ``VARIANCE_INFEASIBLE``, ...); ``margin`` names the
    offending variable when there is one.
    """

    def __init__(self, code: str, message: str, margin: Optional[str] = None):
        super().__init__(message)
        self.code = code
        self.margin = margin

    def to_dict(self) -> dict:
        out = {"error": self.code, "message": str(self)}
        if self.margin is not None:
            out["margin"] = self.margin
        return out


def tol(scale: float) -> float:
    return max(REL_TOL * abs(scale), ABS_TOL)


def isclose(u: float, v: float) -> bool:
    return abs(u - v) <= tol(max(abs(u), abs(v)))


@dataclass(frozen=True)
class BoxDomain:
    """The rectangle ``[a, b] x [c, d]`` that contains ``(X, Y)``."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        vals = (self.a, self.b, self.c, self.d)
        if not all(math.isfinite(v) for v in vals):
            raise DomainError("INVALID_BOX", f"box bounds must be finite, got {vals}")
        if not (self.a < self.b and self.c < self.d):
            raise DomainError("INVALID_BOX", f"need a < b and c < d, got {vals}")

    @property
    def width_x(self) -> float:
        return self.b - self.a

    @property
    def width_y(self) -> float:
        return self.d - self.c

    @property
    def area(self) -> float:
        return (self.b - self.a) * (self.d - self.c)

    def to_unit_x(self, x):
        return (x - self.a) / (self.b - self.a)

    def to_unit_y(self, y):
        return (y - self.c) / (self.d - self.c)

    def from_unit_x(self, u):
        return self.a + (self.b - self.a) * u

    def from_unit_y(self, u):
        return self.c + (self.d - self.c) * u


@dataclass(frozen=True)
class MomentSpec:
    """Known moments of the two margins; ``None`` means unknown.

    Only four combinations are meaningful: nothing, both means, both
    variances, or all four. Feasibility against a box is checked by
    :func:`normalize`, not here, since the spec alone does not know the box.
    """

    mean_x: Optional[float] = None
    mean_y: Optional[float] = None
    var_x: Optional[float] = None
    var_y: Optional[float] = None

    @property
    def has_means(self) -> bool:
        return self.mean_x is not None and self.mean_y is not None

    @property
    def has_variances(self) -> bool:
        return self.var_x is not None and self.var_y is not None

    @property
    def regime(self) -> str:
        known = tuple(v is not None for v in (self.mean_x, self.mean_y, self.var_x, self.var_y))
        regimes = {
            (False, False, False, False): "none",
            (True, True, False, False): "means",
            (False, False, True, True): "variances",
            (True, True, True, True): "full",
        }
        try:
            return regimes[known]
        except KeyError:
            raise DomainError(
                "INCOMPLETE_MOMENTS",
                "moments must be given as a group: none, both means, both variances, or all four",
            ) from None


@dataclass(frozen=True)
class RelativeMeans:
    alpha: float
    beta: float


@dataclass(frozen=True)
class UnitMoments:
    """Moments mapped to the unit box.

    ``alpha_c`` and ``beta_c`` hold ``1 - alpha`` and ``1 - beta`` computed as
    ``(b - E(X)) / (b - a)`` so they keep full precision near the upper edge.
    Absent quantities are ``None``.
    """

    alpha: Optional[float]
    alpha_c: Optional[float]
    beta: Optional[float]
    beta_c: Optional[float]
    var_x: Optional[float]
    var_y: Optional[float]


def _check_mean(value: float, lo: float, hi: float, margin: str) -> tuple[float, float]:
    if not math.isfinite(value):
        raise DomainError("MEAN_OUTSIDE_BOX", f"mean of {margin} is not finite", margin)
    width = hi - lo
    slack = tol(max(abs(lo), abs(hi), width))
    if value < lo - slack or value > hi + slack:
        raise DomainError(
            "MEAN_OUTSIDE_BOX", f"mean of {margin} = {value!r} lies outside [{lo!r}, {hi!r}]", margin
        )
    rel = min(max((value - lo) / width, 0.0), 1.0)
    rel_c = min(max((hi - value) / width, 0.0), 1.0)
    return rel, rel_c


def _check_var(value: float, lo: float, hi: float, cap: float, margin: str) -> float:
    """Return the unit-box variance; ``cap`` is the unit-box maximum."""
    if not math.isfinite(value):
        raise DomainError("VARIANCE_INFEASIBLE", f"variance of {margin} is not finite", margin)
    width = hi - lo
    unit = value / (width * width)
    if unit < -tol(1.0):
        raise DomainError("VARIANCE_INFEASIBLE", f"variance of {margin} is negative", margin)
    # a narrow box far from the origin loses digits in hi - lo
    cancel = max(1.0, max(abs(lo), abs(hi)) / width)
    if unit > cap + cancel * tol(max(cap, 0.25)):
        raise DomainError(
            "VARIANCE_INFEASIBLE",
            f"variance of {margin} = {value!r} exceeds its Bhatia-Davis maximum "
            f"{cap * width * width!r}",
            margin,
        )
    if unit < VAR_FLOOR:
        return 0.0
    return min(unit, cap)


def normalize(box: BoxDomain, spec: MomentSpec) -> UnitMoments:
    """Validate ``spec`` against ``box`` and map it into the unit box.

    Values that violate a constraint by no more than the relative tolerance
    are clamped onto the boundary; larger violations raise
    :class:`DomainError`.
    """
    spec.regime  # raises on incomplete groups
    alpha = alpha_c = beta = beta_c = None
    if spec.mean_x is not None:
        alpha, alpha_c = _check_mean(spec.mean_x, box.a, box.b, "X")
    if spec.mean_y is not None:
        beta, beta_c = _check_mean(spec.mean_y, box.c, box.d, "Y")
    vx = vy = None
    if spec.var_x is not None:
        cap = alpha * alpha_c if alpha is not None else 0.25
        vx = _check_var(spec.var_x, box.a, box.b, cap, "X")
    if spec.var_y is not None:
        cap = beta * beta_c if beta is not None else 0.25
        vy = _check_var(spec.var_y, box.c, box.d, cap, "Y")
    return UnitMoments(alpha, alpha_c, beta, beta_c, vx, vy)


def relative_means(box: BoxDomain, spec: MomentSpec) -> RelativeMeans:
    """Means on the unit scale: ``alpha = (E(X) - a) / (b - a)``, likewise ``beta``."""
    if not spec.has_means:
        raise DomainError("INCOMPLETE_MOMENTS", "relative means need both means")
    alpha, _ = _check_mean(spec.mean_x, box.a, box.b, "X")
    beta, _ = _check_mean(spec.mean_y, box.c, box.d, "Y")
    return RelativeMeans(alpha, beta)
