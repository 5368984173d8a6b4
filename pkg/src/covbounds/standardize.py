"""Covariance rescaled to [-1, 1] by the bound that matches what is known.

``d`` uses the box alone, ``r`` is the correlation (variances known),
``d_prime`` divides by the means-only bound of matching sign (for binary
variables this is Lewontin's linkage-disequilibrium D'), and ``d_second``
divides by the bound with means and variances known.

When a denominator is zero the only feasible covariance is zero, and the
measure is reported as 0 with reason ``ZERO_DENOMINATOR``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from .bounds import covariance_bounds
from .domain import BoxDomain, DomainError, MomentSpec, normalize
from .families import check_family_params, three_point_moments
from .joint import DiscreteJoint

COV_SLACK = 1e-9
ORDER_TOL = 1e-12


class Reason(str, enum.Enum):
    MISSING_MOMENT = "MISSING_MOMENT"
    ZERO_DENOMINATOR = "ZERO_DENOMINATOR"


@dataclass(frozen=True)
class Measure:
    value: Optional[float]
    reason: Optional[Reason] = None

    @property
    def defined(self) -> bool:
        return self.value is not None


@dataclass(frozen=True)
class StandardizedMeasures:
    d: Measure
    r: Measure
    d_prime: Measure
    d_second: Measure

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in ("d", "r", "d_prime", "d_second")}


_MISSING = Measure(None, Reason.MISSING_MOMENT)


def _ratio(cov: float, denom: float) -> Measure:
    if denom <= 0.0:
        return Measure(0.0, Reason.ZERO_DENOMINATOR)
    return Measure(min(max(cov / denom, -1.0), 1.0))


def measures(box: BoxDomain, spec: MomentSpec, cov: float) -> StandardizedMeasures:
    """All measures that ``spec`` makes available for covariance ``cov``."""
    if not math.isfinite(cov):
        raise DomainError("COV_INFEASIBLE", "covariance must be finite")
    regime = spec.regime
    normalize(box, spec)
    sharp = covariance_bounds(box, spec)
    slack = COV_SLACK * max(1.0, box.area)
    if not sharp.contains(cov, slack):
        raise DomainError(
            "COV_INFEASIBLE",
            f"covariance {cov!r} lies outside the feasible interval [{sharp.lower!r}, {sharp.upper!r}]",
        )

    d = _ratio(cov, box.area / 4.0)
    r = d_prime = d_second = _MISSING
    if spec.has_variances:
        r = _ratio(cov, math.sqrt(spec.var_x * spec.var_y))
    if spec.has_means:
        means = covariance_bounds(box, MomentSpec(spec.mean_x, spec.mean_y))
        d_prime = _ratio(cov, -means.lower if cov < 0 else means.upper)
    if regime == "full":
        d_second = _ratio(cov, -sharp.lower if cov < 0 else sharp.upper)
    return StandardizedMeasures(d, r, d_prime, d_second)


def measures_from_joint(joint: DiscreteJoint, box: BoxDomain) -> StandardizedMeasures:
    joint.validate(box)
    return measures(box, joint.moments(), joint.cov)


@dataclass(frozen=True)
class OrderingReport:
    ok: bool
    violations: tuple[str, ...]


def ordering_check(m: StandardizedMeasures) -> OrderingReport:
    """Check ``|d| <= min(|r|, |d'|)`` and ``|d''| >= max(|r|, |d'|)``.

    No order between ``|r|`` and ``|d'|`` is implied.
    """
    if not all(x.defined for x in (m.d, m.r, m.d_prime, m.d_second)):
        raise DomainError("MISSING_MOMENT", "ordering needs all four measures")
    d, r, dp, ds = (abs(x.value) for x in (m.d, m.r, m.d_prime, m.d_second))
    bad = []
    if d > r + ORDER_TOL:
        bad.append("|d| > |r|")
    if d > dp + ORDER_TOL:
        bad.append("|d| > |d'|")
    if ds < r - ORDER_TOL:
        bad.append("|d''| < |r|")
    if ds < dp - ORDER_TOL:
        bad.append("|d''| < |d'|")
    return OrderingReport(not bad, tuple(bad))


@dataclass(frozen=True)
class FamilyRatios:
    """Means-only bound over Cauchy-Schwarz bound, per side, for the three-point family.

    ``lower_ratio``/``upper_ratio`` come from the log-odds closed form;
    ``direct_lower``/``direct_upper`` divide the bounds themselves.
    """

    lower_ratio: float
    upper_ratio: float
    direct_lower: float
    direct_upper: float


def example_family_ratios(alpha: float, beta: float, r: float, s: float) -> FamilyRatios:
    check_family_params(open_params={"alpha": alpha, "beta": beta}, half_open_params={"r": r, "s": s})
    psi_x = math.log(alpha / (1.0 - alpha))
    psi_y = math.log(beta / (1.0 - beta))
    scale = (1.0 - r) * (1.0 - s)
    # min(e^t, e^-t) == e^-|t|
    lower = math.sqrt(math.exp(-abs(psi_x + psi_y)) / scale)
    upper = math.sqrt(math.exp(-abs(psi_x - psi_y)) / scale)

    box = BoxDomain(0.0, 1.0, 0.0, 1.0)
    mx, vx = three_point_moments(alpha, r)
    my, vy = three_point_moments(beta, s)
    means = covariance_bounds(box, MomentSpec(mx, my))
    cs = math.sqrt(vx * vy)
    return FamilyRatios(lower, upper, means.lower / -cs, means.upper / cs)
