"""Sharp covariance bounds for box-bounded pairs under partial moment knowledge.

All formulas are evaluated on the unit box and scaled back by the box area
``(b - a)(d - c)``; covariance is bilinear so this is exact, and it avoids
cancellation in terms like ``b - E(X)`` for wide or far-from-origin boxes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import FrozenSet, Optional

from .domain import BoxDomain, DomainError, MomentSpec, UnitMoments, normalize, tol


class Constraint(str, enum.Enum):
    CAUCHY_SCHWARZ = "CAUCHY_SCHWARZ"
    # named after the box bounds entering the product: (E(X)-a)(E(Y)-c) is AC, ...
    MEAN_CORNER_AC = "MEAN_CORNER_AC"
    MEAN_CORNER_BD = "MEAN_CORNER_BD"
    MEAN_CORNER_AD = "MEAN_CORNER_AD"
    MEAN_CORNER_BC = "MEAN_CORNER_BC"
    BOX_QUARTER = "BOX_QUARTER"


@dataclass(frozen=True)
class CovarianceInterval:
    lower: float
    upper: float
    lower_active: FrozenSet[Constraint]
    upper_active: FrozenSet[Constraint]

    def contains(self, cov: float, slack: float = 0.0) -> bool:
        return self.lower - slack <= cov <= self.upper + slack


@dataclass(frozen=True)
class ComparisonBounds:
    """Valid but non-sharp bounds used for comparison.

    ``cs_*`` are ``None`` when the variances are unknown.
    """

    cs_lower: Optional[float]
    cs_upper: Optional[float]
    csbd_lower: float
    csbd_upper: float
    bd04_lower: float
    bd04_upper: float
    bd04_reduced_lower: float
    bd04_reduced_upper: float


def _argmin(terms: dict) -> tuple[float, FrozenSet[Constraint]]:
    """Smallest value and every tag tied with it."""
    low = min(terms.values())
    slack = tol(max(abs(v) for v in terms.values()))
    return low, frozenset(k for k, v in terms.items() if v - low <= slack)


def _mean_terms(u: UnitMoments) -> tuple[dict, dict]:
    lower = {
        Constraint.MEAN_CORNER_AC: u.alpha * u.beta,
        Constraint.MEAN_CORNER_BD: u.alpha_c * u.beta_c,
    }
    upper = {
        Constraint.MEAN_CORNER_AD: u.alpha * u.beta_c,
        Constraint.MEAN_CORNER_BC: u.alpha_c * u.beta,
    }
    return lower, upper


def _interval(box: BoxDomain, lower_terms: dict, upper_terms: dict) -> CovarianceInterval:
    lo, lo_tags = _argmin(lower_terms)
    hi, hi_tags = _argmin(upper_terms)
    area = box.area
    # 0.0 - x keeps -0.0 out of reports
    return CovarianceInterval(0.0 - lo * area, hi * area, lo_tags, hi_tags)


def bounds_no_moments(box: BoxDomain) -> CovarianceInterval:
    q = box.area / 4.0
    tags = frozenset({Constraint.BOX_QUARTER})
    return CovarianceInterval(-q, q, tags, tags)


def bounds_means_known(box: BoxDomain, spec: MomentSpec) -> CovarianceInterval:
    if spec.regime != "means":
        raise DomainError("REGIME_MISMATCH", "expected both means and no variances")
    lower, upper = _mean_terms(normalize(box, spec))
    return _interval(box, lower, upper)


def bounds_variances_known(box: BoxDomain, spec: MomentSpec) -> CovarianceInterval:
    if spec.regime != "variances":
        raise DomainError("REGIME_MISMATCH", "expected both variances and no means")
    u = normalize(box, spec)
    cs = {Constraint.CAUCHY_SCHWARZ: math.sqrt(u.var_x * u.var_y)}
    return _interval(box, cs, cs)


def bounds_all_known(box: BoxDomain, spec: MomentSpec) -> CovarianceInterval:
    """Bounds with both means and both variances known.

    Each end is the tighter of the Cauchy-Schwarz term and the two mean
    products of the means-only case.
    """
    if spec.regime != "full":
        raise DomainError("REGIME_MISMATCH", "expected means and variances")
    u = normalize(box, spec)
    lower, upper = _mean_terms(u)
    cs = math.sqrt(u.var_x * u.var_y)
    lower[Constraint.CAUCHY_SCHWARZ] = cs
    upper[Constraint.CAUCHY_SCHWARZ] = cs
    return _interval(box, lower, upper)


def covariance_bounds(box: BoxDomain, spec: MomentSpec = MomentSpec()) -> CovarianceInterval:
    """Sharp bounds for whichever moments ``spec`` carries."""
    regime = spec.regime
    if regime == "none":
        return bounds_no_moments(box)
    if regime == "means":
        return bounds_means_known(box, spec)
    if regime == "variances":
        return bounds_variances_known(box, spec)
    return bounds_all_known(box, spec)


def comparison_bounds(box: BoxDomain, spec: MomentSpec) -> ComparisonBounds:
    """Cauchy-Schwarz, Cauchy-Schwarz with Bhatia-Davis, and Barnett-Dragomir bounds.

    The Barnett-Dragomir interval is centred on ``-(b - E(X))(d - E(Y))`` with
    half-width ``(b-a) + (d-c) + (b-a)(d-c)``; the reduced variant drops the
    two linear width terms.
    """
    if not spec.has_means:
        raise DomainError("INCOMPLETE_MOMENTS", "comparison bounds need both means")
    u = normalize(box, spec)
    area = box.area
    csbd = area * math.sqrt(u.alpha * u.alpha_c * u.beta * u.beta_c)
    centre = -area * u.alpha_c * u.beta_c
    linear = box.width_x + box.width_y
    cs_lower = cs_upper = None
    if spec.has_variances:
        cs_upper = area * math.sqrt(u.var_x * u.var_y)
        cs_lower = -cs_upper
    return ComparisonBounds(
        cs_lower=cs_lower,
        cs_upper=cs_upper,
        csbd_lower=-csbd,
        csbd_upper=csbd,
        bd04_lower=centre - (linear + area),
        bd04_upper=centre + (linear + area),
        bd04_reduced_lower=centre - area,
        bd04_reduced_upper=centre + area,
    )
