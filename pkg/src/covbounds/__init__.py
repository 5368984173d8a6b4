"""Sharp covariance bounds for box-bounded random variables.

Given ``a <= X <= b`` and ``c <= Y <= d`` plus any of the means and variances,
compute the exact range of ``Cov(X, Y)``, joint distributions that attain
each end, standardized covariation measures, and an LP oracle to check them.
"""

from .bounds import (
    ComparisonBounds,
    Constraint,
    CovarianceInterval,
    bounds_all_known,
    bounds_means_known,
    bounds_no_moments,
    bounds_variances_known,
    comparison_bounds,
    covariance_bounds,
)
from .domain import BoxDomain, DomainError, MomentSpec, RelativeMeans, relative_means
from .extremal import (
    BinaryJointCell,
    KappaTildeSolution,
    binary_reduction,
    kappa_tilde,
    lower_witness_full,
    lower_witness_means,
    upper_witness_full,
    upper_witness_means,
    witness,
)
from .joint import DiscreteJoint
from .standardize import (
    FamilyRatios,
    StandardizedMeasures,
    example_family_ratios,
    measures,
    measures_from_joint,
    ordering_check,
)

__version__ = "0.1.0"

__all__ = [
    "BinaryJointCell",
    "BoxDomain",
    "ComparisonBounds",
    "Constraint",
    "CovarianceInterval",
    "DiscreteJoint",
    "DomainError",
    "FamilyRatios",
    "KappaTildeSolution",
    "MomentSpec",
    "RelativeMeans",
    "StandardizedMeasures",
    "binary_reduction",
    "bounds_all_known",
    "bounds_means_known",
    "bounds_no_moments",
    "bounds_variances_known",
    "comparison_bounds",
    "covariance_bounds",
    "example_family_ratios",
    "kappa_tilde",
    "lower_witness_full",
    "lower_witness_means",
    "measures",
    "measures_from_joint",
    "ordering_check",
    "relative_means",
    "upper_witness_full",
    "upper_witness_means",
    "witness",
]
