"""Joint distributions that attain the covariance bounds.

Constructions work in the unit box and map atoms back affinely at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domain import BoxDomain, DomainError, MomentSpec, isclose, normalize, tol
from .joint import DiscreteJoint

FALLBACK_RESOLUTION = 201
# |alpha - beta| (or |alpha + beta - 1|) below this counts as the two-atom case
TIGHT_TOL = 1e-12


def _require(spec: MomentSpec, regime: str) -> None:
    if spec.regime != regime:
        raise DomainError("REGIME_MISMATCH", f"expected a {regime!r} moment spec, got {spec.regime!r}")


def _corners(box: BoxDomain, p00: float, p10: float, p01: float, p11: float) -> DiscreteJoint:
    atoms = [
        (box.a, box.c, p00),
        (box.b, box.c, p10),
        (box.a, box.d, p01),
        (box.b, box.d, p11),
    ]
    return DiscreteJoint.from_atoms(atoms)


def _independent_corners(u) -> tuple[float, float, float, float]:
    return (
        u.alpha_c * u.beta_c,
        u.alpha * u.beta_c,
        u.alpha_c * u.beta,
        u.alpha * u.beta,
    )


def lower_witness_means(box: BoxDomain, spec: MomentSpec) -> DiscreteJoint:
    """At most three corner atoms attaining the means-only lower bound.

    Start from the independent corner coupling and move mass off the
    ``(a, c)``/``(b, d)`` diagonal until one of those two cells is empty.
    """
    _require(spec, "means")
    u = normalize(box, spec)
    q00, q10, q01, q11 = _independent_corners(u)
    shift = min(q00, q11)
    p00, p11 = q00 - shift, q11 - shift
    if abs(u.alpha - u.beta_c) <= TIGHT_TOL:
        p00 = p11 = 0.0
    return _corners(box, p00, q10 + shift, q01 + shift, p11)


def upper_witness_means(box: BoxDomain, spec: MomentSpec) -> DiscreteJoint:
    """Mirror image of :func:`lower_witness_means` on the other diagonal."""
    _require(spec, "means")
    u = normalize(box, spec)
    q00, q10, q01, q11 = _independent_corners(u)
    shift = min(q10, q01)
    p10, p01 = q10 - shift, q01 - shift
    if abs(u.alpha - u.beta) <= TIGHT_TOL:
        p10 = p01 = 0.0
    return _corners(box, q00 + shift, p10, p01, q11 + shift)


@dataclass(frozen=True)
class KappaTildeSolution:
    """Best covariance reachable with ``Y`` an exact line in a two-point ``X``.

    ``x1 < x2`` are the support of ``X`` and ``p`` is the weight on ``x2``.
    ``gamma = sqrt((1 - p) / p)`` is the free parameter of that two-point
    family and ``gamma0`` the value balancing the two box constraints on the
    line. ``case_id`` tells whether ``gamma0`` fell left of (1), right of (2)
    or inside (3) the feasible ``gamma`` range.
    """

    kappa_tilde: float
    gamma: float
    gamma0: float
    case_id: int
    x1: float
    x2: float
    p: float
    gamma_low: float
    gamma_high: float


def _kappa_tilde_unit(alpha, alpha_c, beta, beta_c, vx):
    """Unit-box solution as a tuple ``(kt, gamma, gamma0, case, x1, x2, p, lo, hi)``."""
    gamma0 = math.inf if beta == 0.0 else math.sqrt(beta_c / beta)
    if vx <= 0.0:
        return 0.0, 1.0, gamma0, 3, alpha, alpha, 0.5, 0.0, math.inf
    s = math.sqrt(vx)
    lo = s / alpha
    hi = alpha_c / s
    if lo > hi:
        # variance at its Bhatia-Davis maximum: the range is a single point
        lo = hi = math.sqrt(lo * hi)
    if gamma0 < lo and not isclose(gamma0, lo):
        case, kt = 1, alpha * beta_c
    elif gamma0 > hi and not isclose(gamma0, hi):
        case, kt = 2, alpha_c * beta
    else:
        case, kt = 3, math.sqrt(vx * beta * beta_c)
    gamma = min(max(gamma0, lo), hi)
    x1 = min(max(alpha - s / gamma, 0.0), 1.0)
    x2 = min(max(alpha + s * gamma, 0.0), 1.0)
    p = 1.0 / (1.0 + gamma * gamma)
    return kt, gamma, gamma0, case, x1, x2, p, lo, hi


def kappa_tilde(box: BoxDomain, spec: MomentSpec) -> KappaTildeSolution:
    """Largest covariance with ``Y = E(Y) + k (X - E(X)) / Var(X)`` kept in the box.

    The maximum over two-point laws for ``X`` is taken in closed form by
    locating the balancing ``gamma0`` relative to the feasible range of
    ``gamma``; ``kappa_tilde`` and the support are returned in box units.
    """
    _require(spec, "full")
    u = normalize(box, spec)
    kt, gamma, gamma0, case, x1, x2, p, lo, hi = _kappa_tilde_unit(
        u.alpha, u.alpha_c, u.beta, u.beta_c, u.var_x
    )
    return KappaTildeSolution(
        kappa_tilde=kt * box.area,
        gamma=gamma,
        gamma0=gamma0,
        case_id=case,
        x1=float(box.from_unit_x(x1)),
        x2=float(box.from_unit_x(x2)),
        p=p,
        gamma_low=lo,
        gamma_high=hi,
    )


def _two_point(mean, mean_c, var):
    """Two-point law on ``[0, 1]`` with the given mean and variance.

    Support ``mean - t*mean`` and ``mean + t*(1 - mean)`` with weights
    ``1 - mean`` and ``mean``; its variance is ``t**2 * mean * (1 - mean)``.
    """
    cap = mean * mean_c
    t = math.sqrt(min(var / cap, 1.0)) if cap > 0.0 else 0.0
    return [(mean - t * mean, mean_c), (mean + t * mean_c, mean)]


def _upper_full_unit(alpha, alpha_c, beta, beta_c, vx, vy):
    """Atoms attaining the full-moment upper bound, or ``None`` if the noise cannot fit."""
    if vx <= 0.0 or vy <= 0.0:
        xs = _two_point(alpha, alpha_c, vx)
        ys = _two_point(beta, beta_c, vy)
        return [(x, y, px * py) for x, px in xs for y, py in ys]

    kt, gamma, _, _, _, _, p, _, _ = _kappa_tilde_unit(alpha, alpha_c, beta, beta_c, vx)
    k = min(math.sqrt(vx * vy), kt)
    s = math.sqrt(vx)
    offsets = (-s / gamma, s * gamma)
    weights = (1.0 - p, p)
    xs = [min(max(alpha + o, 0.0), 1.0) for o in offsets]
    # the line through (E(X), E(Y)) with slope k / Var(X), evaluated on the support
    ls = [min(max(beta + k * o / vx, 0.0), 1.0) for o in offsets]

    need = vy - k * k / vx
    if need <= tol(vy):
        return [(x, l, w) for x, l, w in zip(xs, ls, weights)]
    capacity = sum(w * l * (1.0 - l) for w, l in zip(weights, ls))
    if capacity <= 0.0 or need > capacity * (1.0 + 1e-9) + 1e-15:
        return None
    # two-point noise at each support point, scaled by a common factor of its
    # Bhatia-Davis capacity so that E(noise | X) = 0 and Var(Y) hits vy exactly
    lam = math.sqrt(min(need / capacity, 1.0))
    atoms = []
    for x, l, w in zip(xs, ls, weights):
        atoms.append((x, (1.0 - lam) * l, w * (1.0 - l)))
        atoms.append((x, l + lam * (1.0 - l), w * l))
    return atoms


def _oracle_witness(box: BoxDomain, spec: MomentSpec, sense: str) -> DiscreteJoint:
    from .oracle.lp import GridLpProblem, LpStatus, Sense, solve_grid_lp

    problem = GridLpProblem.from_spec(box, spec, FALLBACK_RESOLUTION, Sense(sense))
    sol = solve_grid_lp(problem)
    if sol.status is not LpStatus.OPTIMAL:
        raise DomainError("WITNESS_UNAVAILABLE", "no witness construction and the grid oracle is infeasible")
    return sol.witness


def upper_witness_full(box: BoxDomain, spec: MomentSpec) -> DiscreteJoint:
    """Witness for the upper bound with means and variances known.

    ``X`` is the two-point law from :func:`kappa_tilde` and ``Y`` sits on the
    line of slope ``k / Var(X)`` with ``k = min(sqrt(Var X Var Y), kappa_tilde)``.
    When that line alone leaves ``Var(Y)`` short, conditional-mean-zero noise
    makes up the difference. If the noise cannot be placed, the grid LP oracle
    supplies the witness and ``oracle_witness`` is set.
    """
    _require(spec, "full")
    u = normalize(box, spec)
    atoms = _upper_full_unit(u.alpha, u.alpha_c, u.beta, u.beta_c, u.var_x, u.var_y)
    if atoms is None:
        return _oracle_witness(box, spec, "MAX")
    return DiscreteJoint.from_atoms(atoms).from_unit(box)


def lower_witness_full(box: BoxDomain, spec: MomentSpec) -> DiscreteJoint:
    """Reflect ``X`` to ``a + b - X``, build the upper witness, reflect back."""
    _require(spec, "full")
    u = normalize(box, spec)
    atoms = _upper_full_unit(u.alpha_c, u.alpha, u.beta, u.beta_c, u.var_x, u.var_y)
    if atoms is None:
        return _oracle_witness(box, spec, "MIN")
    reflected = [(1.0 - x, y, w) for x, y, w in atoms]
    return DiscreteJoint.from_atoms(reflected).from_unit(box)


def witness(box: BoxDomain, spec: MomentSpec, side: str) -> DiscreteJoint:
    """Extremal joint for ``side`` ("lower" or "upper") in any moment regime.

    Without known means the bound is attained at centred means, so the
    means-only or full construction is run there.
    """
    if side not in ("lower", "upper"):
        raise DomainError("INVALID_SIDE", f"side must be 'lower' or 'upper', got {side!r}")
    regime = spec.regime
    mid_x = 0.5 * (box.a + box.b)
    mid_y = 0.5 * (box.c + box.d)
    if regime == "none":
        spec, regime = MomentSpec(mid_x, mid_y), "means"
    elif regime == "variances":
        normalize(box, spec)
        spec, regime = MomentSpec(mid_x, mid_y, spec.var_x, spec.var_y), "full"
    if regime == "means":
        return lower_witness_means(box, spec) if side == "lower" else upper_witness_means(box, spec)
    return lower_witness_full(box, spec) if side == "lower" else upper_witness_full(box, spec)


@dataclass(frozen=True)
class BinaryJointCell:
    """2x2 table on the unit-box corners with the same ``E(X), E(Y), E(XY)``.

    ``p = q + shift * (1, -1, -1, 1)`` where ``q`` is the independent table
    with the same means.
    """

    p00: float
    p10: float
    p01: float
    p11: float
    q00: float
    q10: float
    q01: float
    q11: float
    shift: float

    @property
    def p(self) -> np.ndarray:
        return np.array([self.p00, self.p10, self.p01, self.p11])

    @property
    def q(self) -> np.ndarray:
        return np.array([self.q00, self.q10, self.q01, self.q11])


def binary_reduction(joint: DiscreteJoint, box: BoxDomain) -> BinaryJointCell:
    unit = joint.to_unit(box)
    ex, ey = unit.mean_x, unit.mean_y
    exy = float(unit.p @ (unit.x * unit.y))
    p = (1.0 - ex - ey + exy, ex - exy, ey - exy, exy)
    if min(p) < -1e-12 or max(p) > 1.0 + 1e-12:
        raise AssertionError(f"binary reduction left the simplex: {p}")
    q = ((1.0 - ex) * (1.0 - ey), ex * (1.0 - ey), (1.0 - ex) * ey, ex * ey)
    return BinaryJointCell(*p, *q, shift=exy - ex * ey)
