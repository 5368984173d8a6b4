"""Verification runs that pit the closed forms against independent evidence.

Every check yields one record ``{check, params, closed_form, oracle_value,
gap, pass}``; :func:`to_json_line` renders it as a JSON line. Stochastic
checks carry their seed in ``params``.
"""

from __future__ import annotations

import itertools
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import stats

from ..bounds import bounds_all_known, covariance_bounds
from ..domain import BoxDomain, MomentSpec
from ..families import (
    antitone_coupling,
    beta_moments,
    beta_shapes,
    comonotone_coupling,
    product_coupling,
    three_point_marginal,
    three_point_moments,
)
from ..standardize import example_family_ratios
from .lp import LpStatus, lp_bounds

LP_SLACK = 1e-9
CONTAIN_SLACK = 1e-12
RATIO_TOL = 1e-12
SIGMAS = 5.0


def tolerance(box: BoxDomain, resolution: int) -> float:
    """Allowed distance of a grid LP optimum from the closed form."""
    return 4.0 * max(box.width_x, box.width_y) ** 2 / resolution


def record(check: str, params: dict, closed_form, oracle_value, gap, ok: bool) -> dict:
    return {
        "check": check,
        "params": params,
        "closed_form": closed_form,
        "oracle_value": oracle_value,
        "gap": gap,
        "pass": bool(ok),
    }


def to_json_line(rec: dict) -> str:
    return json.dumps(rec, sort_keys=False, allow_nan=False, default=_jsonable)


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def worker_count() -> int:
    env = os.environ.get("COVBOUNDS_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def ordered_map(fn: Callable, items: Sequence) -> list:
    """``map`` fanned out over threads; results keep input order."""
    n = worker_count()
    if n <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _box_params(box: BoxDomain) -> dict:
    return {"a": box.a, "b": box.b, "c": box.c, "d": box.d}


def _spec_params(spec: MomentSpec) -> dict:
    out = {}
    for k in ("mean_x", "mean_y", "var_x", "var_y"):
        v = getattr(spec, k)
        if v is not None:
            out[k] = v
    return out


def lp_spec_for(box: BoxDomain, spec: MomentSpec) -> MomentSpec:
    """Moments handed to the LP: unknown means are pinned at the box centre.

    The bounds without known means are the supremum over means, attained at
    the centre, and a grid LP needs fixed means to stay linear.
    """
    if spec.has_means:
        return spec
    mid_x = 0.5 * (box.a + box.b)
    mid_y = 0.5 * (box.c + box.d)
    return MomentSpec(mid_x, mid_y, spec.var_x, spec.var_y)


def verify_bounds(box: BoxDomain, spec: MomentSpec, resolution: int, **lp_kw) -> dict:
    """Grid LP extremes against the closed-form interval for ``spec``.

    Passes when neither LP value escapes the closed form (beyond 1e-9 of the
    box scale) and both come within :func:`tolerance` of it.
    """
    cf = covariance_bounds(box, spec)
    params = {"regime": spec.regime, "resolution": resolution, **_box_params(box), **_spec_params(spec)}
    lo, hi = lp_bounds(box, lp_spec_for(box, spec), resolution, **lp_kw)
    if lo.status is not LpStatus.OPTIMAL or hi.status is not LpStatus.OPTIMAL:
        params["status"] = LpStatus.INFEASIBLE.value
        return record("lp", params, [cf.lower, cf.upper], None, None, False)
    params["status"] = LpStatus.OPTIMAL.value
    slack = LP_SLACK * max(1.0, box.area)
    gap = max(cf.upper - hi.value, lo.value - cf.lower)
    inside = hi.value <= cf.upper + slack and lo.value >= cf.lower - slack
    ok = inside and gap <= tolerance(box, resolution)
    return record("lp", params, [cf.lower, cf.upper], [lo.value, hi.value], gap, ok)


# random specs -------------------------------------------------------------


def random_box(rng: np.random.Generator) -> BoxDomain:
    a, c, wx, wy = (float(v) for v in rng.uniform([-3.0, -3.0, 0.5, 0.5], [3.0, 3.0, 3.0, 3.0]))
    return BoxDomain(a, a + wx, c, c + wy)


def random_means_spec(rng: np.random.Generator, box: BoxDomain) -> MomentSpec:
    alpha, beta = rng.uniform(0.0, 1.0, 2)
    return MomentSpec(float(box.from_unit_x(alpha)), float(box.from_unit_y(beta)))


def grid_min_variance(alpha: float, resolution: int) -> float:
    """Smallest unit-box variance with mean ``alpha`` on an evenly spaced grid."""
    h = 1.0 / (resolution - 1)
    k = min(math.floor(alpha / h), resolution - 2)
    return max((alpha - k * h) * ((k + 1) * h - alpha), 0.0)


def random_full_spec(rng: np.random.Generator, box: BoxDomain, resolution: int | None = None) -> MomentSpec:
    """Means uniform in the box; each variance a uniform fraction of its maximum.

    With ``resolution`` the variances are kept at least twice the smallest
    value the grid can realize, so the grid LP is feasible.
    """
    while True:
        alpha, beta = rng.uniform(0.01, 0.99, 2)
        fx, fy = rng.uniform(0.0, 1.0, 2)
        vx = fx * alpha * (1.0 - alpha)
        vy = fy * beta * (1.0 - beta)
        if resolution is not None and (
            vx < 2.0 * grid_min_variance(alpha, resolution) or vy < 2.0 * grid_min_variance(beta, resolution)
        ):
            continue
        return MomentSpec(
            float(box.from_unit_x(alpha)),
            float(box.from_unit_y(beta)),
            float(vx * box.width_x**2),
            float(vy * box.width_y**2),
        )


def lp_suite(cases: int, resolution: int, seed: int) -> list[dict]:
    """Random specs checked with :func:`verify_bounds`.

    Resolution 2 only admits means-only specs (a 2-point grid fixes the
    variance); finer grids cycle through all four regimes.
    """
    rng = np.random.default_rng(seed)
    regimes = ["means"] if resolution == 2 else ["means", "full", "variances", "none"]
    jobs = []
    for i in range(cases):
        box = random_box(rng)
        regime = regimes[i % len(regimes)]
        if regime == "means":
            spec = random_means_spec(rng, box)
        else:
            full = random_full_spec(rng, box, resolution)
            if regime == "full":
                spec = full
            elif regime == "variances":
                spec = MomentSpec(var_x=full.var_x, var_y=full.var_y)
            else:
                spec = MomentSpec()
        jobs.append((box, spec))

    def run(job):
        rec = verify_bounds(job[0], job[1], resolution)
        rec["params"]["seed"] = seed
        return rec

    return ordered_map(run, jobs)


# three-point family ---------------------------------------------------------


def _coupling_record(check, params, box, marg_x, marg_y, moments) -> dict:
    cf = bounds_all_known(box, moments)
    covs = [
        antitone_coupling(marg_x, marg_y).cov,
        product_coupling(marg_x, marg_y).cov,
        comonotone_coupling(marg_x, marg_y).cov,
    ]
    slack = CONTAIN_SLACK * max(1.0, box.area)
    gap = max(max(covs) - cf.upper, cf.lower - min(covs))
    ok = all(cf.contains(v, slack) for v in covs)
    return record(check, params, [cf.lower, cf.upper], covs, gap, ok)


def three_point_checks(alpha: float, beta: float, r: float, s: float, box: BoxDomain | None = None) -> list[dict]:
    """Coupling containment and ratio agreement for one parameter tuple."""
    box = box or BoxDomain(0.0, 1.0, 0.0, 1.0)
    params = {"alpha": alpha, "beta": beta, "r": r, "s": s}
    mx, vx = three_point_moments(alpha, r, box.a, box.b)
    my, vy = three_point_moments(beta, s, box.c, box.d)
    marg_x = three_point_marginal(alpha, r, box.a, box.b)
    marg_y = three_point_marginal(beta, s, box.c, box.d)
    out = [_coupling_record("three_point.couplings", params, box, marg_x, marg_y, MomentSpec(mx, my, vx, vy))]

    fr = example_family_ratios(alpha, beta, r, s)
    closed = [fr.lower_ratio, fr.upper_ratio]
    direct = [fr.direct_lower, fr.direct_upper]
    gap = max(abs(u - v) / max(abs(u), abs(v)) for u, v in zip(closed, direct))
    out.append(record("three_point.ratios", params, closed, direct, gap, gap <= RATIO_TOL))
    return out


def three_point_limits(alpha: float, beta: float) -> list[dict]:
    """Ratios are at most 1 with all mass on the endpoints and exceed 1 as ``r, s -> 1``."""
    params = {"alpha": alpha, "beta": beta, "r": 0.0, "s": 0.0}
    at0 = example_family_ratios(alpha, beta, 0.0, 0.0)
    vals0 = [at0.lower_ratio, at0.upper_ratio]
    near = 1.0 - 1e-6
    at1 = example_family_ratios(alpha, beta, near, near)
    vals1 = [at1.lower_ratio, at1.upper_ratio]
    return [
        record("three_point.limit_r0", params, [1.0, 1.0], vals0, max(vals0) - 1.0,
               max(vals0) <= 1.0 + RATIO_TOL),
        record("three_point.limit_r1", {**params, "r": near, "s": near}, [1.0, 1.0], vals1,
               1.0 - min(vals1), min(vals1) > 1.0),
    ]


def sweep_three_point_family(alphas: Iterable[float], betas: Iterable[float],
                             rs: Iterable[float], ss: Iterable[float]) -> list[dict]:
    alphas, betas, rs, ss = (list(v) for v in (alphas, betas, rs, ss))
    tuples = list(itertools.product(alphas, betas, rs, ss))
    recs = [rec for chunk in ordered_map(lambda t: three_point_checks(*t), tuples) for rec in chunk]
    for a, b in itertools.product(alphas, betas):
        recs.extend(three_point_limits(a, b))
    return recs


def three_point_suite(cases: int, seed: int) -> list[dict]:
    rng = np.random.default_rng(seed)
    tuples = [
        (float(rng.uniform(0.01, 0.99)), float(rng.uniform(0.01, 0.99)),
         float(rng.uniform(0.0, 0.99)), float(rng.uniform(0.0, 0.99)))
        for _ in range(cases)
    ]

    def run(t):
        recs = three_point_checks(*t)
        for rec in recs:
            rec["params"]["seed"] = seed
        return recs

    recs = [rec for chunk in ordered_map(run, tuples) for rec in chunk]
    for a, b, _, _ in tuples[: min(cases, 10)]:
        recs.extend(three_point_limits(a, b))
    return recs


# beta family ---------------------------------------------------------------

DEFAULT_BETA_CONFIGS = (
    (0.5, 0.5, 0.5, 0.5),
    (0.3, 0.6, 0.5, 0.5),
    (0.2, 0.8, 0.3, 0.7),
    (0.7, 0.7, 0.9, 0.1),
    (0.1, 0.4, 0.2, 0.95),
    (0.9, 0.2, 0.6, 0.6),
)


def beta_checks(alpha, beta, r, s, n: int, seed: int, index: int = 0) -> list[dict]:
    rng = np.random.default_rng([seed, index])
    params = {"alpha": alpha, "beta": beta, "r": r, "s": s, "n": n, "seed": seed}
    box = BoxDomain(0.0, 1.0, 0.0, 1.0)
    px, qx = beta_shapes(alpha, r)
    py, qy = beta_shapes(beta, s)
    mx, vx = three_point_moments(alpha, r)
    my, vy = three_point_moments(beta, s)
    bmx, bvx = beta_moments(alpha, r)
    bmy, bvy = beta_moments(beta, s)
    cf = bounds_all_known(box, MomentSpec(mx, my, vx, vy))

    u = rng.random(n)
    v = rng.random(n)
    x = stats.beta.ppf(u, px, qx)
    samples = {
        "independent": stats.beta.ppf(v, py, qy),
        "comonotone": stats.beta.ppf(u, py, qy),
        "antitone": stats.beta.ppf(1.0 - u, py, qy),
    }
    out = []
    for kind, y in samples.items():
        prod = (x - mx) * (y - my)
        cov = float(prod.mean())
        se = float(prod.std() / math.sqrt(n))
        if kind == "independent":
            gap, ok, cfv = abs(cov), abs(cov) <= SIGMAS * se, 0.0
        elif kind == "comonotone":
            gap, ok, cfv = cov - cf.upper, cov <= cf.upper + SIGMAS * se, cf.upper
        else:
            gap, ok, cfv = cf.lower - cov, cov >= cf.lower - SIGMAS * se, cf.lower
        out.append(record(f"beta.{kind}", {**params, "se": se}, cfv, cov, gap, ok))

    diffs = [abs(bmx - mx), abs(bvx - vx), abs(bmy - my), abs(bvy - vy)]
    out.append(record("beta.moments", params, [mx, vx, my, vy], [bmx, bvx, bmy, bvy],
                      max(diffs), max(diffs) <= 1e-12))
    return out


def sweep_beta_family(samples: int = 100_000, seed: int = 0,
                      configs: Sequence[tuple] = DEFAULT_BETA_CONFIGS) -> list[dict]:
    jobs = list(enumerate(configs))
    chunks = ordered_map(lambda j: beta_checks(*j[1], n=samples, seed=seed, index=j[0]), jobs)
    return [rec for chunk in chunks for rec in chunk]
