import os
import subprocess
import sys

import numpy as np
import pytest

from covbounds import BoxDomain, DomainError, MomentSpec, bounds_all_known, bounds_means_known
from covbounds.oracle import simplex, sweeps
from covbounds.oracle.lp import (
    GridLpProblem,
    LpStatus,
    MomentKind,
    Sense,
    constraint_residuals,
    lp_bounds,
    refine_by_inclusion,
    solve_grid_lp,
)

from oracles import highs_cov

UNIT = BoxDomain(0.0, 1.0, 0.0, 1.0)
MX, MY, VX, VY = MomentKind.MEAN_X, MomentKind.MEAN_Y, MomentKind.VAR_X, MomentKind.VAR_Y
BACKENDS = sorted(simplex.KERNELS)


def problem(n, sense, **targets):
    kinds = {"mx": MX, "my": MY, "vx": VX, "vy": VY}
    cons = tuple((kinds[k], v) for k, v in targets.items())
    return GridLpProblem(UNIT, n, n, cons, sense)


def test_compiled_kernel_available():
    # the build compiles the extension; the pure kernel is always present
    assert "python" in simplex.KERNELS
    assert "cython" in simplex.KERNELS


@pytest.mark.parametrize("backend", BACKENDS)
def test_two_by_two_examples(backend):
    sol = solve_grid_lp(problem(2, Sense.MAX, mx=0.3, my=0.6), backend=backend)
    assert sol.status is LpStatus.OPTIMAL
    assert sol.value == pytest.approx(0.12, abs=1e-15)
    sol = solve_grid_lp(problem(2, Sense.MIN, mx=0.5, my=0.5), backend=backend)
    assert sol.value == pytest.approx(-0.25, abs=1e-15)


def test_forty_one_grid_full():
    sol = solve_grid_lp(problem(41, Sense.MAX, mx=0.5, my=0.5, vx=0.01, vy=0.01))
    assert 0.01 - 2e-3 <= sol.value <= 0.01 + 1e-12
    assert sol.value == pytest.approx(highs_cov(0, 1, 0, 1, 41, "max", 0.5, 0.5, 0.01, 0.01), abs=1e-9)


def test_witness_is_basic_and_feasible():
    p = problem(21, Sense.MIN, mx=0.3, my=0.6, vx=0.1, vy=0.05)
    sol = solve_grid_lp(p)
    assert sol.witness.oracle_witness
    assert len(sol.witness) <= len(p.constraints) + 1
    assert max(constraint_residuals(p, sol.witness).values()) <= 1e-9
    assert sol.witness.cov == pytest.approx(sol.value, abs=1e-9)


def test_infeasible_variance_on_grid():
    # variance 0.0001 around mean 0.55 cannot be met on a 3-point grid
    sol = solve_grid_lp(problem(3, Sense.MAX, mx=0.55, my=0.5, vx=0.0001, vy=0.01))
    assert sol.status is LpStatus.INFEASIBLE
    assert sol.witness is None


def test_problem_validation():
    with pytest.raises(DomainError):
        problem(1, Sense.MAX, mx=0.5, my=0.5)
    with pytest.raises(DomainError):
        GridLpProblem(UNIT, 2, 2, ((VX, 0.1),), Sense.MAX)
    with pytest.raises(DomainError):
        GridLpProblem(UNIT, 2001, 2001, (), Sense.MAX)
    with pytest.raises(DomainError):
        GridLpProblem(UNIT, 2, 2, ((MX, 0.1), (MX, 0.2)), Sense.MAX)


def test_sense_ordering():
    lo, hi = lp_bounds(UNIT, MomentSpec(0.3, 0.6, 0.1, 0.1), 11)
    assert lo.value <= hi.value


@pytest.mark.parametrize("rule", sorted(simplex.RULES))
def test_rules_agree(rule):
    sol = solve_grid_lp(problem(15, Sense.MAX, mx=0.4, my=0.7, vx=0.05, vy=0.1), rule=rule)
    ref = highs_cov(0, 1, 0, 1, 15, "max", 0.4, 0.7, 0.05, 0.1)
    assert sol.value == pytest.approx(ref, abs=1e-10)


def test_kernel_parity():
    rng = np.random.default_rng(5)
    for _ in range(20):
        mx, my = rng.uniform(0.1, 0.9, 2)
        vx = rng.uniform(0.2, 0.8) * mx * (1 - mx)
        vy = rng.uniform(0.2, 0.8) * my * (1 - my)
        p = problem(9, Sense.MAX, mx=mx, my=my, vx=vx, vy=vy)
        a = solve_grid_lp(p, backend="python")
        b = solve_grid_lp(p, backend="cython")
        assert a.status == b.status
        if a.status is LpStatus.OPTIMAL:
            assert a.iterations == b.iterations
            assert a.value == pytest.approx(b.value, abs=1e-13)


def test_revised_path_matches_dense(monkeypatch):
    p = problem(41, Sense.MAX, mx=0.3, my=0.6, vx=0.1, vy=0.1)
    dense = solve_grid_lp(p)
    monkeypatch.setattr(simplex, "DENSE_MAX_COLUMNS", 10)
    revised = solve_grid_lp(p)
    assert revised.method != dense.method
    assert revised.value == pytest.approx(dense.value, abs=1e-10)


def test_simplex_unbounded_and_infeasible():
    A = np.array([[1.0, -1.0]])
    res = simplex.solve(A, np.array([0.0]), np.array([-1.0, 0.0]))
    assert res.status == simplex.UNBOUNDED
    A = np.array([[1.0, 1.0], [1.0, 1.0]])
    res = simplex.solve(A, np.array([1.0, 2.0]), np.zeros(2))
    assert res.status == simplex.INFEASIBLE


def test_refinement_monotone():
    spec = MomentSpec(0.3, 0.6, 0.1, 0.1)
    res = [3, 5, 9, 17, 33]
    assert refine_by_inclusion(res)
    assert not refine_by_inclusion([3, 4])
    vals = [lp_bounds(UNIT, spec, n) for n in res]
    his = [hi.value for _, hi in vals]
    los = [lo.value for lo, _ in vals]
    assert all(b >= a - 1e-12 for a, b in zip(his, his[1:]))
    assert all(b <= a + 1e-12 for a, b in zip(los, los[1:]))
    cf = bounds_all_known(UNIT, spec)
    assert his[-1] <= cf.upper + 1e-9 and los[-1] >= cf.lower - 1e-9


def test_corner_exactness():
    rng = np.random.default_rng(9)
    for _ in range(30):
        box = sweeps.random_box(rng)
        spec = sweeps.random_means_spec(rng, box)
        lo, hi = lp_bounds(box, spec, 2)
        cf = bounds_means_known(box, spec)
        assert lo.value == pytest.approx(cf.lower, abs=1e-12)
        assert hi.value == pytest.approx(cf.upper, abs=1e-12)


def test_verify_bounds_reports():
    rec = sweeps.verify_bounds(UNIT, MomentSpec(0.3, 0.6), 2)
    assert set(rec) == {"check", "params", "closed_form", "oracle_value", "gap", "pass"}
    assert rec["pass"] and rec["gap"] <= 1e-15
    rec = sweeps.verify_bounds(UNIT, MomentSpec(0.55, 0.5, 0.0001, 0.01), 3)
    assert not rec["pass"] and rec["params"]["status"] == "INFEASIBLE"


def test_lp_suite_deterministic():
    a = [sweeps.to_json_line(r) for r in sweeps.lp_suite(12, 21, 4)]
    b = [sweeps.to_json_line(r) for r in sweeps.lp_suite(12, 21, 4)]
    assert a == b
    assert all('"pass": true' in line for line in a)


def test_thread_count_does_not_change_output(monkeypatch):
    monkeypatch.setenv("COVBOUNDS_THREADS", "1")
    a = sweeps.three_point_suite(30, 2)
    monkeypatch.setenv("COVBOUNDS_THREADS", "4")
    assert sweeps.three_point_suite(30, 2) == a


def test_three_point_family_sweep_examples():
    recs = sweeps.sweep_three_point_family([0.5], [0.5], [0.99], [0.99])
    ratios = next(r for r in recs if r["check"] == "three_point.ratios")
    assert ratios["closed_form"] == pytest.approx([100.0, 100.0], rel=1e-9)
    lim = {r["check"]: r for r in sweeps.three_point_limits(0.2, 0.8)}
    assert lim["three_point.limit_r0"]["oracle_value"][0] == pytest.approx(1.0, rel=1e-12)
    lim = {r["check"]: r for r in sweeps.three_point_limits(0.4, 0.4)}
    assert lim["three_point.limit_r0"]["oracle_value"][1] == pytest.approx(1.0, rel=1e-12)
    assert all(r["pass"] for r in recs)


def test_beta_sweep_records_seed():
    recs = sweeps.sweep_beta_family(20_000, 3, [(0.5, 0.5, 0.5, 0.5)])
    assert {r["check"] for r in recs} == {"beta.independent", "beta.comonotone", "beta.antitone", "beta.moments"}
    assert all(r["pass"] and r["params"]["seed"] == 3 for r in recs)
    mom = next(r for r in recs if r["check"] == "beta.moments")
    assert mom["oracle_value"] == pytest.approx([0.5, 0.125, 0.5, 0.125], abs=1e-15)


def test_pure_python_fallback_selected_by_env():
    code = "from covbounds.oracle import simplex; print(simplex.DEFAULT_BACKEND)"
    env = {**os.environ, "COVBOUNDS_PURE_PYTHON": "1"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    env.pop("COVBOUNDS_PURE_PYTHON")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "cython"
