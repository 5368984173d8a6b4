import numpy as np
import pytest
from scipy import stats

from covbounds import DomainError
from covbounds.families import (
    antitone_coupling,
    beta_moments,
    beta_shapes,
    comonotone_coupling,
    product_coupling,
    three_point_marginal,
    three_point_moments,
)


def test_three_point_marginal_moments():
    v, p = three_point_marginal(0.3, 0.4, 2.0, 6.0)
    assert v.tolist() == [2.0, 3.2, 6.0]
    assert p.sum() == pytest.approx(1.0)
    mean = p @ v
    var = p @ (v - mean) ** 2
    assert (mean, var) == pytest.approx(three_point_moments(0.3, 0.4, 2.0, 6.0), rel=1e-14)


def test_beta_moments_match_scipy_and_three_point():
    assert beta_shapes(0.5, 0.5) == (0.5, 0.5)
    mean, var = beta_moments(0.5, 0.5)
    assert (mean, var) == pytest.approx((0.5, 0.125), abs=1e-15)
    for alpha, r in [(0.2, 0.3), (0.7, 0.9), (0.45, 0.05)]:
        p, q = beta_shapes(alpha, r)
        ref = stats.beta(p, q)
        assert beta_moments(alpha, r) == pytest.approx((ref.mean(), ref.var()), rel=1e-12)
        assert beta_moments(alpha, r) == pytest.approx(three_point_moments(alpha, r), abs=1e-12)


def test_beta_rejects_r_zero():
    with pytest.raises(DomainError):
        beta_shapes(0.5, 0.0)


def test_couplings_preserve_marginals_and_order():
    mx = three_point_marginal(0.3, 0.2)
    my = three_point_marginal(0.6, 0.5)
    joints = [antitone_coupling(mx, my), product_coupling(mx, my), comonotone_coupling(mx, my)]
    for j in joints:
        assert j.p.sum() == pytest.approx(1.0)
        assert j.mean_x == pytest.approx(0.3, abs=1e-15)
        assert j.mean_y == pytest.approx(0.6, abs=1e-15)
    covs = [j.cov for j in joints]
    assert covs[1] == pytest.approx(0.0, abs=1e-15)
    assert covs[0] < covs[1] < covs[2]


def test_comonotone_is_monotone():
    rng = np.random.default_rng(0)
    xv, yv = np.sort(rng.random(5)), np.sort(rng.random(4))
    j = comonotone_coupling((xv, rng.dirichlet(np.ones(5))), (yv, rng.dirichlet(np.ones(4))))
    order = np.lexsort((j.y, j.x))
    assert np.all(np.diff(j.y[order]) >= 0)
