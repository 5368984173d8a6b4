"""Reference computations that share no code with the package.

The grid LP here goes through scipy's HiGHS solver instead of the package's
simplex, and the kappa-tilde maximizer is a plain golden-section search.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import linprog


def highs_cov(a, b, c, d, res, sense, mean_x=None, mean_y=None, var_x=None, var_y=None):
    """Extreme covariance over distributions on a ``res x res`` grid of the box."""
    gx = np.linspace(a, b, res)
    gy = np.linspace(c, d, res)
    X, Y = (m.ravel() for m in np.meshgrid(gx, gy, indexing="ij"))
    rows, rhs = [np.ones_like(X)], [1.0]
    if mean_x is not None:
        rows += [X, Y]
        rhs += [mean_x, mean_y]
    if var_x is not None:
        rows += [(X - mean_x) ** 2, (Y - mean_y) ** 2]
        rhs += [var_x, var_y]
    sign = 1.0 if sense == "min" else -1.0
    out = linprog(sign * X * Y, A_eq=np.vstack(rows), b_eq=rhs, bounds=(0, None), method="highs")
    assert out.status == 0, out.message
    p = out.x
    return float(p @ (X * Y) - (p @ X) * (p @ Y))


def golden_max(f, lo, hi, iters=200):
    """Maximize a unimodal vectorized ``f`` on ``[lo, hi]`` elementwise."""
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    g = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - g * (hi - lo)
    x2 = lo + g * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(iters):
        left = f1 < f2
        lo = np.where(left, x1, lo)
        hi = np.where(left, hi, x2)
        x1n = np.where(left, x2, hi - g * (hi - lo))
        x2n = np.where(left, lo + g * (hi - lo), x1)
        x1, x2 = x1n, x2n
        f1, f2 = f(x1), f(x2)
    best = np.maximum(np.maximum(f(lo), f(hi)), np.maximum(f1, f2))
    return best


def kappa_tilde_numeric(alpha, beta, var_x):
    """Max over the feasible two-point spread of ``sqrt(Vx) * min(g*beta, (1-beta)/g)``."""
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    s = np.sqrt(np.asarray(var_x, dtype=float))
    lo = s / alpha
    hi = (1.0 - alpha) / s
    lo, hi = np.minimum(lo, hi), np.maximum(lo, hi)

    def f(g):
        return s * np.minimum(g * beta, (1.0 - beta) / g)

    return golden_max(f, lo, hi)


def moments(x, y, p):
    x, y, p = (np.asarray(v, dtype=float) for v in (x, y, p))
    mx, my = p @ x, p @ y
    return mx, my, p @ (x - mx) ** 2, p @ (y - my) ** 2, p @ ((x - mx) * (y - my))
