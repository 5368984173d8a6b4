"""Two-phase simplex for ``min c.x  s.t.  A x = b, x >= 0`` with few rows.

The pivot loop runs in a compiled kernel when it is available and falls back
to numpy otherwise; both produce identical pivot sequences. Problems wider
than ``DENSE_MAX_COLUMNS`` use a revised simplex that never forms the full
tableau.

Pricing defaults to the largest reduced cost (``rule="dantzig"``); after more
than ``m`` consecutive degenerate pivots the solve switches to Bland's rule
for good, so it cannot cycle. ``rule="bland"`` applies Bland's rule from the
first pivot, which is far slower on wide grids.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import _simplex_py

try:
    from . import _simplex as _compiled
except ImportError:  # pragma: no cover - depends on the build
    _compiled = None

KERNELS = {"python": _simplex_py}
if _compiled is not None:
    KERNELS["cython"] = _compiled

if os.environ.get("COVBOUNDS_PURE_PYTHON") or _compiled is None:
    DEFAULT_BACKEND = "python"
else:
    DEFAULT_BACKEND = "cython"

OPTIMAL = _simplex_py.OPTIMAL
UNBOUNDED = _simplex_py.UNBOUNDED
ITERATION_LIMIT = _simplex_py.ITERATION_LIMIT
INFEASIBLE = 3

RULES = {"bland": _simplex_py.BLAND, "dantzig": _simplex_py.DANTZIG}

PIVOT_TOL = 1e-11
OPT_TOL = 1e-11
FEAS_TOL = 1e-9
DENSE_MAX_COLUMNS = 10_000


@dataclass
class SimplexResult:
    status: int
    x: np.ndarray
    basis: np.ndarray
    iterations: int
    method: str


def _refine(A, b, basis, n):
    """Recompute basic values by a direct solve to shed pivoting round-off."""
    m = A.shape[0]
    B = np.zeros((m, m))
    for k, col in enumerate(basis):
        if col < n:
            B[:, k] = A[:, col]
        else:
            B[col - n, k] = 1.0
    x = np.zeros(n)
    try:
        xb = np.linalg.solve(B, b)
    except np.linalg.LinAlgError:
        return None
    for k, col in enumerate(basis):
        if col < n:
            x[col] = xb[k]
    return x


def _dense(A, b, c, kernel, rule, max_iter):
    m, n = A.shape
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n : n + m] = np.eye(m)
    T[:m, -1] = b
    T[m, :n] = -A.sum(axis=0)
    T[m, -1] = -b.sum()
    basis = np.arange(n, n + m, dtype=np.int64)

    status, it1 = kernel.run_simplex(T, basis, n + m, PIVOT_TOL, OPT_TOL, max_iter, rule)
    if status != OPTIMAL or -T[m, -1] > FEAS_TOL:
        return SimplexResult(INFEASIBLE, np.zeros(n), basis, it1, "dense")

    for i in range(m):
        if basis[i] >= n:
            row = np.abs(T[i, :n])
            j = int(np.argmax(row))
            if row[j] > PIVOT_TOL:
                kernel.pivot(T, basis, i, j)
            # otherwise row i is redundant; its artificial stays basic at zero

    T[m, :] = 0.0
    T[m, :n] = c
    for i in range(m):
        k = basis[i]
        if k < n and c[k] != 0.0:
            T[m] -= c[k] * T[i]
    status, it2 = kernel.run_simplex(T, basis, n, PIVOT_TOL, OPT_TOL, max_iter, rule)
    if status != OPTIMAL:
        return SimplexResult(status, np.zeros(n), basis, it1 + it2, "dense")

    x = _refine(A, b, basis, n)
    if x is None:
        x = np.zeros(n)
        for i in range(m):
            if basis[i] < n:
                x[basis[i]] = T[i, -1]
    return SimplexResult(OPTIMAL, x, basis.copy(), it1 + it2, "dense")


def _revised(A, b, c, rule, max_iter):
    m, n = A.shape
    M = np.hstack([A, np.eye(m)])
    basis = np.arange(n, n + m, dtype=np.int64)
    Binv = np.eye(m)
    total = 0

    def phase(cost, n_enter):
        nonlocal Binv, total
        use_bland = rule == RULES["bland"]
        degenerate_run = 0
        for _ in range(max_iter):
            total += 1
            if total % 64 == 0:
                Binv = np.linalg.inv(M[:, basis])
            xb = Binv @ b
            y = cost[basis] @ Binv
            rc = cost[:n_enter] - y @ M[:, :n_enter]
            if use_bland:
                cand = np.flatnonzero(rc < -OPT_TOL)
                if cand.size == 0:
                    return OPTIMAL
                j = int(cand[0])
            else:
                j = int(np.argmin(rc))
                if rc[j] >= -OPT_TOL:
                    return OPTIMAL
            d = Binv @ M[:, j]
            rows = np.flatnonzero(d > PIVOT_TOL)
            if rows.size == 0:
                return UNBOUNDED
            ratios = xb[rows] / d[rows]
            best = ratios.min()
            tied = rows[ratios <= best + 1e-12]
            r = int(tied[np.argmin(basis[tied])])
            if xb[r] <= 1e-12:
                degenerate_run += 1
                if degenerate_run > m:
                    use_bland = True
            else:
                degenerate_run = 0
            E = np.eye(m)
            E[:, r] = -d / d[r]
            E[r, r] = 1.0 / d[r]
            Binv = E @ Binv
            basis[r] = j
        return ITERATION_LIMIT

    cost1 = np.concatenate([np.zeros(n), np.ones(m)])
    status = phase(cost1, n + m)
    xb = np.linalg.inv(M[:, basis]) @ b
    if status != OPTIMAL or cost1[basis] @ xb > FEAS_TOL:
        return SimplexResult(INFEASIBLE, np.zeros(n), basis, total, "revised")
    for i in range(m):
        if basis[i] >= n:
            row = np.linalg.inv(M[:, basis])[i] @ A
            j = int(np.argmax(np.abs(row)))
            if abs(row[j]) > PIVOT_TOL and j not in basis:
                basis[i] = j
    Binv = np.linalg.inv(M[:, basis])
    cost2 = np.concatenate([c, np.zeros(m)])
    status = phase(cost2, n)
    if status != OPTIMAL:
        return SimplexResult(status, np.zeros(n), basis, total, "revised")
    x = _refine(A, b, basis, n)
    return SimplexResult(OPTIMAL, x, basis.copy(), total, "revised")


def solve(A, b, c, *, rule: str = "dantzig", backend: str | None = None, max_iter: int | None = None):
    """Minimize ``c.x`` subject to ``A x = b, x >= 0``."""
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = A.shape
    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0
    if max_iter is None:
        max_iter = 50 * (n + m)
    code = RULES[rule]
    if n > DENSE_MAX_COLUMNS:
        return _revised(A, b, c, code, max_iter)
    kernel = KERNELS[backend or DEFAULT_BACKEND]
    return _dense(A, b, c, kernel, code, max_iter)
