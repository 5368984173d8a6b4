"""Pure numpy pivoting kernel; same contract as the compiled ``_simplex`` module.

The tableau ``T`` has one row per equality constraint followed by the
reduced-cost row; its last column is the right-hand side. ``basis[i]`` is the
column basic in row ``i``. Only columns ``< n_enter`` may enter the basis.
"""

import numpy as np

OPTIMAL = 0
UNBOUNDED = 1
ITERATION_LIMIT = 2

BLAND = 0
DANTZIG = 1

_RATIO_TIE = 1e-12


def pivot(T, basis, row, col):
    T[row] /= T[row, col]
    factors = T[:, col].copy()
    factors[row] = 0.0
    T -= np.outer(factors, T[row])
    basis[row] = col


def _leaving_row(T, basis, col, pivot_tol):
    m = T.shape[0] - 1
    column = T[:m, col]
    rows = np.flatnonzero(column > pivot_tol)
    if rows.size == 0:
        return -1
    ratios = T[rows, -1] / column[rows]
    best = ratios.min()
    tied = rows[ratios <= best + _RATIO_TIE]
    return int(tied[np.argmin(basis[tied])])


def run_simplex(T, basis, n_enter, pivot_tol, opt_tol, max_iter, rule):
    """Pivot until optimal; returns ``(status, iterations)``."""
    m = T.shape[0] - 1
    degenerate_run = 0
    use_bland = rule == BLAND
    for it in range(max_iter):
        costs = T[m, :n_enter]
        if use_bland:
            candidates = np.flatnonzero(costs < -opt_tol)
            if candidates.size == 0:
                return OPTIMAL, it
            col = int(candidates[0])
        else:
            col = int(np.argmin(costs))
            if costs[col] >= -opt_tol:
                return OPTIMAL, it
        row = _leaving_row(T, basis, col, pivot_tol)
        if row < 0:
            return UNBOUNDED, it
        if T[row, -1] <= _RATIO_TIE:
            degenerate_run += 1
            # Dantzig can cycle on degenerate vertices; Bland cannot
            if degenerate_run > m:
                use_bland = True
        else:
            degenerate_run = 0
        pivot(T, basis, row, col)
    return ITERATION_LIMIT, max_iter
