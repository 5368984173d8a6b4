# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled pivoting kernel; mirrors ``_simplex_py`` exactly."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef enum:
    C_OPTIMAL = 0
    C_UNBOUNDED = 1
    C_ITERATION_LIMIT = 2
    C_BLAND = 0

OPTIMAL = C_OPTIMAL
UNBOUNDED = C_UNBOUNDED
ITERATION_LIMIT = C_ITERATION_LIMIT
BLAND = 0
DANTZIG = 1

cdef double _RATIO_TIE = 1e-12


cdef void _pivot(double[:, ::1] T, cnp.int64_t[::1] basis, Py_ssize_t row, Py_ssize_t col) noexcept nogil:
    cdef Py_ssize_t nrow = T.shape[0], ncol = T.shape[1]
    cdef Py_ssize_t r, j
    cdef double piv = T[row, col]
    cdef double f
    # divide rather than multiply by a reciprocal so rounding matches numpy
    for j in range(ncol):
        T[row, j] /= piv
    for r in range(nrow):
        if r == row:
            continue
        f = T[r, col]
        if f != 0.0:
            for j in range(ncol):
                T[r, j] -= f * T[row, j]
            T[r, col] = 0.0
    basis[row] = col


cdef Py_ssize_t _leaving_row(double[:, ::1] T, cnp.int64_t[::1] basis, Py_ssize_t col,
                             double pivot_tol) noexcept nogil:
    cdef Py_ssize_t m = T.shape[0] - 1, rhs = T.shape[1] - 1
    cdef Py_ssize_t i, best_row = -1
    cdef double ratio, best = 0.0
    for i in range(m):
        if T[i, col] > pivot_tol:
            ratio = T[i, rhs] / T[i, col]
            if best_row < 0 or ratio < best:
                best = ratio
                best_row = i
    if best_row < 0:
        return -1
    # Bland tie-break: smallest basic column among the (near-)minimal ratios
    best_row = -1
    for i in range(m):
        if T[i, col] > pivot_tol and T[i, rhs] / T[i, col] <= best + _RATIO_TIE:
            if best_row < 0 or basis[i] < basis[best_row]:
                best_row = i
    return best_row


def pivot(double[:, ::1] T, cnp.int64_t[::1] basis, Py_ssize_t row, Py_ssize_t col):
    with nogil:
        _pivot(T, basis, row, col)


def run_simplex(double[:, ::1] T, cnp.int64_t[::1] basis, Py_ssize_t n_enter,
                double pivot_tol, double opt_tol, Py_ssize_t max_iter, int rule):
    """Pivot until optimal; returns ``(status, iterations)``."""
    cdef Py_ssize_t m = T.shape[0] - 1, rhs = T.shape[1] - 1
    cdef Py_ssize_t it, j, col, row
    cdef Py_ssize_t degenerate_run = 0
    cdef bint use_bland = rule == C_BLAND
    cdef double best
    cdef int status = C_ITERATION_LIMIT
    cdef Py_ssize_t iterations = max_iter
    with nogil:
        for it in range(max_iter):
            col = -1
            if use_bland:
                for j in range(n_enter):
                    if T[m, j] < -opt_tol:
                        col = j
                        break
            else:
                best = -opt_tol
                for j in range(n_enter):
                    if T[m, j] < best:
                        best = T[m, j]
                        col = j
            if col < 0:
                status = C_OPTIMAL
                iterations = it
                break
            row = _leaving_row(T, basis, col, pivot_tol)
            if row < 0:
                status = C_UNBOUNDED
                iterations = it
                break
            if T[row, rhs] <= _RATIO_TIE:
                degenerate_run += 1
                # Dantzig can cycle on degenerate vertices; Bland cannot
                if degenerate_run > m:
                    use_bland = True
            else:
                degenerate_run = 0
            _pivot(T, basis, row, col)
    return status, iterations
