# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled sparse kernels for the power-iteration hot loop.

Operators are held column-wise (CSC): column ``j`` owns the entries
``rows[k], data[k]`` for ``k`` in ``indptr[j]..indptr[j+1]``.  Real
float64 only; the complex path stays on the numpy fallback.
"""

from libc.math cimport sqrt


def csc_matvec(Py_ssize_t[::1] indptr, Py_ssize_t[::1] rows,
               double[::1] data, double[::1] x, double[::1] out):
    """out = A @ x for a CSC matrix A."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t j, k
    cdef double xj
    out[:] = 0.0
    for j in range(n):
        xj = x[j]
        if xj == 0.0:
            continue
        for k in range(indptr[j], indptr[j + 1]):
            out[rows[k]] += data[k] * xj


def csc_rmatvec(Py_ssize_t[::1] indptr, Py_ssize_t[::1] rows,
                double[::1] data, double[::1] y, double[::1] out):
    """out = A.T @ y for a CSC matrix A (real entries, so adjoint = transpose)."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t j, k
    cdef double acc
    for j in range(n):
        acc = 0.0
        for k in range(indptr[j], indptr[j + 1]):
            acc += data[k] * y[rows[k]]
        out[j] = acc


def normest_step(Py_ssize_t[::1] indptr, Py_ssize_t[::1] rows,
                 double[::1] data, double[::1] x,
                 double[::1] y, double[::1] z):
    """One power-iteration step on A*A: y = A x, z = A.T y.

    Returns ||y||^2, the Rayleigh quotient of A*A at the unit vector x.
    """
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t j, k
    cdef double xj, acc, nu = 0.0
    y[:] = 0.0
    for j in range(n):
        xj = x[j]
        if xj == 0.0:
            continue
        for k in range(indptr[j], indptr[j + 1]):
            y[rows[k]] += data[k] * xj
    for j in range(y.shape[0]):
        nu += y[j] * y[j]
    for j in range(n):
        acc = 0.0
        for k in range(indptr[j], indptr[j + 1]):
            acc += data[k] * y[rows[k]]
        z[j] = acc
    return nu
