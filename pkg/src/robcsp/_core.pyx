# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled dense kernels: cyclic Jacobi eigensolver and Cholesky factorization.

Mirrors ``_pycore`` exactly; the two must stay interchangeable.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()


def jacobi_eigh(a_in, double tol=1e-15, int max_sweeps=100):
    """Cyclic Jacobi eigendecomposition of a symmetric matrix.

    Returns unsorted eigenvalues, eigenvectors (columns) and the sweep count.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=2] a_arr = np.array(a_in, dtype=np.float64, order="C", copy=True)
    cdef Py_ssize_t n = a_arr.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] v_arr = np.eye(n, dtype=np.float64)
    cdef double[:, ::1] a = a_arr
    cdef double[:, ::1] v = v_arr
    cdef Py_ssize_t p, q, k
    cdef int sweep = 0
    cdef double off, scale, apq, theta, t, c, s, tau, akp, akq, app, aqq

    scale = 0.0
    for p in range(n):
        for q in range(n):
            scale += a[p, q] * a[p, q]
    scale = sqrt(scale)
    if scale == 0.0:
        return np.zeros(n), v_arr, 0

    while sweep < max_sweeps:
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += a[p, q] * a[p, q]
        off = sqrt(2.0 * off)
        if off <= tol * scale:
            break
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                theta = (aqq - app) / (2.0 * apq)
                if theta >= 0.0:
                    t = 1.0 / (theta + sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + sqrt(1.0 + theta * theta))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                tau = s / (1.0 + c)
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    if k != p and k != q:
                        akp = a[k, p]
                        akq = a[k, q]
                        a[k, p] = akp - s * (akq + tau * akp)
                        a[k, q] = akq + s * (akp - tau * akq)
                        a[p, k] = a[k, p]
                        a[q, k] = a[k, q]
                for k in range(n):
                    akp = v[k, p]
                    akq = v[k, q]
                    v[k, p] = akp - s * (akq + tau * akp)
                    v[k, q] = akq + s * (akp - tau * akq)

    w = np.empty(n, dtype=np.float64)
    for p in range(n):
        w[p] = a[p, p]
    return w, v_arr, sweep


def cholesky(a_in, double eps=1e-13):
    """Lower Cholesky factor, or ``(None, j)`` when pivot ``j`` is too small."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] a_arr = np.ascontiguousarray(a_in, dtype=np.float64)
    cdef Py_ssize_t n = a_arr.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] l_arr = np.zeros((n, n), dtype=np.float64)
    cdef double[:, ::1] a = a_arr
    cdef double[:, ::1] l = l_arr
    cdef Py_ssize_t i, j, k
    cdef double acc, dmax = 0.0, floor

    for i in range(n):
        if a[i, i] > dmax:
            dmax = a[i, i]
    floor = eps * dmax
    for j in range(n):
        acc = a[j, j]
        for k in range(j):
            acc -= l[j, k] * l[j, k]
        if acc <= floor or acc <= 0.0:
            return None, j
        l[j, j] = sqrt(acc)
        for i in range(j + 1, n):
            acc = a[i, j]
            for k in range(j):
                acc -= l[i, k] * l[j, k]
            l[i, j] = acc / l[j, j]
    return l_arr, -1
