# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: dense symmetric eigensolver, Cholesky, Laplacian stencil.

Mirrors ``_purepy`` function for function. The eigensolver is the classic
Householder reduction followed by implicit-shift QL with eigenvector
accumulation.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt, hypot

from .errors import ConvergenceFailure

cnp.import_array()

cdef int MAX_QL_ITERATIONS = 60


cdef void _tred2(double[:, ::1] V, double[::1] d, double[::1] e, Py_ssize_t n) noexcept nogil:
    # On entry V holds the symmetric matrix; on exit V is orthogonal, d the
    # diagonal and e the subdiagonal with e[i] coupling i-1 and i.
    cdef Py_ssize_t i, j, k
    cdef double scale, h, f, g, hh
    for j in range(n):
        d[j] = V[n - 1, j]
    for i in range(n - 1, 0, -1):
        scale = 0.0
        h = 0.0
        for k in range(i):
            scale += fabs(d[k])
        if scale == 0.0:
            e[i] = d[i - 1]
            for j in range(i):
                d[j] = V[i - 1, j]
                V[i, j] = 0.0
                V[j, i] = 0.0
        else:
            for k in range(i):
                d[k] /= scale
                h += d[k] * d[k]
            f = d[i - 1]
            g = sqrt(h)
            if f > 0:
                g = -g
            e[i] = scale * g
            h = h - f * g
            d[i - 1] = f - g
            for j in range(i):
                e[j] = 0.0
            for j in range(i):
                f = d[j]
                V[j, i] = f
                g = e[j] + V[j, j] * f
                for k in range(j + 1, i):
                    g += V[k, j] * d[k]
                    e[k] += V[k, j] * f
                e[j] = g
            f = 0.0
            for j in range(i):
                e[j] /= h
                f += e[j] * d[j]
            hh = f / (h + h)
            for j in range(i):
                e[j] -= hh * d[j]
            for j in range(i):
                f = d[j]
                g = e[j]
                for k in range(j, i):
                    V[k, j] -= f * e[k] + g * d[k]
                d[j] = V[i - 1, j]
                V[i, j] = 0.0
        d[i] = h
    for i in range(n - 1):
        V[n - 1, i] = V[i, i]
        V[i, i] = 1.0
        h = d[i + 1]
        if h != 0.0:
            for k in range(i + 1):
                d[k] = V[k, i + 1] / h
            for j in range(i + 1):
                g = 0.0
                for k in range(i + 1):
                    g += V[k, i + 1] * V[k, j]
                for k in range(i + 1):
                    V[k, j] -= g * d[k]
        for k in range(i + 1):
            V[k, i + 1] = 0.0
    for j in range(n):
        d[j] = V[n - 1, j]
        V[n - 1, j] = 0.0
    V[n - 1, n - 1] = 1.0
    e[0] = 0.0


cdef int _tql2(double[:, ::1] V, double[::1] d, double[::1] e, Py_ssize_t n,
               bint vectors) noexcept nogil:
    # Returns -1 on success, otherwise the index that failed to converge.
    cdef Py_ssize_t i, k, l, m
    cdef int it
    cdef double f = 0.0, tst1 = 0.0, eps = 2.220446049250313e-16
    cdef double g, p, r, dl1, h, c, c2, c3, el1, s, s2
    for i in range(1, n):
        e[i - 1] = e[i]
    e[n - 1] = 0.0
    for l in range(n):
        tst1 = max(tst1, fabs(d[l]) + fabs(e[l]))
        m = l
        while m < n - 1 and fabs(e[m]) > eps * tst1:
            m += 1
        if m > l:
            it = 0
            while True:
                it += 1
                if it > MAX_QL_ITERATIONS:
                    return <int>l
                g = d[l]
                p = (d[l + 1] - g) / (2.0 * e[l])
                r = hypot(p, 1.0)
                if p < 0:
                    r = -r
                d[l] = e[l] / (p + r)
                d[l + 1] = e[l] * (p + r)
                dl1 = d[l + 1]
                h = g - d[l]
                for i in range(l + 2, n):
                    d[i] -= h
                f += h
                p = d[m]
                c = 1.0
                c2 = 1.0
                c3 = 1.0
                el1 = e[l + 1]
                s = 0.0
                s2 = 0.0
                i = m - 1
                while i >= l:
                    c3 = c2
                    c2 = c
                    s2 = s
                    g = c * e[i]
                    h = c * p
                    r = hypot(p, e[i])
                    e[i + 1] = s * r
                    s = e[i] / r
                    c = p / r
                    p = c * d[i] - s * g
                    d[i + 1] = h + s * (c * g + s * d[i])
                    if vectors:
                        for k in range(n):
                            h = V[k, i + 1]
                            V[k, i + 1] = s * V[k, i] + c * h
                            V[k, i] = c * V[k, i] - s * h
                    i -= 1
                p = -s * s2 * c3 * el1 * e[l] / dl1
                e[l] = s * p
                d[l] = c * p
                if fabs(e[l]) <= eps * tst1:
                    break
        d[l] = d[l] + f
        e[l] = 0.0
    return -1


def symmetric_eigh(a, bint vectors=True):
    """Eigenvalues (unsorted) and, if requested, eigenvectors as columns."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] V = np.array(a, dtype=np.float64, order="C", copy=True)
    cdef Py_ssize_t n = V.shape[0]
    d_arr = np.zeros(n)
    e_arr = np.zeros(n)
    cdef double[:, ::1] Vv = V
    cdef double[::1] d = d_arr
    cdef double[::1] e = e_arr
    cdef int failed
    if n == 0:
        return d_arr, (V if vectors else None)
    with nogil:
        _tred2(Vv, d, e, n)
        failed = _tql2(Vv, d, e, n, vectors)
    if failed >= 0:
        raise ConvergenceFailure(f"QL iteration did not converge for eigenvalue {failed}")
    return d_arr, (V if vectors else None)


def cholesky(a):
    cdef const double[:, ::1] A = np.ascontiguousarray(a, dtype=np.float64)
    cdef Py_ssize_t n = A.shape[0]
    low_arr = np.zeros((n, n))
    cdef double[:, ::1] L = low_arr
    cdef Py_ssize_t i, j, k
    cdef double s
    cdef Py_ssize_t bad = -1
    cdef double bad_pivot = 0.0
    with nogil:
        for j in range(n):
            s = A[j, j]
            for k in range(j):
                s -= L[j, k] * L[j, k]
            if not s > 0.0:
                bad = j
                bad_pivot = s
                break
            L[j, j] = sqrt(s)
            for i in range(j + 1, n):
                s = A[i, j]
                for k in range(j):
                    s -= L[i, k] * L[j, k]
                L[i, j] = s / L[j, j]
    if bad >= 0:
        raise np.linalg.LinAlgError(
            f"matrix is not positive definite (pivot {bad} = {bad_pivot:.3e})"
        )
    return low_arr


def cho_solve(low, b):
    cdef const double[:, ::1] L = np.ascontiguousarray(low, dtype=np.float64)
    b_arr = np.array(b, dtype=np.float64, copy=True)
    squeeze = b_arr.ndim == 1
    if squeeze:
        b_arr = b_arr[:, None]
    b_arr = np.ascontiguousarray(b_arr)
    cdef double[:, ::1] Y = b_arr
    cdef Py_ssize_t n = L.shape[0], ncol = Y.shape[1]
    cdef Py_ssize_t i, k, c
    cdef double s
    with nogil:
        for c in range(ncol):
            for i in range(n):
                s = Y[i, c]
                for k in range(i):
                    s -= L[i, k] * Y[k, c]
                Y[i, c] = s / L[i, i]
            for i in range(n - 1, -1, -1):
                s = Y[i, c]
                for k in range(i + 1, n):
                    s -= L[k, i] * Y[k, c]
                Y[i, c] = s / L[i, i]
    return b_arr[:, 0] if squeeze else b_arr


def laplacian_apply(indptr, indices, weights, f):
    cdef const cnp.int64_t[::1] ptr = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const cnp.int64_t[::1] idx = np.ascontiguousarray(indices, dtype=np.int64)
    cdef const double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef const double[::1] x = np.ascontiguousarray(f, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0]
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t v, j
    cdef double s
    with nogil:
        for v in range(n):
            s = x[v]
            for j in range(ptr[v], ptr[v + 1]):
                s -= w[j] * x[idx[j]]
            out[v] = s
    return out_arr
