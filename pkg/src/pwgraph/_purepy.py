"""Numpy fallback for the hot kernels in ``_core.pyx``.

Same algorithms as the compiled versions (Householder tridiagonalization,
implicit-shift QL, column Cholesky) with the innermost loops vectorized
instead of compiled. Results agree with the compiled kernels to rounding.
"""
import math

import numpy as np

from .errors import ConvergenceFailure

MAX_QL_ITERATIONS = 60


def tridiagonalize(a):
    """Reduce symmetric ``a`` to tridiagonal form ``Q^T a Q``.

    Returns the diagonal, the subdiagonal (``e[i]`` couples ``i`` and
    ``i+1``; the last entry is zero) and the orthogonal ``Q``.
    """
    a = np.array(a, dtype=np.float64, copy=True)
    n = a.shape[0]
    q = np.eye(n)
    for k in range(n - 2):
        x = a[k + 1:, k]
        tail = float(np.dot(x[1:], x[1:]))
        if tail == 0.0:
            continue
        norm_x = math.sqrt(x[0] * x[0] + tail)
        alpha = -norm_x if x[0] >= 0.0 else norm_x
        v = x.copy()
        v[0] -= alpha
        v /= math.sqrt(float(np.dot(v, v)))
        sub = a[k + 1:, k + 1:]
        p = sub @ v
        w = p - float(np.dot(v, p)) * v
        sub -= 2.0 * (np.outer(v, w) + np.outer(w, v))
        a[k + 1:, k] = 0.0
        a[k, k + 1:] = 0.0
        a[k + 1, k] = alpha
        a[k, k + 1] = alpha
        qs = q[:, k + 1:]
        qs -= 2.0 * np.outer(qs @ v, v)
    d = np.diag(a).copy()
    e = np.zeros(n)
    if n > 1:
        e[:-1] = np.diag(a, 1)
    return d, e, q


def tridiagonal_ql(d, e, z=None):
    """Implicit-shift QL on a symmetric tridiagonal matrix, in place.

    ``z`` (if given) is rotated along so that on exit its columns are the
    eigenvectors of the original matrix. Eigenvalues are left unsorted in
    ``d``.
    """
    n = d.shape[0]
    if n == 0:
        return d, z
    e[n - 1] = 0.0
    shift_total = 0.0
    tst1 = 0.0
    macheps = np.finfo(np.float64).eps
    for l in range(n):
        tst1 = max(tst1, abs(d[l]) + abs(e[l]))
        m = l
        while m < n - 1 and abs(e[m]) > macheps * tst1:
            m += 1
        if m > l:
            it = 0
            while True:
                it += 1
                if it > MAX_QL_ITERATIONS:
                    raise ConvergenceFailure(
                        f"QL iteration did not converge for eigenvalue {l}"
                    )
                g = d[l]
                p = (d[l + 1] - g) / (2.0 * e[l])
                r = math.hypot(p, 1.0)
                if p < 0:
                    r = -r
                d[l] = e[l] / (p + r)
                d[l + 1] = e[l] * (p + r)
                dl1 = d[l + 1]
                h = g - d[l]
                d[l + 2:] -= h
                shift_total += h

                p = d[m]
                c = c2 = c3 = 1.0
                el1 = e[l + 1]
                s = s2 = 0.0
                for i in range(m - 1, l - 1, -1):
                    c3 = c2
                    c2 = c
                    s2 = s
                    g = c * e[i]
                    h = c * p
                    r = math.hypot(p, e[i])
                    e[i + 1] = s * r
                    s = e[i] / r
                    c = p / r
                    p = c * d[i] - s * g
                    d[i + 1] = h + s * (c * g + s * d[i])
                    if z is not None:
                        zi = z[:, i].copy()
                        zi1 = z[:, i + 1]
                        z[:, i] = c * zi - s * zi1
                        z[:, i + 1] = s * zi + c * zi1
                p = -s * s2 * c3 * el1 * e[l] / dl1
                e[l] = s * p
                d[l] = c * p
                if abs(e[l]) <= macheps * tst1:
                    break
        d[l] += shift_total
        e[l] = 0.0
    return d, z


def symmetric_eigh(a, vectors=True):
    d, e, q = tridiagonalize(a)
    d, z = tridiagonal_ql(d, e, q if vectors else None)
    return d, z


def cholesky(a):
    a = np.asarray(a, dtype=np.float64)
    n = a.shape[0]
    low = np.zeros_like(a)
    for j in range(n):
        row = low[j, :j]
        pivot = a[j, j] - float(np.dot(row, row))
        if not pivot > 0.0:
            raise np.linalg.LinAlgError(
                f"matrix is not positive definite (pivot {j} = {pivot:.3e})"
            )
        ljj = math.sqrt(pivot)
        low[j, j] = ljj
        if j + 1 < n:
            low[j + 1:, j] = (a[j + 1:, j] - low[j + 1:, :j] @ row) / ljj
    return low


def cho_solve(low, b):
    b = np.array(b, dtype=np.float64, copy=True)
    n = low.shape[0]
    y = b
    for i in range(n):
        y[i] = (y[i] - low[i, :i] @ y[:i]) / low[i, i]
    for i in range(n - 1, -1, -1):
        y[i] = (y[i] - low[i + 1:, i] @ y[i + 1:]) / low[i, i]
    return y


def laplacian_apply(indptr, indices, weights, f):
    f = np.asarray(f, dtype=np.float64)
    n = f.shape[0]
    rows = np.repeat(np.arange(n), np.diff(indptr))
    return f - np.bincount(rows, weights=weights * f[indices], minlength=n)
