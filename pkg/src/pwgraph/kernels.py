"""Hot-kernel dispatch.

The compiled ``_core`` extension is used when it imports; otherwise the numpy
fallback in ``_purepy`` is used. Setting ``PWGRAPH_BACKEND=python`` forces
the fallback. Both expose the same four functions:

``symmetric_eigh(a, vectors=True)``
    unsorted eigenvalues and eigenvector columns of a symmetric matrix
``cholesky(a)`` / ``cho_solve(low, b)``
    lower Cholesky factor and the matching two-triangle solve; ``cholesky``
    raises ``numpy.linalg.LinAlgError`` on a non-positive pivot
``laplacian_apply(indptr, indices, weights, f)``
    ``f[v] - sum_j weights[j] * f[indices[j]]`` over the CSR row of ``v``
"""
import os

from . import _purepy

try:
    from . import _core
except ImportError:  # extension not built
    _core = None

BACKENDS = {"python": _purepy}
if _core is not None:
    BACKENDS["cython"] = _core


def _default_backend():
    forced = os.environ.get("PWGRAPH_BACKEND", "").strip().lower()
    if forced:
        if forced not in BACKENDS:
            raise ImportError(
                f"PWGRAPH_BACKEND={forced!r} is not available "
                f"(have: {', '.join(sorted(BACKENDS))})"
            )
        return forced
    return "cython" if "cython" in BACKENDS else "python"


BACKEND = _default_backend()
_impl = BACKENDS[BACKEND]


def get(name=None):
    """Return the kernel module for ``name`` (default: the active backend)."""
    if name is None:
        return _impl
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown or unavailable backend {name!r}") from None


def symmetric_eigh(a, vectors=True):
    return _impl.symmetric_eigh(a, vectors)


def cholesky(a):
    return _impl.cholesky(a)


def cho_solve(low, b):
    return _impl.cho_solve(low, b)


def laplacian_apply(indptr, indices, weights, f):
    return _impl.laplacian_apply(indptr, indices, weights, f)
