"""Eigendecomposition of the Laplacian and the spectral calculus built on it.

The decomposition plays the role of the Fourier transform on the graph:
``fourier(d, f) = U^T f`` and every function of the operator (powers,
band projections) is applied as ``U diag(phi(lambda)) U^T``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import LengthMismatch, SingularPower, ZeroSignal
from .graph import DENSE_CAP, Graph, laplacian_matrix

ZERO_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Sorted eigenvalues and orthonormal eigenvector columns of an operator.

    ``matrix`` is the symmetric operator that was decomposed; for a graph this
    is its normalized Laplacian. ``tolerance`` is the largest eigenpair
    residual ``||M u_j - lambda_j u_j||`` measured after the solve.
    """

    eigenvalues: np.ndarray
    basis: np.ndarray
    graph: Graph
    matrix: np.ndarray
    tolerance: float

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def omega_min(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def omega_max(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def is_invertible(self) -> bool:
        return self.omega_min > ZERO_TOL

    def shifted(self, c: float) -> "SpectralDecomposition":
        """Decomposition of ``M + c I``; same eigenvectors.

        Gives an invertible stand-in operator for exercising the ``eps = 0``
        branches, which no Laplacian of a finite connected graph reaches.
        """
        return SpectralDecomposition(
            _readonly(self.eigenvalues + c),
            self.basis,
            self.graph,
            _readonly(self.matrix + c * np.eye(self.n)),
            self.tolerance,
        )

    def to_json(self) -> str:
        return json.dumps(
            {"eigenvalues": self.eigenvalues.tolist(), "basis": self.basis.tolist()}
        )


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


def symmetric_eigh(a: np.ndarray, vectors: bool = True):
    """Sorted eigenpairs of a dense symmetric matrix with the sign convention.

    Eigenvalues ascend; each eigenvector column is flipped so that its first
    entry of magnitude above ``1e-10`` is positive.
    """
    a = np.asarray(a, dtype=np.float64)
    w, v = kernels.symmetric_eigh(a, vectors)
    order = np.argsort(w, kind="stable")
    w = w[order]
    if not vectors:
        return w, None
    v = v[:, order]
    for j in range(v.shape[1]):
        nz = np.flatnonzero(np.abs(v[:, j]) > 1e-10)
        if nz.size and v[nz[0], j] < 0:
            v[:, j] = -v[:, j]
    return w, v


def decompose(g: Graph, cap: int = DENSE_CAP) -> SpectralDecomposition:
    """Full eigendecomposition of the normalized Laplacian of ``g``.

    Raises ``TooLarge`` above ``cap`` vertices and ``ConvergenceFailure`` if
    the QL sweep runs out of iterations.
    """
    mat = laplacian_matrix(g, cap)
    w, u = symmetric_eigh(mat)
    w[np.abs(w) <= ZERO_TOL] = 0.0
    residual = np.linalg.norm(mat @ u - u * w, axis=0).max()
    return SpectralDecomposition(
        _readonly(w), _readonly(u), g, _readonly(mat), float(residual)
    )


def _check(d: SpectralDecomposition, f) -> np.ndarray:
    f = np.asarray(f, dtype=np.float64)
    if f.shape[:1] != (d.n,):
        raise LengthMismatch(f"vector of shape {f.shape} against a spectrum of size {d.n}")
    return f


def fourier(d: SpectralDecomposition, f) -> np.ndarray:
    return d.basis.T @ _check(d, f)


def inverse_fourier(d: SpectralDecomposition, c) -> np.ndarray:
    return d.basis @ _check(d, c)


def spectral_multiplier(d: SpectralDecomposition, eps: float, t: float) -> np.ndarray:
    """The diagonal ``(eps + lambda_j)^t``."""
    base = eps + d.eigenvalues
    if t < 0 and base[0] <= ZERO_TOL:
        raise SingularPower(
            f"(eps I + L)^{t} needs eps + lambda_0 > {ZERO_TOL}; got {base[0]:.3e}"
        )
    if t == 0:
        return np.ones_like(base)
    return np.power(np.maximum(base, 0.0), t)


def operator_power(d: SpectralDecomposition, eps: float, t: float, f) -> np.ndarray:
    """``(eps I + L)^t f`` through the spectrum; ``f`` may be a matrix of columns."""
    f = _check(d, f)
    mult = spectral_multiplier(d, eps, t)
    coeffs = d.basis.T @ f
    if coeffs.ndim == 1:
        return d.basis @ (mult * coeffs)
    return d.basis @ (mult[:, None] * coeffs)


def power_matrix(d: SpectralDecomposition, eps: float, t: float) -> np.ndarray:
    """Dense symmetric ``(eps I + L)^t``."""
    mult = spectral_multiplier(d, eps, t)
    mat = (d.basis * mult) @ d.basis.T
    return 0.5 * (mat + mat.T)


def sobolev_norm(d: SpectralDecomposition, eps: float, t: float, f) -> float:
    """``||(eps I + L)^{t/2} f||``, evaluated on Fourier coefficients."""
    c = fourier(d, f)
    mult = spectral_multiplier(d, eps, t / 2.0)
    return float(np.linalg.norm(mult * c))


def band_mask(d: SpectralDecomposition, omega: float) -> np.ndarray:
    return d.eigenvalues <= omega


def pw_project(d: SpectralDecomposition, omega: float, f) -> np.ndarray:
    """Orthogonal projection onto the span of eigenvectors with eigenvalue <= omega."""
    c = fourier(d, f)
    c[~band_mask(d, omega)] = 0.0
    return d.basis @ c


def bernstein_ratio(d: SpectralDecomposition, f, s: float) -> float:
    """``||L^s f|| / ||f||``."""
    c = fourier(d, f)
    norm = np.linalg.norm(c)
    if norm == 0.0:
        raise ZeroSignal("Bernstein ratio of the zero signal")
    return float(np.linalg.norm(np.power(d.eigenvalues, s) * c) / norm)


def min_bandwidth(d: SpectralDecomposition, f, tol: float = 1e-10) -> float:
    """Largest eigenvalue carrying a coefficient above ``tol * ||f||``."""
    c = fourier(d, f)
    norm = np.linalg.norm(c)
    if norm == 0.0:
        raise ZeroSignal("bandwidth of the zero signal is undefined")
    support = np.flatnonzero(np.abs(c) > tol * norm)
    return float(d.eigenvalues[support].max())


def eigenspace_projector(d: SpectralDecomposition, j: int, tol: float = 1e-8) -> np.ndarray:
    """Projector onto the whole eigenspace containing eigenvalue index ``j``."""
    cols = np.flatnonzero(np.abs(d.eigenvalues - d.eigenvalues[j]) <= tol)
    u = d.basis[:, cols]
    return u @ u.T
