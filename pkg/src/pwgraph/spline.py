"""Interpolating variational splines on a graph.

A spline of order ``t`` through data ``y`` on the vertex set ``W`` is the
signal ``Y`` with ``Y[W] = y`` that minimizes ``||(eps I + L)^{t/2} Y||``.
Writing ``A = (eps I + L)^t`` and ``S = V \\ W``, the minimizer satisfies
``(A Y)[S] = 0``, so

    Y[S] = -A[S, S]^{-1} A[S, W] y,   alpha = (A Y)[W].

That complement-block solve is the default. It runs in double precision and
is then polished by iterative refinement with residuals evaluated in extended
precision; without it, ``alpha`` loses relative accuracy whenever ``eps^t`` is
tiny, since ``(A Y)[W]`` is then a small difference of O(1) terms. The ``"gram"`` method instead
solves ``K alpha = y`` with ``K[w, w'] = E^{w'}(w)`` built from the
fundamental solutions ``E^w = A^{-1} delta_w``; the two agree but the Gram
matrix becomes numerically singular once ``t`` grows, because its
condition number behaves like ``((eps + 2) / eps)^t``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    DuplicateVertex,
    EmptyConstraintSet,
    IllConditioned,
    IndexOutOfRange,
    LengthMismatch,
    NotAnInterpolant,
    SingularOperator,
)
from .spectral import (
    SpectralDecomposition,
    power_matrix,
    sobolev_norm,
    spectral_multiplier,
    symmetric_eigh,
)

MAX_CONDITION = 1e12
REFINE_STEPS = 4
_EXT = np.longdouble


@dataclass(frozen=True, eq=False)
class SplineModel:
    constraint_set: np.ndarray
    order: float
    eps: float
    values: np.ndarray
    alpha: np.ndarray
    solution: np.ndarray
    sobolev_energy: float
    condition: float
    decomposition: SpectralDecomposition

    def residual(self) -> np.ndarray:
        """``(eps I + L)^t Y``; supported on the constraint set up to rounding of ``Y``."""
        op = _ExtendedOperator(self.decomposition, self.eps, self.order)
        return op.apply(self.solution.astype(_EXT)).astype(np.float64)


@dataclass(frozen=True, eq=False)
class FundamentalSystem:
    constraint_set: np.ndarray
    order: float
    eps: float
    columns: np.ndarray
    gram: np.ndarray
    gram_eigenvalues: np.ndarray

    @property
    def condition(self) -> float:
        return float(self.gram_eigenvalues[-1] / self.gram_eigenvalues[0])


class _ExtendedOperator:
    """``(eps I + L)^t`` applied through the spectrum in extended precision."""

    def __init__(self, d: SpectralDecomposition, eps: float, t: float):
        self.basis = d.basis.astype(_EXT)
        self.mult = spectral_multiplier(d, eps, t).astype(_EXT)

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self.basis @ (self.mult * (self.basis.T @ v))


def _constraint_set(d: SpectralDecomposition, W, y=None):
    w = np.asarray(W, dtype=np.int64).ravel()
    if w.size == 0:
        raise EmptyConstraintSet("constraint set W is empty")
    if np.unique(w).size != w.size:
        raise DuplicateVertex("constraint set W repeats a vertex")
    if w.min() < 0 or w.max() >= d.n:
        raise IndexOutOfRange(f"constraint vertex outside [0, {d.n})")
    order = np.argsort(w, kind="stable")
    if y is None:
        return w[order], None
    y = np.asarray(y, dtype=np.float64).ravel()
    if y.shape != w.shape:
        raise LengthMismatch(f"{y.size} values for {w.size} constraint vertices")
    return w[order], y[order]


def _check_operator(d: SpectralDecomposition, t: float, eps: float):
    if not t > 0:
        raise ValueError(f"spline order must be positive, got {t}")
    if eps < 0:
        raise ValueError(f"eps must be non-negative, got {eps}")
    if eps == 0 and not d.is_invertible:
        raise SingularOperator(
            "eps = 0 needs an invertible operator; the Laplacian of a finite "
            "connected graph has lambda_0 = 0, use eps > 0"
        )


def _spd_solve(mat: np.ndarray, rhs: np.ndarray, max_condition: float, what: str):
    ev, _ = symmetric_eigh(mat, vectors=False)
    cond = float(ev[-1] / ev[0]) if ev[0] > 0 else np.inf
    if not cond <= max_condition:
        raise IllConditioned(f"{what} condition {cond:.3e} exceeds {max_condition:.1e}")
    try:
        low = kernels.cholesky(mat)
    except np.linalg.LinAlgError as exc:
        raise IllConditioned(f"{what}: {exc}") from None
    return kernels.cho_solve(low, rhs), cond, low


def fundamental_system(d: SpectralDecomposition, W, t: float, eps: float) -> FundamentalSystem:
    """Columns ``E^w = (eps I + L)^{-t} delta_w`` for ``w`` in ``W`` and their Gram matrix."""
    _check_operator(d, t, eps)
    w, _ = _constraint_set(d, W)
    columns = power_matrix(d, eps, -t)[:, w]
    gram = columns[w, :]
    gram = 0.5 * (gram + gram.T)
    ev, _ = symmetric_eigh(gram, vectors=False)
    if not ev[0] > 0:
        raise IllConditioned(f"Gram matrix is not positive definite (min eigenvalue {ev[0]:.3e})")
    return FundamentalSystem(w, float(t), float(eps), columns, gram, ev)


def fit_spline(d: SpectralDecomposition, W, y, t: float, eps: float, *,
               method: str = "complement", max_condition: float = MAX_CONDITION) -> SplineModel:
    """Fit the variational spline of order ``t`` through ``y`` on ``W``.

    ``condition`` on the result is the condition number of the SPD system
    that was solved. Raises ``IllConditioned`` when it exceeds
    ``max_condition``.
    """
    _check_operator(d, t, eps)
    w, y = _constraint_set(d, W, y)
    if method == "complement":
        a = power_matrix(d, eps, t)
        mask = np.ones(d.n, dtype=bool)
        mask[w] = False
        s = np.flatnonzero(mask)
        op = _ExtendedOperator(d, eps, t)
        ext = np.zeros(d.n, dtype=_EXT)
        ext[w] = y
        cond = 1.0
        if s.size:
            z, cond, low = _spd_solve(a[np.ix_(s, s)], -(a[np.ix_(s, w)] @ y), max_condition,
                                      "complement block of (eps I + L)^t")
            ext[s] = z
            for _ in range(REFINE_STEPS):
                step = kernels.cho_solve(low, -op.apply(ext)[s].astype(np.float64))
                ext[s] += step
                if np.abs(step).max() <= np.finfo(_EXT).eps * np.abs(ext).max():
                    break
        alpha = op.apply(ext)[w].astype(np.float64)
        sol = ext.astype(np.float64)
    elif method == "gram":
        system = fundamental_system(d, w, t, eps)
        alpha, cond, _ = _spd_solve(system.gram, y, max_condition, "Gram matrix")
        sol = system.columns @ alpha
    else:
        raise ValueError(f"unknown method {method!r}")
    energy = sobolev_norm(d, eps, t, sol)
    return SplineModel(w, float(t), float(eps), y, alpha, sol, energy, cond, d)


def lagrangian_splines(d: SpectralDecomposition, W, t: float, eps: float, **kwargs) -> list[SplineModel]:
    """One spline per ``w`` in sorted ``W``, interpolating the Kronecker data at ``w``."""
    w, _ = _constraint_set(d, W)
    eye = np.eye(w.size)
    return [fit_spline(d, w, eye[j], t, eps, **kwargs) for j in range(w.size)]


def optimality_margin(m: SplineModel, g, tol: float = 1e-8) -> float:
    """Energy excess ``||g||_H^2 - ||Y||_H^2`` of a competing interpolant ``g``."""
    g = np.asarray(g, dtype=np.float64)
    if g.shape != m.solution.shape:
        raise LengthMismatch(f"competitor of shape {g.shape}, spline of shape {m.solution.shape}")
    scale = max(1.0, float(np.abs(m.values).max()))
    if np.abs(g[m.constraint_set] - m.values).max() > tol * scale:
        raise NotAnInterpolant("competitor does not match the data on W")
    return sobolev_norm(m.decomposition, m.eps, m.order, g) ** 2 - m.sobolev_energy ** 2
