"""Poincare constants of vertex sets and uniqueness sets for band-limited signals.

``Lambda(S)`` is the smallest constant with ``||phi|| <= Lambda ||L phi||``
for every ``phi`` supported on ``S``. It equals ``lambda_min(Q_S)^{-1/2}``
where ``Q_S`` is the ``S x S`` block of ``L^2``. When ``Lambda(S) omega < 1``
the complement of ``S`` determines every signal of bandwidth ``omega``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import (
    EmptySet,
    IndexOutOfRange,
    InvalidLambda,
    InvalidSize,
    NoFiniteConstant,
    OutOfRange,
    OverlappingClosures,
    PreconditionViolated,
)
from .graph import Graph
from .spectral import ZERO_TOL, SpectralDecomposition, band_mask, symmetric_eigh


@dataclass(frozen=True, eq=False)
class VertexSet:
    members: tuple[int, ...]
    boundary: tuple[int, ...]
    n: int

    @property
    def closure(self) -> tuple[int, ...]:
        return tuple(sorted(self.members + self.boundary))

    def complement(self) -> tuple[int, ...]:
        inside = set(self.members)
        return tuple(v for v in range(self.n) if v not in inside)

    def __len__(self):
        return len(self.members)


def vertex_set(g: Graph, members: Sequence[int]) -> VertexSet:
    """Members plus their graph-neighbourhood boundary ``bS``."""
    mem = sorted(set(int(v) for v in members))
    if mem and (mem[0] < 0 or mem[-1] >= g.vertex_count):
        raise IndexOutOfRange(f"vertex outside [0, {g.vertex_count})")
    inside = set(mem)
    bnd = sorted({u for v in mem for u in g.adjacency[v] if u not in inside})
    return VertexSet(tuple(mem), tuple(bnd), g.vertex_count)


def segment(g: Graph, length: int, start: int = 0) -> VertexSet:
    """``length`` successive indices from ``start``, wrapping modulo ``n``."""
    if length < 1:
        raise InvalidSize("segment length must be >= 1")
    n = g.vertex_count
    if length > n:
        raise InvalidSize(f"segment of {length} on {n} vertices")
    return vertex_set(g, [(start + i) % n for i in range(length)])


def solid(g: Graph, sizes: Sequence[int], corner: Sequence[int]) -> VertexSet:
    """Rectangular block of a torus, ``sizes[i]`` cells along axis ``i`` from ``corner``."""
    if g.shape is None or len(g.shape) != len(sizes) or len(corner) != len(sizes):
        raise InvalidSize("solid dimensions must match the torus shape")
    if any(s < 1 for s in sizes):
        raise InvalidSize("solid sizes must be >= 1")
    axes = [[(c + i) % dim for i in range(s)] for s, c, dim in zip(sizes, corner, g.shape)]
    grid = np.array(np.meshgrid(*axes, indexing="ij")).reshape(len(sizes), -1)
    members = np.ravel_multi_index(tuple(grid), g.shape)
    return vertex_set(g, members.tolist())


class LambdaMethod(str, Enum):
    BRUTE_FORCE = "BruteForce"
    SEGMENT_FORMULA = "SegmentFormula"
    UNION_COMPOSITION = "UnionComposition"


@dataclass(frozen=True, eq=False)
class LambdaReport:
    vertex_set: VertexSet
    lambda_exact: float
    uniqueness_threshold: float
    closed_form_bound: float | None
    method: LambdaMethod
    rectangular_estimate: float | None = None

    def as_dict(self) -> dict:
        return {
            "members": list(self.vertex_set.members),
            "lambda_exact": self.lambda_exact,
            "uniqueness_threshold": self.uniqueness_threshold,
            "closed_form_bound": self.closed_form_bound,
            "rectangular_estimate": self.rectangular_estimate,
            "method": self.method.value,
        }


def _members(S) -> np.ndarray:
    mem = S.members if isinstance(S, VertexSet) else S
    return np.asarray(sorted(set(int(v) for v in mem)), dtype=np.int64)


def restricted_form(d: SpectralDecomposition, S, eps: float = 0.0) -> np.ndarray:
    """``Q_S``: the ``S x S`` block of ``(eps I + M)^2``."""
    s = _members(S)
    a = d.matrix + eps * np.eye(d.n) if eps else d.matrix
    cols = a[:, s]
    return cols.T @ cols


def poincare_minimizer(d: SpectralDecomposition, S, eps: float = 0.0):
    """``(Lambda, phi)`` with ``phi`` a unit signal on ``S`` attaining equality."""
    s = _members(S)
    if s.size == 0:
        raise EmptySet("Poincare constant of the empty set")
    w, v = symmetric_eigh(restricted_form(d, s, eps))
    if not w[0] > ZERO_TOL:
        raise NoFiniteConstant(
            f"smallest eigenvalue of the restricted form is {w[0]:.3e}; "
            "the set carries a kernel vector of the operator"
        )
    phi = np.zeros(d.n)
    phi[s] = v[:, 0]
    return 1.0 / math.sqrt(w[0]), phi


def poincare_constant(d: SpectralDecomposition, S, eps: float = 0.0) -> float:
    """Exact ``Lambda(S)`` for ``||phi|| <= Lambda ||(eps I + L) phi||`` on ``S``."""
    return poincare_minimizer(d, S, eps)[0]


def segment_bound(N: int) -> float:
    """Closed-form constant ``1 / (2 sin^2(pi / (2N + 2)))`` for N successive vertices of a line."""
    if int(N) != N or N < 1:
        raise InvalidSize(f"segment length must be an integer >= 1, got {N}")
    return 0.5 / math.sin(math.pi / (2 * N + 2)) ** 2


def rectangular_bound(dims: Sequence[int]) -> float:
    """``1 / (4 min_i sin(pi / (2 N_i + 2)))``, the printed box estimate.

    Unlike :func:`segment_bound` this is not a certified upper bound: for a
    single vertex of the square lattice it gives ``sqrt(2)/4`` while the exact
    constant is ``2/sqrt(5)``. Reported alongside brute force, never used to
    certify anything.
    """
    if not dims or any(int(x) != x or x < 1 for x in dims):
        raise InvalidSize(f"box dimensions must be integers >= 1, got {list(dims)}")
    return 1.0 / (4.0 * min(math.sin(math.pi / (2 * x + 2)) for x in dims))


def bound_discrepancy(N: int) -> dict:
    """Both closed forms for a length-N segment and their ratio."""
    seg = segment_bound(N)
    rect = rectangular_bound([N])
    return {"segment_bound": seg, "rectangular_bound": rect, "ratio": seg / rect}


def check_disjoint_closures(parts: Sequence[VertexSet]) -> None:
    seen: dict[int, int] = {}
    for j, part in enumerate(parts):
        for v in part.closure:
            if v in seen:
                raise OverlappingClosures(f"closures of parts {seen[v]} and {j} share vertex {v}")
            seen[v] = j


def union_lambda(g: Graph, parts: Sequence[VertexSet], lambdas: Sequence[float]) -> LambdaReport:
    """Union of parts with pairwise disjoint closures has constant ``max_j Lambda_j``."""
    if not parts:
        raise EmptySet("no parts given")
    if len(parts) != len(lambdas):
        raise InvalidSize(f"{len(parts)} parts but {len(lambdas)} constants")
    if any(not lam > 0 for lam in lambdas):
        raise InvalidLambda("every part constant must be positive")
    check_disjoint_closures(parts)
    union = vertex_set(g, [v for p in parts for v in p.members])
    lam = float(max(lambdas))
    return LambdaReport(union, lam, 1.0 / lam, None, LambdaMethod.UNION_COMPOSITION)


def lambda_report(d: SpectralDecomposition, S: VertexSet, *,
                  segment_lengths: Sequence[int] | None = None,
                  box: Sequence[int] | None = None) -> LambdaReport:
    """Brute-force constant plus whichever closed form the shape admits.

    ``segment_lengths`` lists the lengths of the disjoint segments making up
    ``S``; the closed form for the union is the largest segment bound.
    """
    lam = poincare_constant(d, S)
    closed = None
    if segment_lengths:
        closed = max(segment_bound(N) for N in segment_lengths)
    rect = rectangular_bound(box) if box else None
    return LambdaReport(S, lam, 1.0 / lam, closed, LambdaMethod.BRUTE_FORCE, rect)


def uniqueness_threshold(lam: float) -> float:
    if not lam > 0 or not math.isfinite(lam):
        raise InvalidLambda(f"Poincare constant must be positive and finite, got {lam}")
    return 1.0 / lam


def omega_star(g: Graph) -> float:
    """``sqrt(1 + 1/d(G))``."""
    return math.sqrt(1.0 + 1.0 / g.max_degree)


@dataclass(frozen=True)
class UniquenessResult:
    unique: bool
    margin: float
    band_dimension: int


def verify_uniqueness(d: SpectralDecomposition, U, omega: float, tol: float = 1e-8) -> UniquenessResult:
    """Does sampling on ``U`` determine every signal of bandwidth ``omega``?

    Checks that the band basis restricted to the rows ``U`` has full column
    rank; ``margin`` is its smallest singular value.
    """
    u = _members(U)
    if u.size == 0:
        raise EmptySet("sampling set is empty")
    if u[0] < 0 or u[-1] >= d.n:
        raise IndexOutOfRange(f"sampling vertex outside [0, {d.n})")
    cols = np.flatnonzero(band_mask(d, omega))
    if cols.size == 0:
        return UniquenessResult(True, math.inf, 0)
    if cols.size > u.size:
        return UniquenessResult(False, 0.0, int(cols.size))
    sv = np.linalg.svd(d.basis[np.ix_(u, cols)], compute_uv=False)
    margin = float(sv[-1])
    return UniquenessResult(margin > tol, margin, int(cols.size))


def segment_count_limit(omega: float) -> int:
    """Largest N with ``N < pi / (2 arcsin sqrt(omega/2)) - 1``.

    Equivalently the longest segment whose closed-form constant satisfies
    ``segment_bound(N) * omega < 1``; the comparison is strict.
    """
    if not 0 < omega < 1.5:
        raise OutOfRange(f"omega must lie in (0, 3/2), got {omega}")
    limit = math.pi / (2.0 * math.asin(math.sqrt(omega / 2.0))) - 1.0
    N = max(int(math.floor(limit)), 0)

    def ok(k):
        return k == 0 or 2.0 * math.sin(math.pi / (2 * k + 2)) ** 2 > omega

    while N > 0 and not ok(N):
        N -= 1
    while ok(N + 1):
        N += 1
    return N


@dataclass(frozen=True)
class PowerCheck:
    k: int
    lhs: float
    rhs: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs * (1 + 1e-10) + 1e-300


def power_inequality_check(d: SpectralDecomposition, S, eps: float, a: float, l_max: int,
                           phi=None, seed: int = 0) -> list[PowerCheck]:
    """Trace of ``||phi|| <= a^k ||(eps I + L)^k phi||`` for ``k = 1, 2, 4, ..., 2^l_max``.

    ``phi`` defaults to a seeded random signal supported on ``S``. Raises
    ``PreconditionViolated`` when the base case ``k = 1`` fails for ``phi``.
    """
    s = _members(S)
    if phi is None:
        if s.size == 0:
            raise EmptySet("cannot draw a test signal on an empty set")
        rng = np.random.default_rng(seed)
        phi = np.zeros(d.n)
        phi[s] = rng.standard_normal(s.size)
    phi = np.asarray(phi, dtype=np.float64)
    a_op = d.matrix + eps * np.eye(d.n) if eps else d.matrix
    norm = float(np.linalg.norm(phi))
    base = a * float(np.linalg.norm(a_op @ phi))
    if norm > base * (1 + 1e-10):
        raise PreconditionViolated(f"||phi|| = {norm:.6e} > a ||A phi|| = {base:.6e}")
    coeffs = d.basis.T @ phi
    lam = eps + d.eigenvalues
    out = []
    for l in range(l_max + 1):
        k = 2 ** l
        rhs = a ** k * float(np.linalg.norm(lam ** k * coeffs))
        out.append(PowerCheck(k, norm, rhs))
    return out
