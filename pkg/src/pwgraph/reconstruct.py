"""Recovery of band-limited signals from samples off a Poincare set.

Samples are taken on ``U = V \\ S``. For ``k = 2^l`` the iterate ``Y_k`` is the
spline through the samples minimizing ``||(eps I + L)^k Y||`` (spline order
``t = 2k``). For ``f`` of bandwidth ``omega`` and ``gamma = Lambda(S)(omega + eps) < 1``:

    ||f - Y_k|| <= 2 gamma^k ||f||.

Floating point caps ``k``: the loop stops when the iteration budget is
spent, when the spline system exceeds the condition cap, or when the
observed error (ground truth supplied) falls below the error floor.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    EmptyBand,
    EmptySampleSet,
    GammaNotLessThanOne,
    IllConditioned,
    InfeasibleBandwidth,
    LengthMismatch,
)
from .sampling import VertexSet, poincare_constant
from .spectral import SpectralDecomposition, band_mask
from .spline import MAX_CONDITION, fit_spline


class StopReason(str, Enum):
    BUDGET_EXHAUSTED = "BudgetExhausted"
    ILL_CONDITIONED = "IllConditioned"
    ERROR_FLOOR = "ErrorFloor"


@dataclass(frozen=True)
class TraceEntry:
    l: int
    k: int
    error: float | None
    bound: float
    gram_condition: float


@dataclass
class ReconstructionTrace:
    """Per-iteration record.

    ``bound`` is ``2 gamma^k ||f||`` when ground truth is known and the
    relative bound ``2 gamma^k`` otherwise (``f_norm`` is then ``None``).
    """

    omega: float
    lam: float
    eps: float
    gamma: float
    f_norm: float | None
    entries: list[TraceEntry] = field(default_factory=list)
    stop_reason: StopReason = StopReason.BUDGET_EXHAUSTED

    def bound_holds(self, slack: float = 1e-9) -> bool | None:
        if self.f_norm is None:
            return None
        return all(e.error <= e.bound + slack * self.f_norm for e in self.entries)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["l", "k", "error", "bound", "gram_condition"])
        for e in self.entries:
            writer.writerow([e.l, e.k, "" if e.error is None else repr(e.error),
                             repr(e.bound), repr(e.gram_condition)])
        return buf.getvalue()


def choose_epsilon(lam: float, omega: float, floor: float = 0.1,
                   decomposition: SpectralDecomposition | None = None) -> float:
    """``min(floor, (1/lam - omega) / 2)``; zero when the operator is certified invertible."""
    if not lam * omega < 1:
        raise InfeasibleBandwidth(f"Lambda * omega = {lam * omega:.6g} >= 1")
    if decomposition is not None and decomposition.is_invertible:
        return 0.0
    return min(floor, (1.0 / lam - omega) / 2.0)


def synthesize_pw_signal(d: SpectralDecomposition, omega: float, seed: int) -> np.ndarray:
    """Seeded unit-norm random combination of eigenvectors with eigenvalue <= omega."""
    cols = np.flatnonzero(band_mask(d, omega))
    if cols.size == 0:
        raise EmptyBand(f"no eigenvalue <= {omega}")
    rng = np.random.default_rng(seed)
    c = rng.standard_normal(cols.size)
    f = d.basis[:, cols] @ c
    return f / np.linalg.norm(f)


def reconstruct(d: SpectralDecomposition, S: VertexSet, samples, omega: float, eps: float,
                l_max: int = 6, ground_truth=None, lam: float | None = None, *,
                error_floor: float = 1e-12, max_condition: float = MAX_CONDITION):
    """Run the doubling-order spline iteration; returns ``(Y, trace)``.

    ``samples`` are the values on ``S.complement()`` in ascending vertex
    order. ``lam`` may be a certified upper bound on ``Lambda(S)``; by
    default the exact constant is computed.
    """
    U = np.asarray(S.complement(), dtype=np.int64)
    if U.size == 0:
        raise EmptySampleSet("S covers every vertex; nothing is sampled")
    samples = np.asarray(samples, dtype=np.float64).ravel()
    if samples.size != U.size:
        raise LengthMismatch(f"{samples.size} samples for {U.size} vertices in U")
    if lam is None:
        lam = poincare_constant(d, S)
    gamma = lam * (omega + eps)
    if not gamma < 1:
        raise GammaNotLessThanOne(f"gamma = Lambda (omega + eps) = {gamma:.6g}")

    f_norm = None
    if ground_truth is not None:
        ground_truth = np.asarray(ground_truth, dtype=np.float64)
        if ground_truth.shape != (d.n,):
            raise LengthMismatch("ground truth length does not match the graph")
        f_norm = float(np.linalg.norm(ground_truth))

    trace = ReconstructionTrace(float(omega), float(lam), float(eps), float(gamma), f_norm)
    best = None
    for l in range(l_max + 1):
        k = 2 ** l
        try:
            model = fit_spline(d, U, samples, 2 * k, eps, max_condition=max_condition)
        except IllConditioned:
            if best is None:
                raise
            trace.stop_reason = StopReason.ILL_CONDITIONED
            break
        best = model.solution
        bound = 2.0 * gamma ** k * (f_norm if f_norm is not None else 1.0)
        error = None
        if ground_truth is not None:
            error = float(np.linalg.norm(ground_truth - best))
        trace.entries.append(TraceEntry(l, k, error, bound, model.condition))
        if error is not None and error < error_floor * f_norm:
            trace.stop_reason = StopReason.ERROR_FLOOR
            break
    else:
        trace.stop_reason = StopReason.BUDGET_EXHAUSTED
    return best, trace
