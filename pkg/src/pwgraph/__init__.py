"""Variational splines and Paley-Wiener reconstruction on finite graphs."""
from .graph import (
    Graph,
    apply_laplacian,
    build_from_edge_list,
    complete_graph,
    cycle_graph,
    laplacian_matrix,
    parse_edge_list,
    path_graph,
    read_edge_list,
    torus_graph,
)
from .kernels import BACKEND
from .reconstruct import ReconstructionTrace, StopReason, choose_epsilon, reconstruct, synthesize_pw_signal
from .sampling import (
    LambdaReport,
    VertexSet,
    omega_star,
    poincare_constant,
    power_inequality_check,
    rectangular_bound,
    segment,
    segment_bound,
    segment_count_limit,
    solid,
    union_lambda,
    uniqueness_threshold,
    verify_uniqueness,
    vertex_set,
)
from .spectral import (
    SpectralDecomposition,
    bernstein_ratio,
    decompose,
    fourier,
    inverse_fourier,
    min_bandwidth,
    operator_power,
    pw_project,
    sobolev_norm,
)
from .spline import FundamentalSystem, SplineModel, fit_spline, fundamental_system, lagrangian_splines, optimality_margin

__version__ = "0.1.0"
