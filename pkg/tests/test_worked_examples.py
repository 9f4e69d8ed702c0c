"""Small hand-checkable instances and cross-module identities."""
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import dense_laplacian
from pwgraph.graph import apply_laplacian, complete_graph, cycle_graph, torus_graph
from pwgraph.reconstruct import choose_epsilon, reconstruct, synthesize_pw_signal
from pwgraph.sampling import (
    omega_star,
    poincare_constant,
    poincare_minimizer,
    power_inequality_check,
    rectangular_bound,
    segment,
    segment_bound,
    solid,
    union_lambda,
    uniqueness_threshold,
    verify_uniqueness,
    vertex_set,
)
from pwgraph.spectral import (
    bernstein_ratio,
    decompose,
    fourier,
    min_bandwidth,
    operator_power,
    pw_project,
    sobolev_norm,
)
from pwgraph.spline import fit_spline, fundamental_system


@pytest.fixture(scope="module")
def c64():
    return decompose(cycle_graph(64))


def test_fourier_symbol_on_cycle():
    d = decompose(cycle_graph(17))
    f = np.random.default_rng(0).standard_normal(17)
    np.testing.assert_allclose(fourier(d, apply_laplacian(d.graph, f)),
                               d.eigenvalues * fourier(d, f), atol=1e-12)


def test_negative_power_inverts():
    g = cycle_graph(12)
    d = decompose(g)
    x = np.random.default_rng(1).standard_normal(12)
    f = (np.eye(12) + dense_laplacian(g)) @ x
    np.testing.assert_allclose(operator_power(d, 1.0, -1, f), x, atol=1e-12)
    assert sobolev_norm(d, 0.0, 2, f) == pytest.approx(np.linalg.norm(apply_laplacian(g, f)), abs=1e-9)


def test_full_band_projection_is_identity():
    d = decompose(torus_graph([3, 4]))
    f = np.random.default_rng(2).standard_normal(12)
    np.testing.assert_allclose(pw_project(d, d.omega_max, f), f, atol=1e-12)


def test_bernstein_roots_increase_to_bandwidth(c64):
    f = pw_project(c64, 0.7, np.random.default_rng(3).standard_normal(64))
    roots = [bernstein_ratio(c64, f, s) ** (1 / s) for s in (1, 2, 4, 8, 16)]
    assert all(b >= a - 1e-12 for a, b in zip(roots, roots[1:]))
    assert roots[-1] <= min_bandwidth(c64, f) + 1e-12


def test_segment_examples(c64):
    assert poincare_constant(c64, segment(c64.graph, 3)) <= 0.5 / math.sin(math.pi / 8) ** 2
    assert segment_bound(3) == pytest.approx(3.4142135, abs=1e-6)
    for N in (50, 100, 200):
        assert segment_bound(N) == pytest.approx(2 * (N + 1) ** 2 / math.pi ** 2, rel=5e-3)
    assert rectangular_bound([1, 1]) == pytest.approx(math.sqrt(2) / 4)


def test_block_on_large_torus_against_box_estimate():
    # recorded, not asserted as a bound: the box estimate is not an upper bound
    d = decompose(torus_graph([12, 12]))
    lam = poincare_constant(d, solid(d.graph, [2, 2], [5, 5]))
    est = rectangular_bound([2, 2])
    print(f"2x2 block on 12x12 torus: exact {lam:.6f}, box estimate {est:.6f}")
    assert lam > 0 and est > 0


def test_two_far_singletons():
    g = cycle_graph(32)
    d = decompose(g)
    parts = [vertex_set(g, [0]), vertex_set(g, [5])]
    lam = poincare_constant(d, [0, 5])
    assert lam == pytest.approx(math.sqrt(2 / 3), abs=1e-12)
    assert union_lambda(g, parts, [lam, lam]).lambda_exact == pytest.approx(lam)
    single = union_lambda(g, parts[:1], [lam])
    assert single.vertex_set.members == (0,)


def test_thresholds_for_singletons():
    assert uniqueness_threshold(math.sqrt(2 / 3)) == pytest.approx(math.sqrt(1.5))
    assert uniqueness_threshold(1.0) == 1.0
    assert omega_star(torus_graph([4, 4])) == pytest.approx(1.1180339887)


def test_uniqueness_trivial_cases(c64):
    assert verify_uniqueness(c64, [17], 0.5 * c64.eigenvalues[1]).unique
    assert verify_uniqueness(c64, range(64), 2.0).unique
    S = segment(c64.graph, 4)
    omega = 0.99 / segment_bound(4)
    assert verify_uniqueness(c64, S.complement(), omega).unique


def test_power_check_equalities(c64):
    S = segment(c64.graph, 3)
    lam, phi = poincare_minimizer(c64, S)
    checks = power_inequality_check(c64, S, 0.0, lam, 3, phi=phi)
    assert checks[0].lhs == pytest.approx(checks[0].rhs, rel=1e-10)
    assert all(c.holds for c in checks)
    doubled = power_inequality_check(c64, S, 0.0, 2 * lam, 3, phi=phi)
    assert all(c.lhs < c.rhs for c in doubled)
    j = 10
    psi = c64.basis[:, j]
    line = power_inequality_check(c64, range(64), 0.0, 1 / c64.eigenvalues[j], 3, phi=psi)
    for c in line:
        assert c.lhs == pytest.approx(c.rhs, rel=1e-9)


def test_fundamental_columns_invert_operator():
    d = decompose(torus_graph([3, 4]))
    fs = fundamental_system(d, [0, 5, 7], 2, 0.1)
    applied = operator_power(d, 0.1, 2, fs.columns)
    np.testing.assert_allclose(applied, np.eye(12)[:, [0, 5, 7]], atol=1e-8)
    full = fundamental_system(d, range(12), 1, 0.5)
    np.testing.assert_allclose(full.gram, operator_power(d, 0.5, -1, np.eye(12)), atol=1e-12)


def test_zero_data_and_full_data():
    d = decompose(complete_graph(4))
    m = fit_spline(d, [1, 2], [0.0, 0.0], 2, 0.1)
    np.testing.assert_allclose(m.solution, 0.0)
    np.testing.assert_allclose(m.alpha, 0.0)
    f = np.array([1.0, -2.0, 0.5, 3.0])
    np.testing.assert_allclose(fit_spline(d, range(4), f, 2, 0.1).solution, f)


def test_k2_minimality_family():
    d = decompose(complete_graph(2))
    m = fit_spline(d, [0], [1.0], 1, 1.0)
    for c in np.linspace(-2, 2, 41):
        assert m.sobolev_energy ** 2 <= 2 - 2 * c + 2 * c * c + 1e-14  # (1,c).(I+L)(1,c)


def test_choose_epsilon_example():
    eps = choose_epsilon(1.0, 0.5, floor=1.0)
    assert eps == pytest.approx(0.25)
    assert 1.0 * (0.5 + eps) == pytest.approx(0.75)


def test_constant_mode_recovery(c64):
    # with eps > 0 the first iterate is off by O(eps^2); exact only as eps -> 0
    S = segment(c64.graph, 3, start=10)
    f = 2.5 * c64.basis[:, 0]
    U = list(S.complement())
    first = []
    for eps in (1e-1, 1e-2, 1e-3):
        _, trace = reconstruct(c64, S, f[U], 0.0, eps, l_max=3, ground_truth=f)
        assert trace.bound_holds()
        assert trace.entries[-1].error <= 1e-8 * np.linalg.norm(f)
        first.append(trace.entries[0].error)
    assert first[1] < 2e-2 * first[0] and first[2] < 2e-2 * first[1]


def test_isolated_singletons_reconstruction(c64):
    S = vertex_set(c64.graph, list(range(0, 64, 8)))
    lam = poincare_constant(c64, S)
    assert lam == pytest.approx(math.sqrt(2 / 3))
    f = pw_project(c64, 0.5, np.random.default_rng(8).standard_normal(64))
    eps = choose_epsilon(lam, 0.5)
    _, trace = reconstruct(c64, S, f[list(S.complement())], 0.5, eps, ground_truth=f)
    assert trace.bound_holds()
    bounds = [e.bound for e in trace.entries]
    assert all(b < a for a, b in zip(bounds, bounds[1:]))


def test_out_of_band_samples_still_traced(c64):
    S = segment(c64.graph, 2)
    g = np.random.default_rng(9).standard_normal(64)
    _, trace = reconstruct(c64, S, g[list(S.complement())], 0.1, 0.1, l_max=2, ground_truth=g)
    assert len(trace.entries) == 3


def test_exact_recovery_is_stable(c64):
    S = vertex_set(c64.graph, [v for i in range(4) for v in range(16 * i, 16 * i + 3)])
    lam = poincare_constant(c64, S)
    omega = 0.3 / lam
    f = synthesize_pw_signal(c64, omega, seed=21)
    U = list(S.complement())
    _, trace = reconstruct(c64, S, f[U], omega, choose_epsilon(lam, omega), l_max=7,
                           ground_truth=f, error_floor=0.0)
    errs = [e.error for e in trace.entries]
    hit = next(i for i, e in enumerate(errs) if e < 1e-10)
    assert all(e < 1e-8 for e in errs[hit:])
    for e in trace.entries:
        assert np.isfinite(e.gram_condition)


@settings(max_examples=30, deadline=None)
@given(st.integers(10, 40), st.integers(0, 2**32 - 1))
def test_lambda_monotone_in_set(m, seed):
    rng = np.random.default_rng(seed)
    d = decompose(cycle_graph(m))
    big = rng.choice(m, int(rng.integers(2, m // 2 + 1)), replace=False)
    small = big[: int(rng.integers(1, big.size))]
    assert poincare_constant(d, small) <= poincare_constant(d, big) + 1e-9


@settings(max_examples=30, deadline=None)
@given(st.integers(6, 30), st.integers(0, 2**32 - 1))
def test_random_support_never_beats_constant(m, seed):
    rng = np.random.default_rng(seed)
    d = decompose(cycle_graph(m))
    S = rng.choice(m, int(rng.integers(1, m // 2)), replace=False)
    lam = poincare_constant(d, S)
    phi = np.zeros(m)
    phi[S] = rng.standard_normal(S.size)
    assert np.linalg.norm(phi) <= (lam + 1e-8) * np.linalg.norm(apply_laplacian(d.graph, phi))
