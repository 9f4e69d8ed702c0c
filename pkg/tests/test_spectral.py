import json
import math

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from conftest import dense_laplacian
from pwgraph import errors
from pwgraph.graph import complete_graph, cycle_graph, path_graph, torus_graph
from pwgraph.spectral import (
    bernstein_ratio,
    decompose,
    eigenspace_projector,
    fourier,
    inverse_fourier,
    min_bandwidth,
    operator_power,
    power_matrix,
    pw_project,
    sobolev_norm,
    spectral_multiplier,
)

SETTINGS = settings(max_examples=40, deadline=None,
                    suppress_health_check=[HealthCheck.function_scoped_fixture])


def cycle_spectrum(m):
    return np.sort(1.0 - np.cos(2 * np.pi * np.arange(m) / m))


def test_cycle6():
    d = decompose(cycle_graph(6))
    np.testing.assert_allclose(d.eigenvalues, [0, 0.5, 0.5, 1.5, 1.5, 2], atol=1e-12)
    assert d.eigenvalues[0] == 0.0
    assert d.omega_max == pytest.approx(2.0)
    assert not d.is_invertible


def test_k2():
    d = decompose(complete_graph(2))
    np.testing.assert_allclose(d.eigenvalues, [0.0, 2.0], atol=1e-14)
    np.testing.assert_allclose(np.abs(d.basis), 1 / math.sqrt(2), atol=1e-14)


def test_complete_graph():
    d = decompose(complete_graph(7))
    np.testing.assert_allclose(d.eigenvalues, [0] + [7 / 6] * 6, atol=1e-12)


def test_torus_is_product():
    d = decompose(torus_graph([4, 6]))
    a, b = cycle_spectrum(4), cycle_spectrum(6)
    expected = np.sort((a[:, None] + b[None, :]).ravel() / 2)
    np.testing.assert_allclose(d.eigenvalues, expected, atol=1e-12)


@pytest.mark.parametrize("g", [cycle_graph(11), path_graph(9), torus_graph([3, 5])], ids=repr)
def test_decomposition_invariants(backend, g):
    d = decompose(g)
    assert np.all(np.diff(d.eigenvalues) >= 0)
    np.testing.assert_allclose(d.basis.T @ d.basis, np.eye(d.n), atol=1e-12)
    np.testing.assert_allclose(d.matrix, dense_laplacian(g), atol=1e-15)
    np.testing.assert_allclose(d.eigenvalues, np.linalg.eigvalsh(dense_laplacian(g)), atol=1e-12)
    assert d.tolerance < 1e-12
    # sign convention: first clearly nonzero entry of each column is positive
    for col in d.basis.T:
        first = col[np.flatnonzero(np.abs(col) > 1e-10)[0]]
        assert first > 0


def test_outputs_are_read_only():
    d = decompose(cycle_graph(5))
    with pytest.raises(ValueError):
        d.eigenvalues[0] = 1.0


def test_to_json():
    d = decompose(cycle_graph(4))
    data = json.loads(d.to_json())
    assert len(data["eigenvalues"]) == 4 and len(data["basis"]) == 4


def test_too_large():
    with pytest.raises(errors.TooLarge):
        decompose(cycle_graph(30), cap=16)


@SETTINGS
@given(st.integers(3, 40), st.integers(0, 2**32 - 1))
def test_fourier_roundtrip_and_parseval(backend, m, seed):
    d = decompose(cycle_graph(m))
    f = np.random.default_rng(seed).standard_normal(m)
    c = fourier(d, f)
    np.testing.assert_allclose(inverse_fourier(d, c), f, atol=1e-12)
    assert np.linalg.norm(c) == pytest.approx(np.linalg.norm(f), rel=1e-12)


@SETTINGS
@given(st.integers(3, 24), st.sampled_from([0.01, 0.1, 1.0]),
       st.floats(-3, 3), st.floats(-3, 3), st.integers(0, 2**32 - 1))
def test_power_semigroup(m, eps, t1, t2, seed):
    d = decompose(cycle_graph(m))
    f = np.random.default_rng(seed).standard_normal(m)
    lhs = operator_power(d, eps, t1, operator_power(d, eps, t2, f))
    rhs = operator_power(d, eps, t1 + t2, f)
    scale = max(1.0, np.abs(rhs).max())
    np.testing.assert_allclose(lhs, rhs, atol=1e-9 * scale)


@pytest.mark.parametrize("t", [0, 1, 2, 3])
def test_integer_power_matches_matrix_power(t):
    g = path_graph(8)
    d = decompose(g)
    a = 0.3 * np.eye(8) + dense_laplacian(g)
    np.testing.assert_allclose(power_matrix(d, 0.3, t), np.linalg.matrix_power(a, t), atol=1e-12)
    np.testing.assert_allclose(power_matrix(d, 0.3, -t), np.linalg.matrix_power(np.linalg.inv(a), t),
                               atol=1e-10)


def test_negative_power_needs_positive_shift():
    d = decompose(cycle_graph(5))
    with pytest.raises(errors.SingularPower):
        spectral_multiplier(d, 0.0, -1)
    np.testing.assert_allclose(spectral_multiplier(d, 0.0, 0), 1.0)
    # shifted operator is invertible, so eps = 0 is allowed there
    s = d.shifted(0.5)
    assert s.is_invertible
    assert np.all(np.isfinite(spectral_multiplier(s, 0.0, -2)))


def test_sobolev_norm_matches_quadratic_form():
    g = cycle_graph(9)
    d = decompose(g)
    f = np.arange(9.0)
    a = 0.1 * np.eye(9) + dense_laplacian(g)
    assert sobolev_norm(d, 0.1, 2, f) == pytest.approx(np.linalg.norm(a @ f), rel=1e-12)
    assert sobolev_norm(d, 0.1, 1, f) == pytest.approx(math.sqrt(f @ a @ f), rel=1e-12)


@SETTINGS
@given(st.integers(4, 30), st.floats(0.0, 2.0), st.integers(0, 2**32 - 1))
def test_projection_properties(m, omega, seed):
    d = decompose(cycle_graph(m))
    f = np.random.default_rng(seed).standard_normal(m)
    p = pw_project(d, omega, f)
    np.testing.assert_allclose(pw_project(d, omega, p), p, atol=1e-12)
    assert np.linalg.norm(p) <= np.linalg.norm(f) * (1 + 1e-12)
    np.testing.assert_allclose(p @ (f - p), 0.0, atol=1e-10 * (f @ f))


@SETTINGS
@given(st.integers(4, 30), st.floats(0.05, 2.0), st.floats(0.1, 4.0), st.integers(0, 2**32 - 1))
def test_bernstein_inequality(m, omega, s, seed):
    d = decompose(cycle_graph(m))
    f = pw_project(d, omega, np.random.default_rng(seed).standard_normal(m))
    if np.linalg.norm(f) < 1e-8:
        return
    assert bernstein_ratio(d, f, s) <= omega ** s * (1 + 1e-10) + 1e-12


def test_bernstein_attained_by_eigenvector():
    d = decompose(cycle_graph(12))
    u = d.basis[:, 5]
    assert bernstein_ratio(d, u, 2.0) == pytest.approx(d.eigenvalues[5] ** 2, rel=1e-10)


def test_zero_signal():
    d = decompose(cycle_graph(5))
    with pytest.raises(errors.ZeroSignal):
        bernstein_ratio(d, np.zeros(5), 1.0)
    with pytest.raises(errors.ZeroSignal):
        min_bandwidth(d, np.zeros(5))


def test_min_bandwidth():
    d = decompose(cycle_graph(10))
    f = d.basis[:, 0] + d.basis[:, 3]
    assert min_bandwidth(d, f) == pytest.approx(d.eigenvalues[3])


def test_eigenspace_projector_rank():
    d = decompose(cycle_graph(8))
    p = eigenspace_projector(d, 1)
    assert round(np.trace(p)) == 2
    np.testing.assert_allclose(p @ p, p, atol=1e-12)


def test_length_mismatch():
    d = decompose(cycle_graph(5))
    with pytest.raises(errors.LengthMismatch):
        fourier(d, np.ones(6))
