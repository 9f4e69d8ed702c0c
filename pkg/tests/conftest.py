import numpy as np
import pytest

from pwgraph import kernels


@pytest.fixture(params=sorted(kernels.BACKENDS))
def backend(request, monkeypatch):
    """Run a test once per available kernel backend."""
    monkeypatch.setattr(kernels, "_impl", kernels.BACKENDS[request.param])
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def dense_laplacian(g):
    """Brute-force I - D^{-1/2} A D^{-1/2} from the edge list."""
    n = g.vertex_count
    adj = np.zeros((n, n))
    for u, v in g.edges():
        adj[u, v] = adj[v, u] = 1.0
    deg = adj.sum(axis=1)
    return np.eye(n) - adj / np.sqrt(np.outer(deg, deg))


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[num])
