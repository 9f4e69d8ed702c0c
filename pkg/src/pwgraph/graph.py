"""Finite simple connected graphs and the normalized combinatorial Laplacian.

Vertices are dense integer indices ``0..n-1``. Signals are plain float64
numpy vectors of length ``n``; :func:`as_signal` validates one against a
graph.

The Laplacian acts as::

    (L f)(v) = f(v) - sum_{u ~ v} f(u) / sqrt(d(v) d(u))
"""
from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import (
    Disconnected,
    DuplicateEdge,
    EdgeListFormatError,
    GraphError,
    IndexOutOfRange,
    LengthMismatch,
    SelfLoop,
    TooLarge,
    TooSmall,
)

DENSE_CAP = 4096


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable adjacency structure.

    ``adjacency[v]`` is the sorted tuple of neighbours of ``v``. Build
    instances with :func:`build_from_edge_list` or one of the generators;
    the constructor checks every invariant either way.
    """

    adjacency: tuple[tuple[int, ...], ...]
    shape: tuple[int, ...] | None = None
    name: str = ""
    _csr: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.adjacency)
        if n == 0:
            raise TooSmall("a graph needs at least one vertex")
        for v, nbrs in enumerate(self.adjacency):
            if list(nbrs) != sorted(nbrs):
                raise GraphError(f"neighbour list of {v} is not sorted")
            if len(set(nbrs)) != len(nbrs):
                raise DuplicateEdge(f"vertex {v} lists a neighbour twice")
            for u in nbrs:
                if not 0 <= u < n:
                    raise IndexOutOfRange(f"neighbour {u} of {v} outside [0, {n})")
                if u == v:
                    raise SelfLoop(f"self-loop at vertex {v}")
                if v not in self.adjacency[u]:
                    raise GraphError(f"edge ({v}, {u}) is not symmetric")
        if n > 1 and any(len(nbrs) == 0 for nbrs in self.adjacency):
            raise Disconnected("graph has an isolated vertex")
        if n == 1:
            raise Disconnected("a single vertex has degree 0; need at least one edge")
        if not _is_connected(self.adjacency):
            raise Disconnected("graph has more than one connected component")

        degrees = np.array([len(nbrs) for nbrs in self.adjacency], dtype=np.int64)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(degrees, out=indptr[1:])
        indices = np.fromiter(
            itertools.chain.from_iterable(self.adjacency), dtype=np.int64, count=int(indptr[-1])
        )
        inv_sqrt = 1.0 / np.sqrt(degrees.astype(np.float64))
        rows = np.repeat(np.arange(n), degrees)
        weights = inv_sqrt[rows] * inv_sqrt[indices]
        for arr in (degrees, indptr, indices, weights):
            arr.flags.writeable = False
        object.__setattr__(self, "_csr", (degrees, indptr, indices, weights))

    @property
    def vertex_count(self) -> int:
        return len(self.adjacency)

    @property
    def degrees(self) -> np.ndarray:
        return self._csr[0]

    @property
    def max_degree(self) -> int:
        return int(self.degrees.max())

    @property
    def edge_count(self) -> int:
        return int(self.degrees.sum()) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(v, u) for v, nbrs in enumerate(self.adjacency) for u in nbrs if v < u]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def __repr__(self):
        label = self.name or "Graph"
        return f"<{label}: n={self.vertex_count}, m={self.edge_count}, d(G)={self.max_degree}>"


def _is_connected(adjacency) -> bool:
    seen = [False] * len(adjacency)
    seen[0] = True
    queue = deque([0])
    count = 1
    while queue:
        v = queue.popleft()
        for u in adjacency[v]:
            if not seen[u]:
                seen[u] = True
                count += 1
                queue.append(u)
    return count == len(adjacency)


def build_from_edge_list(n: int, edges: Iterable[Sequence[int]], *, name: str = "",
                         shape: tuple[int, ...] | None = None) -> Graph:
    """Build a graph on ``n`` vertices from unordered index pairs."""
    if n < 1:
        raise TooSmall("vertex count must be positive")
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for pair in edges:
        u, v = (int(x) for x in pair)
        if not (0 <= u < n and 0 <= v < n):
            raise IndexOutOfRange(f"edge ({u}, {v}) outside [0, {n})")
        if u == v:
            raise SelfLoop(f"self-loop at vertex {u}")
        if v in nbrs[u]:
            raise DuplicateEdge(f"edge ({u}, {v}) given twice")
        nbrs[u].add(v)
        nbrs[v].add(u)
    return Graph(tuple(tuple(sorted(s)) for s in nbrs), shape=shape, name=name)


def cycle_graph(m: int) -> Graph:
    if m < 3:
        raise TooSmall(f"cycle needs m >= 3, got {m}")
    return build_from_edge_list(m, ((i, (i + 1) % m) for i in range(m)),
                                name=f"cycle:{m}", shape=(m,))


def path_graph(m: int) -> Graph:
    if m < 2:
        raise TooSmall(f"path needs m >= 2, got {m}")
    return build_from_edge_list(m, ((i, i + 1) for i in range(m - 1)), name=f"path:{m}")


def complete_graph(m: int) -> Graph:
    if m < 2:
        raise TooSmall(f"complete graph needs m >= 2, got {m}")
    return build_from_edge_list(m, itertools.combinations(range(m), 2), name=f"complete:{m}")


def torus_graph(dims: Sequence[int]) -> Graph:
    """Cartesian product of cycles; vertices are row-major multi-indices."""
    dims = tuple(int(x) for x in dims)
    if not dims:
        raise TooSmall("torus needs at least one dimension")
    if any(x < 3 for x in dims):
        raise TooSmall(f"every torus dimension must be >= 3, got {dims}")
    n = math.prod(dims)
    idx = np.arange(n).reshape(dims)
    edges = []
    for axis in range(len(dims)):
        shifted = np.roll(idx, -1, axis=axis)
        edges.extend(zip(idx.ravel().tolist(), shifted.ravel().tolist()))
    name = "torus:" + "x".join(map(str, dims))
    return build_from_edge_list(n, edges, name=name, shape=dims)


def parse_edge_list(text: str, *, name: str = "") -> Graph:
    """Parse the ``n m`` header + ``u v`` lines format; ``#`` starts a comment."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListFormatError(f"line {lineno}: expected two integers, got {raw!r}")
        try:
            rows.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise EdgeListFormatError(f"line {lineno}: non-integer field in {raw!r}") from None
    if not rows:
        raise EdgeListFormatError("missing 'n m' header")
    (n, m), edges = rows[0], rows[1:]
    if len(edges) != m:
        raise EdgeListFormatError(f"header announces {m} edges, found {len(edges)}")
    return build_from_edge_list(n, edges, name=name)


def read_edge_list(path) -> Graph:
    path = Path(path)
    return parse_edge_list(path.read_text(), name=f"file:{path}")


def format_edge_list(g: Graph) -> str:
    edges = g.edges()
    lines = [f"# {g.name}" if g.name else "# graph", f"{g.vertex_count} {len(edges)}"]
    lines.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(lines) + "\n"


def as_signal(g: Graph, f) -> np.ndarray:
    f = np.asarray(f, dtype=np.float64)
    if f.ndim != 1 or f.shape[0] != g.vertex_count:
        raise LengthMismatch(f"signal of shape {f.shape} on a graph with {g.vertex_count} vertices")
    return f


def delta(g: Graph, v: int) -> np.ndarray:
    if not 0 <= v < g.vertex_count:
        raise IndexOutOfRange(f"vertex {v} outside [0, {g.vertex_count})")
    out = np.zeros(g.vertex_count)
    out[v] = 1.0
    return out


def kernel_vector(g: Graph) -> np.ndarray:
    """Unit vector along ``sqrt(d(v))``, which spans the kernel of L."""
    s = np.sqrt(g.degrees.astype(np.float64))
    return s / np.linalg.norm(s)


def apply_laplacian(g: Graph, f) -> np.ndarray:
    f = as_signal(g, f)
    _, indptr, indices, weights = g._csr
    return kernels.laplacian_apply(indptr, indices, weights, f)


def laplacian_matrix(g: Graph, cap: int = DENSE_CAP) -> np.ndarray:
    """Dense ``I - D^{-1/2} A D^{-1/2}``; refuses graphs above ``cap`` vertices."""
    n = g.vertex_count
    if n > cap:
        raise TooLarge(f"{n} vertices exceeds the dense cap of {cap}")
    _, indptr, indices, weights = g._csr
    mat = np.eye(n)
    rows = np.repeat(np.arange(n), np.diff(indptr))
    mat[rows, indices] = -weights
    return mat
