"""Time the compiled and pure-Python kernel backends side by side.

    python3 benchmarks/bench_kernels.py [--sizes 64 128 256] [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from pwgraph import kernels
from pwgraph.graph import torus_graph


def cases(n, rng):
    a = rng.standard_normal((n, n))
    sym = a + a.T
    spd = a @ a.T + n * np.eye(n)
    side = int(round(n ** 0.5))
    g = torus_graph([side, side])
    _, indptr, indices, weights = g._csr
    f = rng.standard_normal(g.vertex_count)
    return {
        "eigh": lambda k: k.symmetric_eigh(sym),
        "eigvals": lambda k: k.symmetric_eigh(sym, vectors=False),
        "cholesky": lambda k: k.cholesky(spd),
        "laplacian": lambda k: k.laplacian_apply(indptr, indices, weights, f),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[64, 144, 256])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    names = sorted(kernels.BACKENDS)
    if "cython" not in names:
        print("compiled backend not built; timing the Python fallback only")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<10} {'n':>5} " + " ".join(f"{b + ' [ms]':>14}" for b in names) + "  speedup")
    for n in args.sizes:
        for label, fn in cases(n, rng).items():
            times = {}
            for b in names:
                impl = kernels.get(b)
                times[b] = min(timeit.repeat(lambda: fn(impl), number=1, repeat=args.repeat)) * 1e3
            ratio = times["python"] / times["cython"] if "cython" in times else float("nan")
            cells = " ".join(f"{times[b]:>14.3f}" for b in names)
            print(f"{label:<10} {n:>5} {cells}  {ratio:6.1f}x")


if __name__ == "__main__":
    main()
