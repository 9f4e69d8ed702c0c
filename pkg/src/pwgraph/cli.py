"""``pwgraph`` command line.

Subcommands: ``spectrum``, ``lambda``, ``spline``, ``reconstruct``,
``uniqueness``, ``gen``. Exit status is 0 on success, 1 on invalid input or
configuration, 2 when a numerical step fails.

Graph grammar: ``cycle:m``, ``path:m``, ``torus:m1xm2[x...]``,
``complete:m``, ``file:<path>``.

Vertex-set grammar (parts joined with ``+``): ``segment:N[@start]``,
``segments:CxN`` (C segments of length N spread evenly),
``solid:N1xN2[@r,c]``, ``list:v1,v2,...``.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import graph as gmod
from .errors import ConfigInvalid, InputError, NumericalError, PWGraphError
from .reconstruct import choose_epsilon, reconstruct, synthesize_pw_signal
from .sampling import (
    VertexSet,
    check_disjoint_closures,
    lambda_report,
    omega_star,
    poincare_constant,
    segment,
    segment_bound,
    solid,
    union_lambda,
    verify_uniqueness,
    vertex_set,
)
from .spectral import decompose
from .spline import fit_spline

DEFAULTS = {
    "graph": None,
    "remove": None,
    "sample": None,
    "values": None,
    "omega": None,
    "eps": "auto",
    "eps_floor": 0.1,
    "order": 2.0,
    "lmax": 6,
    "seed": 0,
    "out_dir": None,
    "output": None,
    "parallel_trials": 1,
    "basis": False,
}


def parse_graph(spec: str) -> gmod.Graph:
    kind, _, arg = spec.partition(":")
    try:
        if kind == "cycle":
            return gmod.cycle_graph(int(arg))
        if kind == "path":
            return gmod.path_graph(int(arg))
        if kind == "complete":
            return gmod.complete_graph(int(arg))
        if kind == "torus":
            return gmod.torus_graph([int(x) for x in arg.split("x")])
        if kind == "file":
            return gmod.read_edge_list(arg)
    except ValueError as exc:
        if isinstance(exc, PWGraphError):
            raise
        raise ConfigInvalid(f"bad graph spec {spec!r}: {exc}") from None
    except OSError as exc:
        raise ConfigInvalid(f"cannot read {arg!r}: {exc}") from None
    raise ConfigInvalid(f"unknown graph kind in {spec!r}")


@dataclass
class Removal:
    vertex_set: VertexSet
    parts: list[VertexSet] = field(default_factory=list)
    segment_lengths: list[int] = field(default_factory=list)
    box: list[int] | None = None


def _ints(text: str, sep: str) -> list[int]:
    try:
        return [int(x) for x in text.split(sep)]
    except ValueError:
        raise ConfigInvalid(f"expected integers separated by {sep!r}, got {text!r}") from None


def parse_vertex_set(g: gmod.Graph, spec: str) -> Removal:
    parts: list[VertexSet] = []
    lengths: list[int] = []
    box = None
    for chunk in spec.split("+"):
        kind, _, arg = chunk.partition(":")
        if kind == "segment":
            size, _, start = arg.partition("@")
            (N,) = _ints(size, "x")
            parts.append(segment(g, N, int(start) if start else 0))
            lengths.append(N)
        elif kind == "segments":
            count, N = _ints(arg, "x")
            if count < 1:
                raise ConfigInvalid("segment count must be >= 1")
            step = g.vertex_count // count
            parts.extend(segment(g, N, i * step) for i in range(count))
            lengths.extend([N] * count)
        elif kind == "solid":
            size, _, corner = arg.partition("@")
            sizes = _ints(size, "x")
            corner_idx = _ints(corner, ",") if corner else [0] * len(sizes)
            parts.append(solid(g, sizes, corner_idx))
            box = sizes if box is None else [max(a, b) for a, b in zip(box, sizes)]
        elif kind == "list":
            parts.append(vertex_set(g, _ints(arg, ",")))
        else:
            raise ConfigInvalid(f"unknown vertex-set kind in {chunk!r}")
    if len(parts) > 1:
        check_disjoint_closures(parts)
    members = [v for p in parts for v in p.members]
    if len(set(members)) != len(members):
        raise ConfigInvalid("vertex-set parts overlap")
    only_segments = len(lengths) == len(parts)
    return Removal(vertex_set(g, members), parts, lengths if only_segments else [], box)


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise ConfigInvalid(f"expected comma-separated numbers, got {text!r}") from None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _write(out_dir, name: str, text: str) -> None:
    if out_dir is None:
        return
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    (path / name).write_text(text)


def _require(cfg, *keys):
    for key in keys:
        if cfg.get(key) is None:
            raise ConfigInvalid(f"--{key.replace('_', '-')} is required")


def _spectrum_report(g, d, with_basis=False) -> dict:
    out = {
        "graph": g.name,
        "n": g.vertex_count,
        "max_degree": g.max_degree,
        "eigenvalues": d.eigenvalues.tolist(),
        "omega_min": d.omega_min,
        "omega_max": d.omega_max,
        "omega_star": omega_star(g),
        "residual": d.tolerance,
    }
    if with_basis:
        out["basis"] = d.basis.tolist()
    return out


def cmd_spectrum(cfg, out):
    _require(cfg, "graph")
    g = parse_graph(cfg["graph"])
    d = decompose(g)
    text = _dump(_spectrum_report(g, d, cfg["basis"]))
    _write(cfg["out_dir"], "spectrum.json", text)
    out.write(text)


def _lambda_payload(g, d, removal: Removal) -> dict:
    report = lambda_report(d, removal.vertex_set, segment_lengths=removal.segment_lengths,
                           box=removal.box)
    payload = report.as_dict()
    payload["omega_star"] = omega_star(g)
    payload["graph"] = g.name
    if removal.segment_lengths:
        payload["segment_bounds"] = [segment_bound(N) for N in removal.segment_lengths]
    if len(removal.parts) > 1:
        part_lams = [poincare_constant(d, p) for p in removal.parts]
        union = union_lambda(g, removal.parts, part_lams)
        payload["part_lambdas"] = part_lams
        payload["union_lambda"] = union.lambda_exact
    return payload


def cmd_lambda(cfg, out):
    _require(cfg, "graph", "remove")
    g = parse_graph(cfg["graph"])
    d = decompose(g)
    removal = parse_vertex_set(g, cfg["remove"])
    text = _dump(_lambda_payload(g, d, removal))
    _write(cfg["out_dir"], "lambda.json", text)
    out.write(text)


def cmd_uniqueness(cfg, out):
    _require(cfg, "graph", "remove", "omega")
    g = parse_graph(cfg["graph"])
    d = decompose(g)
    removal = parse_vertex_set(g, cfg["remove"])
    omega = float(cfg["omega"])
    lam = poincare_constant(d, removal.vertex_set)
    res = verify_uniqueness(d, removal.vertex_set.complement(), omega)
    payload = {
        "graph": g.name,
        "removed": list(removal.vertex_set.members),
        "omega": omega,
        "lambda_exact": lam,
        "guaranteed": lam * omega < 1,
        "unique": res.unique,
        "margin": res.margin,
        "band_dimension": res.band_dimension,
    }
    text = _dump(payload)
    _write(cfg["out_dir"], "uniqueness.json", text)
    out.write(text)


def cmd_spline(cfg, out):
    _require(cfg, "graph", "sample")
    g = parse_graph(cfg["graph"])
    d = decompose(g)
    W = list(parse_vertex_set(g, cfg["sample"]).vertex_set.members)
    if cfg["values"] is not None:
        y = _float_list(cfg["values"])
        if len(y) != len(W):
            raise ConfigInvalid(f"{len(y)} values for {len(W)} sample vertices")
    else:
        y = np.random.default_rng(int(cfg["seed"])).standard_normal(len(W)).tolist()
    eps = 0.1 if cfg["eps"] == "auto" else float(cfg["eps"])
    model = fit_spline(d, W, y, float(cfg["order"]), eps)
    payload = {
        "graph": g.name,
        "constraint_set": model.constraint_set.tolist(),
        "values": model.values.tolist(),
        "order": model.order,
        "eps": model.eps,
        "alpha": model.alpha.tolist(),
        "solution": model.solution.tolist(),
        "sobolev_energy": model.sobolev_energy,
        "condition": model.condition,
    }
    text = _dump(payload)
    _write(cfg["out_dir"], "spline.json", text)
    out.write(text)


def _trial(d, removal, omega, eps, lmax, lam, seed):
    f = synthesize_pw_signal(d, omega, seed)
    U = list(removal.vertex_set.complement())
    _, trace = reconstruct(d, removal.vertex_set, f[U], omega, eps, l_max=lmax,
                           ground_truth=f, lam=lam)
    return seed, trace


def cmd_reconstruct(cfg, out):
    _require(cfg, "graph", "remove", "omega")
    g = parse_graph(cfg["graph"])
    d = decompose(g)
    removal = parse_vertex_set(g, cfg["remove"])
    omega = float(cfg["omega"])
    if omega < 0:
        raise ConfigInvalid("omega must be >= 0")
    lmax = int(cfg["lmax"])
    trials = int(cfg["parallel_trials"])
    if trials < 1:
        raise ConfigInvalid("--parallel-trials must be >= 1")
    lam = poincare_constant(d, removal.vertex_set)
    if cfg["eps"] == "auto":
        eps = choose_epsilon(lam, omega, float(cfg["eps_floor"]), d)
    else:
        eps = float(cfg["eps"])

    seeds = [int(cfg["seed"]) + i for i in range(trials)]
    if trials == 1:
        results = [_trial(d, removal, omega, eps, lmax, lam, seeds[0])]
    else:
        with ThreadPoolExecutor(max_workers=trials) as pool:
            results = list(pool.map(lambda s: _trial(d, removal, omega, eps, lmax, lam, s), seeds))

    lambda_payload = _lambda_payload(g, d, removal)
    summary_trials = []
    for seed, trace in results:
        last = trace.entries[-1]
        summary_trials.append({
            "seed": seed,
            "iterations": len(trace.entries),
            "stop_reason": trace.stop_reason.value,
            "final_k": last.k,
            "final_error": last.error,
            "final_bound": last.bound,
            "bound_holds": trace.bound_holds(),
        })
        name = "trace.csv" if trials == 1 else f"trace_seed{seed}.csv"
        csv_text = trace.to_csv()
        _write(cfg["out_dir"], name, csv_text)
        if trials > 1:
            out.write(f"# seed {seed}\n")
        out.write(csv_text)
    gamma = results[0][1].gamma
    summary = {
        "graph": g.name,
        "n": g.vertex_count,
        "removed": list(removal.vertex_set.members),
        "omega": omega,
        "eps": eps,
        "lambda": lam,
        "gamma": gamma,
        "uniqueness_threshold": 1.0 / lam,
        "omega_star": omega_star(g),
        "closed_form_bound": lambda_payload["closed_form_bound"],
        "lmax": lmax,
        "trials": summary_trials,
        "bound_holds": all(t["bound_holds"] for t in summary_trials),
    }
    _write(cfg["out_dir"], "spectrum.json", _dump(_spectrum_report(g, d)))
    _write(cfg["out_dir"], "lambda.json", _dump(lambda_payload))
    _write(cfg["out_dir"], "summary.json", _dump(summary))


def cmd_gen(cfg, out):
    _require(cfg, "graph")
    text = gmod.format_edge_list(parse_graph(cfg["graph"]))
    if cfg["output"]:
        Path(cfg["output"]).write_text(text)
    else:
        out.write(text)


COMMANDS = {
    "spectrum": cmd_spectrum,
    "lambda": cmd_lambda,
    "spline": cmd_spline,
    "reconstruct": cmd_reconstruct,
    "uniqueness": cmd_uniqueness,
    "gen": cmd_gen,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pwgraph", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON file with option values; flags override it")
        p.add_argument("--graph")
        p.add_argument("--out-dir", dest="out_dir")
        p.add_argument("--seed", type=int)
        if name in ("lambda", "reconstruct", "uniqueness"):
            p.add_argument("--remove")
        if name in ("reconstruct", "uniqueness"):
            p.add_argument("--omega", type=float)
        if name in ("reconstruct", "spline"):
            p.add_argument("--eps")
        if name == "reconstruct":
            p.add_argument("--eps-floor", dest="eps_floor", type=float)
            p.add_argument("--lmax", type=int)
            p.add_argument("--parallel-trials", dest="parallel_trials", type=int)
        if name == "spline":
            p.add_argument("--sample")
            p.add_argument("--values")
            p.add_argument("--order", type=float)
        if name == "spectrum":
            p.add_argument("--basis", action="store_true", default=None)
        if name == "gen":
            p.add_argument("--output")
    return parser


def resolve_config(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigInvalid(f"cannot load config {args.config!r}: {exc}") from None
        if not isinstance(loaded, dict):
            raise ConfigInvalid("config file must hold a JSON object")
        unknown = set(loaded) - set(DEFAULTS)
        if unknown:
            raise ConfigInvalid(f"unknown config keys: {sorted(unknown)}")
        cfg.update(loaded)
    for key, value in vars(args).items():
        if key in DEFAULTS and value is not None:
            cfg[key] = value
    if cfg["eps"] != "auto":
        try:
            cfg["eps"] = float(cfg["eps"])
        except (TypeError, ValueError):
            raise ConfigInvalid(f"--eps must be a number or 'auto', got {cfg['eps']!r}") from None
    return cfg


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        COMMANDS[args.command](cfg, out)
    except InputError as exc:
        print(f"pwgraph: [{exc.module}] {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"pwgraph: [{exc.module}] {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
