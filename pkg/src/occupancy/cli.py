"""Command-line driver: ``occupancy <subcommand> [options]``.

Exit status is 0 on success, 2 on invalid input and 3 when a capacity limit
is hit. Output goes to ``--out`` (default stdout) as CSV or JSON; both are
byte-stable for fixed flags and seed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import bounds, experiments
from .dynamics import DEFAULT_MAX_CELLS, parse_initial_state, run_trajectories
from .exceptions import ArgumentError, CapacityError, OccupancyError
from .graph import (
    Graph,
    complete_graph,
    cycle_graph,
    cycle_power,
    dump_edge_list,
    erdos_renyi,
    line_graph,
    line_graph_complete,
    load_edge_list,
    path_graph,
    walk_brackets,
)
from .interaction import parse_pair
from .observables import get_motif, motif_polynomial, neighborhood_polynomial
from .oracle import exact_records

EXIT_VALIDATION = 2
EXIT_CAPACITY = 3


def parse_graph(spec: str, seed: int = 0) -> Graph:
    """``gen:complete:N``, ``gen:cycle:N``, ``gen:path:N``, ``gen:cycle-power:N:K``,
    ``gen:er:N:P[:SEED]``, ``gen:lk:N`` (line graph of ``K_N``), else an edge-list path."""
    if not spec.startswith("gen:"):
        path = Path(spec)
        return load_edge_list(path.read_text(), name=path.stem)
    kind, *args = spec[4:].split(":")
    try:
        if kind == "complete":
            return complete_graph(int(args[0]))
        if kind == "cycle":
            return cycle_graph(int(args[0]))
        if kind == "path":
            return path_graph(int(args[0]))
        if kind == "cycle-power":
            return cycle_power(int(args[0]), int(args[1]))
        if kind == "er":
            s = int(args[2]) if len(args) > 2 else seed
            return erdos_renyi(int(args[0]), float(args[1]), s)
        if kind == "lk":
            return line_graph_complete(int(args[0])).graph
    except (IndexError, ValueError):
        pass
    raise ArgumentError(f"cannot parse graph spec {spec!r}")


# -- output -------------------------------------------------------------------------

def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, float) and not np.isfinite(obj):
        return None
    return obj


def render(payload: dict, rows: list[dict], columns: list[str], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_plain({**payload, "rows": rows}), indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def _cell(v):
    v = _plain(v)
    if isinstance(v, float):
        return repr(v)
    return "" if v is None else v


def emit(args, payload: dict, rows: list[dict], columns: list[str]) -> None:
    text = render(payload, rows, columns, args.format)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _common(args, graph: Graph | None = None) -> dict:
    echo = {"command": args.command, "seed": args.seed}
    for key in ("f", "g", "init", "steps", "replicas"):
        if hasattr(args, key):
            echo[key] = getattr(args, key)
    if graph is not None:
        echo["graph"] = {"spec": args.graph, "name": graph.name, "n_vertices": graph.n_vertices,
                         "n_edges": graph.n_edges, "min_degree": graph.min_degree}
    return {"inputs": echo}


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


# -- subcommands ---------------------------------------------------------------------

def cmd_simulate(args) -> None:
    graph = parse_graph(args.graph, args.seed)
    pair = parse_pair(args.f, args.g)
    x0 = parse_initial_state(args.init, graph.n_vertices, args.seed)
    ens = run_trajectories(graph, pair, x0, args.steps, args.replicas, args.seed, max_cells=args.max_cells)
    rows = []
    for t in range(args.steps + 1):
        dev = experiments.neighborhood_deviation_samples(graph, ens, t)
        rows.append({
            "t": t,
            "stochastic_mean": float(ens.states(t).mean()),
            "deterministic_mean": float(np.mean(ens.densities(t))),
            "mean_abs_neighborhood_deviation": float(dev.mean()),
        })
    payload = _common(args, graph)
    payload["pair"] = pair.describe()
    emit(args, payload, rows, ["t", "stochastic_mean", "deterministic_mean", "mean_abs_neighborhood_deviation"])


def cmd_bound(args) -> None:
    graph = parse_graph(args.graph, args.seed) if args.graph else None
    pair = parse_pair(args.f, args.g)
    report = bounds.bound_report(
        args.kind, graph=graph, pair=pair, M=args.M, vertex=args.vertex, t_max=args.steps,
        d=args.d, lam=args.lam, rho=args.rho, p=args.p, eps=args.eps,
    )
    payload = _common(args, graph)
    payload.update(report.to_dict())
    rows = [{"t": t, "value": v} for t, v in zip(report.t, report.values)]
    emit(args, payload, rows, ["t", "value"])


def cmd_oracle(args) -> None:
    graph = parse_graph(args.graph, args.seed)
    pair = parse_pair(args.f, args.g)
    x0 = parse_initial_state(args.init, graph.n_vertices, args.seed)
    recs = exact_records(graph, pair, x0, args.steps)
    brackets = walk_brackets(graph, args.steps)
    vertices = range(graph.n_vertices) if args.vertex is None else [args.vertex]
    rows = []
    for rec in recs:
        for v in vertices:
            rows.append({
                "t": rec.t, "vertex": v,
                "exact_mean": rec.expectation[v], "deterministic": rec.deterministic[v],
                "abs_mean_gap": abs(rec.expectation[v] - rec.deterministic[v]),
                "exact_neighborhood_deviation": rec.neighborhood_deviation[v],
                "thm_main": bounds.thm_main_from_brackets(brackets[:, v], pair.M, rec.t),
                "cor_meanfield": bounds.cor_meanfield_from_brackets(brackets[:, v], pair.M, rec.t),
            })
    payload = _common(args, graph)
    payload["pair"] = pair.describe()
    emit(args, payload, rows, ["t", "vertex", "exact_mean", "deterministic", "abs_mean_gap",
                               "exact_neighborhood_deviation", "thm_main", "cor_meanfield"])


def cmd_deviation(args) -> None:
    graph = parse_graph(args.graph, args.seed)
    pair = parse_pair(args.f, args.g)
    x0 = parse_initial_state(args.init, graph.n_vertices, args.seed)
    ens = run_trajectories(graph, pair, x0, args.steps, args.replicas, args.seed, max_cells=args.max_cells)
    if args.motif:
        n = experiments._line_graph_order(graph)
        if n is None:
            raise ArgumentError("--motif needs --graph gen:lk:N")
        P = motif_polynomial(get_motif(args.motif), n)
        observable = f"motif[{args.motif}]"
    else:
        P = neighborhood_polynomial(graph, args.vertex)
        brackets = walk_brackets(graph, args.steps)
        observable = f"neighborhood[v={args.vertex}]"
    rows = []
    for t in range(args.steps + 1):
        est = experiments.estimate_from_samples(experiments.polynomial_deviation_samples(P, ens, t))
        if args.motif:
            b = bounds.thm_poly_bound(P.degree, pair.M, P.l1, P.l2, t)
        else:
            b = bounds.thm_main_from_brackets(brackets[:, args.vertex], pair.M, t)
        rows.append({"t": t, "mean": est.mean, "std_error": est.std_error, "replicas": est.replicas,
                     "bound": b, "ok": est.upper() <= b})
    payload = _common(args, graph)
    payload.update(pair=pair.describe(), observable=observable, sigma_slack=experiments.SIGMA_SLACK)
    emit(args, payload, rows, ["t", "mean", "std_error", "replicas", "bound", "ok"])


def _fit_rows(fit) -> list[dict]:
    return [{"size": x, "estimate": y, "std_error": e["std_error"]} for (x, y), e in zip(fit.points, fit.estimates)]


def cmd_scaling_degree(args) -> None:
    pair = parse_pair(args.f, args.g)
    fit = experiments.degree_scaling_study(args.family, _ints(args.sizes), pair, args.steps, args.replicas, args.seed)
    payload = _common(args)
    payload.update(pair=pair.describe(), family=args.family, fit=fit.to_dict())
    emit(args, payload, _fit_rows(fit), ["size", "estimate", "std_error"])


def cmd_scaling_hom(args) -> None:
    pair = parse_pair(args.f, args.g)
    fit = experiments.hom_density_scaling(get_motif(args.motif), _ints(args.sizes), pair, args.p,
                                          args.steps, args.replicas, args.seed)
    payload = _common(args)
    payload.update(pair=pair.describe(), motif=args.motif, p=args.p, fit=fit.to_dict())
    emit(args, payload, _fit_rows(fit), ["size", "estimate", "std_error"])


def cmd_diag(args) -> None:
    pair = parse_pair(args.f, args.g)
    rep = experiments.diagonal_concentration_run(args.n, pair, args.p, args.steps, args.seed, _floats(args.eps))
    rows = []
    for r in rep.rows:
        base = {"t": r["t"], "orbit": r["orbit"], "d_inf": r["d_inf"]}
        if not r["bounds"]:
            rows.append({**base, "eps": None, "bound": None, "probability": None, "vacuous": None})
        for b in r["bounds"]:
            rows.append({**base, **b})
    payload = _common(args)
    payload.update(rep.to_dict())
    payload.pop("rows")
    emit(args, payload, rows, ["t", "orbit", "d_inf", "eps", "bound", "probability", "vacuous"])


def cmd_chaos(args) -> None:
    rows = experiments.chaotic_showcase(args.n, args.p, args.steps, args.seed)
    payload = _common(args)
    payload["divergence_step"] = experiments.orbit_divergence(
        parse_pair("memoryless", "logistic:4"), args.p, args.p + args.dp, max(args.steps, 25)
    )
    emit(args, payload, rows, list(experiments.CHAOS_COLUMNS))


def cmd_linegraph(args) -> None:
    graph = parse_graph(args.graph, args.seed)
    lg = line_graph(graph)
    if args.format == "edgelist":
        text = dump_edge_list(lg.graph)
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        return
    rows = [{"line_vertex": i, "u": int(u), "v": int(v)} for i, (u, v) in enumerate(lg.edge_map)]
    payload = _common(args, graph)
    payload["line_graph"] = {"n_vertices": lg.graph.n_vertices, "min_degree": lg.graph.min_degree,
                             "edges": lg.graph.edges().tolist()}
    emit(args, payload, rows, ["line_vertex", "u", "v"])


# -- parser ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", help="edge-list path or gen:<kind>:<args>")
    common.add_argument("--f", default="voter-f", help="switch-off function, or 'memoryless' for 1-g")
    common.add_argument("--g", default="voter-g", help="switch-on function")
    common.add_argument("--init", default="bernoulli:0.5", help="all0 | all1 | bernoulli:p | file:<path>")
    common.add_argument("--steps", type=int, default=3, help="time horizon T")
    common.add_argument("--replicas", type=int, default=1000)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", choices=["csv", "json"], default="json")
    common.add_argument("--max-cells", type=int, default=DEFAULT_MAX_CELLS, help="cap on |V|*(T+1)*R")

    parser = argparse.ArgumentParser(prog="occupancy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="run an ensemble and summarise per step")
    p.set_defaults(func=cmd_simulate, needs_graph=True)

    p = sub.add_parser("bound", parents=[common], help="evaluate a bound as a report")
    p.add_argument("--kind", choices=bounds.KINDS, default="thm_main")
    p.add_argument("--vertex", type=int, default=0)
    p.add_argument("--M", type=float, default=None, help="override the Lipschitz constant")
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--lam", type=float, default=1.0)
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--eps", type=float, default=0.1)
    p.set_defaults(func=cmd_bound, needs_graph=False)

    p = sub.add_parser("oracle", parents=[common], help="exact expectations on small graphs")
    p.add_argument("--vertex", type=int, default=None)
    p.set_defaults(func=cmd_oracle, needs_graph=True)

    p = sub.add_parser("deviation", parents=[common], help="Monte Carlo deviation against its bound")
    p.add_argument("--vertex", type=int, default=0)
    p.add_argument("--motif", choices=["edge", "wedge", "triangle", "p3", "c4", "k4"], default=None)
    p.set_defaults(func=cmd_deviation, needs_graph=True)

    p = sub.add_parser("scaling-degree", parents=[common], help="deviation exponent in the minimum degree")
    p.add_argument("--family", choices=["complete", "cycle-power"], default="complete")
    p.add_argument("--sizes", default="9,17,33,65,129")
    p.set_defaults(func=cmd_scaling_degree, needs_graph=False)

    p = sub.add_parser("scaling-hom", parents=[common], help="hom-density deviation exponent on L(K_n)")
    p.add_argument("--motif", choices=["edge", "wedge", "triangle", "p3", "c4", "k4"], default="edge")
    p.add_argument("--sizes", default="10,20,40,80")
    p.add_argument("--p", type=float, default=0.3)
    p.set_defaults(func=cmd_scaling_hom, needs_graph=False)

    p = sub.add_parser("diag", parents=[common], help="diagonal concentration on L(K_n)")
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--p", type=float, default=0.3)
    p.add_argument("--eps", default="0.05,0.1,0.2,0.3")
    p.set_defaults(func=cmd_diag, needs_graph=False)

    p = sub.add_parser("chaos", parents=[common], help="logistic(4) dynamic random graph time series")
    p.add_argument("--n", type=int, default=40)
    p.add_argument("--p", type=float, default=0.3)
    p.add_argument("--dp", type=float, default=1e-4, help="offset of the companion orbit for divergence")
    p.set_defaults(func=cmd_chaos, needs_graph=False)

    p = sub.add_parser("linegraph", parents=[common], help="line graph and its edge map")
    p.set_defaults(func=cmd_linegraph, needs_graph=True)
    for action in p._actions:
        if action.dest == "format":
            action.choices = ["csv", "json", "edgelist"]
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.needs_graph and not args.graph:
        parser.error(f"{args.command} needs --graph")
    try:
        args.func(args)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (OccupancyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return 0


if __name__ == "__main__":
    sys.exit(main())
