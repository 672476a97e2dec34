"""Monte Carlo deviation estimates, scaling studies and showcase runs."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import bounds
from .dynamics import (
    TrajectoryEnsemble,
    deterministic_trajectory,
    neighborhood_averages,
    run_trajectories,
    sample_bernoulli_state,
)
from .exceptions import ArgumentError
from .graph import Graph, complete_graph, cycle_graph, cycle_power, erdos_renyi, line_graph_complete, walk_brackets
from .interaction import InteractionPair, constant, gamma_tilde_orbit, memoryless_logistic, theta, voter_pair
from .observables import (
    Motif,
    Polynomial,
    edge_state_adjacency,
    evaluate_polynomial,
    get_motif,
    homomorphism_density,
    motif_polynomial,
)
from .rng import INIT_STREAM, derive_seed

#: acceptance windows for fitted exponents; policy values, echoed in reports
SLOPE_WINDOWS = {
    "degree": {"min": -0.6, "max": -0.4, "min_r_squared": 0.9},
    "hom": {"max": -0.8},
}
#: statistical slack on dominance checks, in standard errors
SIGMA_SLACK = 4.0


@dataclass
class DeviationEstimate:
    mean: float
    std_error: float
    replicas: int
    label: str = ""

    def upper(self, k: float = SIGMA_SLACK) -> float:
        return self.mean + k * self.std_error


def estimate_from_samples(samples, label: str = "") -> DeviationEstimate:
    """Sample mean and ``std / sqrt(R)`` along the first axis."""
    arr = np.asarray(samples, dtype=np.float64)
    if arr.shape[0] < 2:
        raise ArgumentError("at least 2 replicas are needed for a standard error")
    R = arr.shape[0]
    return DeviationEstimate(float(arr.mean(axis=0)), float(arr.std(axis=0, ddof=1) / math.sqrt(R)), R, label)


def _child_seed(seed: int, k: int) -> int:
    # keeps per-size runs of a study independent of each other
    return derive_seed(seed, (1 << 40) + k) & ((1 << 63) - 1)


# -- deviation estimators --------------------------------------------------------

def neighborhood_deviation_samples(graph: Graph, ens: TrajectoryEnsemble, t: int) -> np.ndarray:
    """``(R, n)`` values of ``|X_{N_v}(t) - x_{N_v}(t)|``."""
    states = ens.states(t)
    X = neighborhood_averages(graph, states)
    x = neighborhood_averages(graph, np.broadcast_to(ens.densities(t), states.shape))
    return np.abs(X - x)


def estimate_neighborhood_deviation(
    graph: Graph, pair: InteractionPair, x0, v: int, t: int, replicas: int, seed: int, **kw
) -> DeviationEstimate:
    ens = run_trajectories(graph, pair, x0, t, replicas, seed, **kw)
    dev = neighborhood_deviation_samples(graph, ens, t)[:, v]
    return estimate_from_samples(dev, f"E|X_N(t)-x_N(t)| v={v} t={t}")


def polynomial_deviation_samples(p: Polynomial, ens: TrajectoryEnsemble, t: int) -> np.ndarray:
    states = ens.states(t)
    X = evaluate_polynomial(p, states)
    x = evaluate_polynomial(p, np.broadcast_to(ens.densities(t), states.shape))
    return np.abs(X - x)


def estimate_polynomial_deviation(
    graph: Graph, pair: InteractionPair, x0, p: Polynomial, t: int, replicas: int, seed: int, **kw
) -> DeviationEstimate:
    ens = run_trajectories(graph, pair, x0, t, replicas, seed, **kw)
    return estimate_from_samples(polynomial_deviation_samples(p, ens, t), f"E|P(X(t))-P(x(t))| d={p.degree} t={t}")


# -- standard sweep ----------------------------------------------------------------

@dataclass
class SweepRecord:
    graph: str
    pair: str
    observable: str
    t: int
    mean: float
    std_error: float
    bound: float
    replicas: int

    @property
    def ok(self) -> bool:
        return self.mean >= 0 and self.mean + SIGMA_SLACK * self.std_error <= self.bound


def standard_graphs(seed: int = 0) -> list[Graph]:
    return [
        cycle_graph(100),
        complete_graph(20),
        erdos_renyi(200, 0.1, seed),
        line_graph_complete(10).graph,
    ]


def standard_pairs() -> list[InteractionPair]:
    return [
        voter_pair(),
        memoryless_logistic(4.0),
        InteractionPair(constant(0.3), constant(0.3), name="constant(0.3)"),
    ]


def standard_sweep(
    replicas: int = 2000,
    seed: int = 0,
    t_max: int = 5,
    graphs: Optional[Sequence[Graph]] = None,
    pairs: Optional[Sequence[InteractionPair]] = None,
    motifs: Sequence[str] = ("edge", "triangle"),
) -> list[SweepRecord]:
    """Compare Monte Carlo deviations with their bounds on every graph/pair/t.

    Every vertex's neighbourhood deviation is compared with its own random-walk
    bound; the record keeps the vertex with the smallest margin. Line graphs of
    complete graphs also get motif polynomials, checked against the
    polynomial bound.
    """
    graphs = standard_graphs(seed) if graphs is None else graphs
    pairs = standard_pairs() if pairs is None else pairs
    records = []
    for gi, graph in enumerate(graphs):
        x0 = sample_bernoulli_state(graph.n_vertices, 0.5, _child_seed(seed, gi))
        brackets = walk_brackets(graph, t_max)
        polys = {}
        kn = _line_graph_order(graph)
        if kn is not None:
            polys = {m: motif_polynomial(get_motif(m), kn) for m in motifs}
        for pi, pair in enumerate(pairs):
            ens = run_trajectories(graph, pair, x0, t_max, replicas, _child_seed(seed, 1000 * gi + pi + 1))
            for t in range(1, t_max + 1):
                dev = neighborhood_deviation_samples(graph, ens, t)
                mean = dev.mean(axis=0)
                se = dev.std(axis=0, ddof=1) / math.sqrt(replicas)
                bnd = np.array([bounds.thm_main_from_brackets(brackets[:, v], pair.M, t) for v in range(graph.n_vertices)])
                worst = int(np.argmax(mean + SIGMA_SLACK * se - bnd))
                records.append(
                    SweepRecord(graph.name, pair.name, f"neighborhood[v={worst}]", t,
                                float(mean[worst]), float(se[worst]), float(bnd[worst]), replicas)
                )
                for m, P in polys.items():
                    est = estimate_from_samples(polynomial_deviation_samples(P, ens, t))
                    b = bounds.thm_poly_bound(P.degree, pair.M, P.l1, P.l2, t)
                    records.append(SweepRecord(graph.name, pair.name, f"motif[{m}]", t, est.mean, est.std_error, b, replicas))
    return records


def _line_graph_order(graph: Graph) -> Optional[int]:
    """``n`` if ``graph`` is named as the line graph of ``K_n``."""
    if graph.name.startswith("L(K") and graph.name.endswith(")"):
        try:
            return int(graph.name[3:-1])
        except ValueError:
            return None
    return None


# -- scaling studies ------------------------------------------------------------------

@dataclass
class ScalingFit:
    points: list
    slope: float
    intercept: float
    r_squared: float
    degenerate: bool = False
    estimates: list = field(default_factory=list)
    window: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def fit_loglog(points) -> ScalingFit:
    """OLS of ``log estimate`` on ``log size``; needs at least 4 points."""
    pts = [(float(x), float(y)) for x, y in points]
    if len(pts) < 4:
        raise ArgumentError("a scaling fit needs at least 4 points")
    xs = np.array([x for x, _ in pts])
    ys = np.array([y for _, y in pts])
    if (xs <= 0).any() or (ys <= 0).any() or not np.isfinite(ys).all():
        return ScalingFit(pts, float("nan"), float("nan"), float("nan"), degenerate=True)
    lx, ly = np.log(xs), np.log(ys)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(((ly - ly.mean()) ** 2).sum())
    r2 = 1.0 - float((resid**2).sum()) / ss_tot if ss_tot > 0 else float("nan")
    return ScalingFit(pts, float(slope), float(intercept), r2)


def degree_family(family: str, size: int) -> Graph:
    """``complete``: ``K_size``; ``cycle-power``: ``C_{4k+1}^k`` with ``k = size``."""
    if family == "complete":
        return complete_graph(size)
    if family == "cycle-power":
        return cycle_power(4 * size + 1, size)
    raise ArgumentError(f"unknown graph family {family!r}")


def degree_scaling_study(
    family: str,
    sizes: Sequence[int],
    pair: InteractionPair,
    t: int,
    replicas: int,
    seed: int,
    init_p: float = 0.5,
) -> ScalingFit:
    """Fit the deviation of neighbourhood averages against the minimum degree.

    Each replica starts from its own i.i.d. Bernoulli(``init_p``) configuration
    shared by both processes; the per-replica value is the vertex average of
    ``|X_{N_v}(t) - x_{N_v}(t)|``.
    """
    if len(sizes) < 4:
        raise ArgumentError("degree scaling needs at least 4 sizes")
    points, estimates = [], []
    for k, size in enumerate(sizes):
        graph = degree_family(family, size)
        ens = run_trajectories(graph, pair, None, t, replicas, _child_seed(seed, k), init_p=init_p)
        est = estimate_from_samples(
            neighborhood_deviation_samples(graph, ens, t).mean(axis=1),
            f"{graph.name} t={t} vertex-mean E|X_N-x_N|",
        )
        estimates.append(asdict(est))
        points.append((graph.min_degree, est.mean))
    fit = fit_loglog(points)
    fit.estimates = estimates
    fit.window = dict(SLOPE_WINDOWS["degree"])
    return fit


def hom_density_samples(motif: Motif, ens: TrajectoryEnsemble, n: int, t: int) -> np.ndarray:
    """``|t(F, X(t)) - t(F, x(t))|`` per replica on ``L(K_n)``."""
    X = homomorphism_density(motif, edge_state_adjacency(ens.states(t), n))
    x = homomorphism_density(motif, edge_state_adjacency(ens.densities(t), n))
    return np.abs(np.asarray(X) - np.asarray(x))


def hom_density_scaling(
    motif: Motif,
    sizes: Sequence[int],
    pair: InteractionPair,
    p: float,
    t: int,
    replicas: int,
    seed: int,
) -> ScalingFit:
    """Fit ``E|t(F, X(t)) - t(F, x(t))|`` on ``L(K_n)`` against ``n``, with ``x(0) = X(0) ~ Bernoulli(p)``."""
    if len(sizes) < 4:
        raise ArgumentError("hom-density scaling needs at least 4 sizes")
    points, estimates = [], []
    for k, n in enumerate(sizes):
        lg = line_graph_complete(n).graph
        ens = run_trajectories(lg, pair, None, t, replicas, _child_seed(seed, k), init_p=p)
        est = estimate_from_samples(hom_density_samples(motif, ens, n, t), f"{motif.name} n={n} t={t}")
        estimates.append(asdict(est))
        points.append((n, est.mean))
    fit = fit_loglog(points)
    fit.estimates = estimates
    fit.window = dict(SLOPE_WINDOWS["hom"])
    return fit


# -- diagonal concentration ------------------------------------------------------------

@dataclass
class DiagReport:
    n: int
    p: float
    pair: dict
    theta: float
    initial_eps: float
    first_step_ok: bool
    rows: list  # per t: {"t", "orbit", "d_inf", "bounds": [{"eps", "bound", "probability", "vacuous"}]}

    def to_dict(self) -> dict:
        return asdict(self)

    def d_inf(self) -> list[float]:
        return [r["d_inf"] for r in self.rows]


def diagonal_concentration_run(
    n: int,
    pair: InteractionPair,
    p: float,
    t_max: int,
    seed: int,
    eps_grid: Sequence[float] = (0.05, 0.1, 0.2, 0.3),
) -> DiagReport:
    """Distance of ``x(t)`` from ``orbit(t) * 1`` on ``L(K_n)`` with ``x(0) ~ Bernoulli(p)``."""
    if n < 3:
        raise ArgumentError("diagonal run needs n >= 3")
    lg = line_graph_complete(n).graph
    x0 = sample_bernoulli_state(lg.n_vertices, p, seed, INIT_STREAM).astype(np.float64)
    xs = deterministic_trajectory(lg, pair, x0, t_max)
    orbit = gamma_tilde_orbit(pair, p, t_max)
    th = theta(pair, p)
    q = max(p, 1.0 - p)
    eps0 = float(np.abs(neighborhood_averages(lg, x0) - p).max())
    rows = []
    for t in range(t_max + 1):
        row = {"t": t, "orbit": orbit[t], "d_inf": bounds.diag_distance(xs[t], orbit[t]), "bounds": []}
        if t >= 1:
            for eps in eps_grid:
                b, prob = bounds.prop_diag_bound(lg, pair, p, eps, t)
                row["bounds"].append({"eps": eps, "bound": b, "probability": prob, "vacuous": prob <= 0.0})
        rows.append(row)
    ok = True
    if t_max >= 1:
        ok = rows[1]["d_inf"] <= q * th + pair.M * eps0 + 1e-12
    return DiagReport(n, p, pair.describe(), th, eps0, bool(ok), rows)


# -- chaotic showcase ------------------------------------------------------------------------

CHAOS_COLUMNS = ("t", "edge_density", "orbit", "triangle_density", "orbit_cubed")


def chaotic_showcase(n: int, p: float, t_max: int, seed: int, r: float = 4.0) -> list[dict]:
    """One stochastic run of the memoryless logistic pair on ``L(K_n)``.

    ``edge_density`` is the fraction of the ``C(n, 2)`` pairs present and
    ``triangle_density`` is ``t(K_3, X(t))``.
    """
    pair = memoryless_logistic(r)
    lg = line_graph_complete(n).graph
    ens = run_trajectories(lg, pair, None, t_max, 1, seed, init_p=p)
    orbit = gamma_tilde_orbit(pair, p, t_max)
    tri = get_motif("triangle")
    rows = []
    for t in range(t_max + 1):
        X = ens.states(t)[0]
        rows.append({
            "t": t,
            "edge_density": float(X.mean()),
            "orbit": orbit[t],
            "triangle_density": homomorphism_density(tri, edge_state_adjacency(X, n)),
            "orbit_cubed": orbit[t] ** 3,
        })
    return rows


def orbit_divergence(pair: InteractionPair, p1: float, p2: float, t_max: int, threshold: float = 0.1) -> Optional[int]:
    """First ``t`` at which the two diagonal orbits differ by more than ``threshold``."""
    a = gamma_tilde_orbit(pair, p1, t_max)
    b = gamma_tilde_orbit(pair, p2, t_max)
    for t, (u, v) in enumerate(zip(a, b)):
        if abs(u - v) > threshold:
            return t
    return None
