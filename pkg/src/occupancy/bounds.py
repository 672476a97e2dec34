"""Numerical right-hand sides of the concentration bounds.

Each evaluator returns a plain float; :func:`bound_report` collects a series
over ``t`` together with the inputs that produced it.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .exceptions import ArgumentError
from .graph import Graph, WalkDistribution, walk_distribution
from .interaction import InteractionPair, theta

MAX_T = 60
KINDS = ("thm_main", "thm_main_simplified", "thm_poly", "cor_meanfield", "prop_diag")


def _check_t(t: int) -> None:
    if t < 0:
        raise ArgumentError("t must be non-negative")
    if t > MAX_T:
        raise ArgumentError(f"t is capped at {MAX_T}")


def walk_bracket(graph: Graph, wd: WalkDistribution, s: int) -> float:
    """Expected ``deg(w)^{-1/2}`` of a walker ``s`` steps after leaving ``wd.source``."""
    row = wd.rows[s]
    support = row > 0
    if (graph.degree[support] == 0).any():
        raise ArgumentError("walk reaches an isolated vertex")
    return float(row[support] @ (1.0 / np.sqrt(graph.degree[support])))


def thm_main_from_brackets(brackets, M: float, t: int) -> float:
    """``sum_{s<t} C(t, s+1) * brackets[s] * M^s`` (with ``0^0 = 1``)."""
    _check_t(t)
    total = 0.0
    for s in range(t):
        total += math.comb(t, s + 1) * float(brackets[s]) * (M**s if s else 1.0)
    return total


def thm_main_bound(graph: Graph, wd: WalkDistribution, M: float, t: int) -> float:
    """Random-walk bound on ``E|X_{N_v}(t) - x_{N_v}(t)|`` for ``v = wd.source``."""
    _check_t(t)
    if M < 0:
        raise ArgumentError("M must be non-negative")
    if t > 0 and wd.max_steps < t - 1:
        raise ArgumentError(f"walk distribution has {wd.max_steps + 1} rows, need {t}")
    return thm_main_from_brackets([walk_bracket(graph, wd, s) for s in range(t)], M, t)


def growth_constant(M: float, t: int) -> float:
    """``((M+1)^t - 1) / M``, equal to ``sum_{s<t} C(t, s+1) M^s``; ``t`` at ``M = 0``."""
    _check_t(t)
    if M < 0:
        raise ArgumentError("M must be non-negative")
    # the binomial form is exact and avoids cancellation for small M
    return float(sum(math.comb(t, s + 1) * (M**s if s else 1.0) for s in range(t)))


def thm_main_simplified(delta: int, M: float, t: int) -> float:
    """Minimum-degree bound ``C * delta^{-1/2}`` with ``C = ((M+1)^t - 1) / M``."""
    if delta < 1:
        raise ArgumentError("minimum degree must be >= 1")
    return growth_constant(M, t) / math.sqrt(delta)


def thm_poly_bound(d: int, M: float, lam: float, rho: float, t: int) -> float:
    """``2 rho sum_{s<t} 2^{ds} (1 + M lam)^s`` for degree-``d`` observables."""
    _check_t(t)
    if d < 1:
        raise ArgumentError("degree d must be >= 1")
    if min(M, lam, rho) < 0:
        raise ArgumentError("M, lambda and rho must be non-negative")
    ratio = 2.0**d * (1.0 + M * lam)
    return 2.0 * rho * sum(ratio**s for s in range(t))


def cor_meanfield_from_brackets(brackets, M: float, t: int) -> float:
    _check_t(t)
    return sum(thm_main_from_brackets(brackets, M, r) for r in range(t))


def cor_meanfield_bound(graph: Graph, wd: WalkDistribution, M: float, t: int) -> float:
    """Bound on ``|E X_v(t) - x_v(t)|``: the main bound summed over ``r < t``."""
    _check_t(t)
    if t > 1 and wd.max_steps < t - 2:
        raise ArgumentError(f"walk distribution has {wd.max_steps + 1} rows, need {t - 1}")
    brackets = [walk_bracket(graph, wd, s) for s in range(max(t - 1, 0))]
    return cor_meanfield_from_brackets(brackets, M, t)


def diag_probability(n_vertices: int, delta: int, eps: float) -> float:
    """``max(0, 1 - 2|V| exp(-2 delta eps^2))``."""
    return max(0.0, 1.0 - 2.0 * n_vertices * math.exp(-2.0 * delta * eps * eps))


def prop_diag_bound(graph: Graph, pair: InteractionPair, p: float, eps: float, t: int) -> tuple[float, float]:
    """``(q*theta + M*eps) * exp(2M(t-1))`` and the probability it holds with."""
    if t < 1:
        raise ArgumentError("diagonal bound is stated for t >= 1")
    if not 0.0 <= p <= 1.0:
        raise ArgumentError("p outside [0, 1]")
    if eps <= 0:
        raise ArgumentError("eps must be positive")
    q = max(p, 1.0 - p)
    M = pair.M
    bound = (q * theta(pair, p) + M * eps) * math.exp(2.0 * M * (t - 1))
    return bound, diag_probability(graph.n_vertices, graph.min_degree, eps)


def diag_distance(x, c: float) -> float:
    """Sup-norm distance from ``x`` to the constant vector ``c * 1``."""
    if not 0.0 <= c <= 1.0:
        raise ArgumentError("c outside [0, 1]")
    arr = np.asarray(x, dtype=np.float64)
    return float(np.abs(arr - c).max()) if arr.size else 0.0


@dataclass
class BoundReport:
    kind: str
    inputs: dict
    values: list
    probability: Optional[float] = None
    vacuous: bool = False
    t: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def bound_report(
    kind: str,
    *,
    graph: Optional[Graph] = None,
    pair: Optional[InteractionPair] = None,
    M: Optional[float] = None,
    vertex: int = 0,
    t_max: int = 1,
    d: int = 1,
    lam: float = 1.0,
    rho: float = 1.0,
    p: float = 0.5,
    eps: float = 0.1,
) -> BoundReport:
    """Evaluate one bound for ``t = 0..t_max`` (``1..t_max`` for ``prop_diag``)."""
    if kind not in KINDS:
        raise ArgumentError(f"unknown bound kind {kind!r}")
    if M is None:
        if pair is None:
            raise ArgumentError("either M or an interaction pair is required")
        M = pair.M
    inputs: dict = {"M": M, "t_max": t_max}
    if graph is not None:
        inputs.update(graph=graph.name or "<graph>", n_vertices=graph.n_vertices, min_degree=graph.min_degree)
    if pair is not None:
        inputs["pair"] = pair.describe()
    ts = list(range(t_max + 1))
    probability = None
    vacuous = False
    if kind in ("thm_main", "cor_meanfield"):
        if graph is None:
            raise ArgumentError(f"{kind} needs a graph")
        inputs["vertex"] = vertex
        wd = walk_distribution(graph, vertex, max(t_max - 1, 0))
        fn = thm_main_bound if kind == "thm_main" else cor_meanfield_bound
        values = [fn(graph, wd, M, t) for t in ts]
    elif kind == "thm_main_simplified":
        if graph is None:
            raise ArgumentError(f"{kind} needs a graph")
        values = [thm_main_simplified(graph.min_degree, M, t) for t in ts]
    elif kind == "thm_poly":
        inputs.update(d=d, lam=lam, rho=rho)
        values = [thm_poly_bound(d, M, lam, rho, t) for t in ts]
    else:
        if graph is None or pair is None:
            raise ArgumentError("prop_diag needs a graph and an interaction pair")
        inputs.update(p=p, eps=eps)
        ts = list(range(1, t_max + 1))
        values = []
        for t in ts:
            b, probability = prop_diag_bound(graph, pair, p, eps, t)
            values.append(b)
        if probability is None:
            probability = diag_probability(graph.n_vertices, graph.min_degree, eps)
        vacuous = probability <= 0.0
    return BoundReport(kind, inputs, values, probability, vacuous, ts)
