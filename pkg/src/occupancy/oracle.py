"""Exact law of the occupancy process on small graphs.

Distributions are dense vectors over the ``2^|V|`` configurations, indexed by
bitmask (bit ``v`` is vertex ``v``).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .dynamics import check_state, deterministic_trajectory, neighborhood_averages, switch_on_probability
from .exceptions import ArgumentError, CapacityError, ValidationError
from .graph import Graph
from .interaction import InteractionPair
from .observables import Polynomial, evaluate_polynomial

MAX_VERTICES = 20
# source states processed together; bounds the (chunk, 2^n) work array
_CHUNK_ENTRIES = 1 << 22


def _check_size(graph: Graph) -> None:
    if graph.n_vertices > MAX_VERTICES:
        raise CapacityError(f"exact oracle is capped at {MAX_VERTICES} vertices, got {graph.n_vertices}")


def state_bits(n: int) -> np.ndarray:
    """``(2^n, n)`` bool matrix; row ``s`` is configuration ``s``."""
    s = np.arange(1 << n, dtype=np.int64)
    return ((s[:, None] >> np.arange(n)) & 1).astype(bool)


def bitmask(state) -> int:
    return int(sum(1 << v for v, b in enumerate(np.asarray(state, dtype=bool)) if b))


def point_mass(graph: Graph, state) -> np.ndarray:
    _check_size(graph)
    dist = np.zeros(1 << graph.n_vertices)
    dist[bitmask(check_state(graph, state))] = 1.0
    return dist


def check_distribution(dist, n: int) -> np.ndarray:
    arr = np.asarray(dist, dtype=np.float64)
    if arr.shape != (1 << n,):
        raise ValidationError(f"distribution must have length 2^{n}")
    if arr.min() < 0 or abs(arr.sum() - 1.0) > 1e-12:
        raise ValidationError("distribution must be non-negative and sum to 1")
    return arr


class ExactChain:
    """Per-graph cache of configuration bits and switch-on probabilities."""

    def __init__(self, graph: Graph, pair: InteractionPair):
        _check_size(graph)
        graph.require_no_isolated()
        self.graph = graph
        self.pair = pair
        self.n = graph.n_vertices

    @cached_property
    def bits(self) -> np.ndarray:
        return state_bits(self.n)

    @cached_property
    def on_prob(self) -> np.ndarray:
        """``(2^n, n)``: probability vertex ``v`` is 1 next, from each source state."""
        return switch_on_probability(self.graph, self.pair, self.bits)

    @cached_property
    def neighborhood(self) -> np.ndarray:
        """``(2^n, n)`` neighbourhood averages of every configuration."""
        return neighborhood_averages(self.graph, self.bits)

    @cached_property
    def matrix(self) -> np.ndarray:
        """Dense ``2^n x 2^n`` transition matrix; only sensible for small ``n``."""
        return _transition_matrix(self.on_prob)

    def step(self, dist) -> np.ndarray:
        dist = np.asarray(dist, dtype=np.float64)
        if self.n <= 10:
            return dist @ self.matrix
        return _push(self.on_prob, dist)

    def distributions(self, x0, t: int) -> list[np.ndarray]:
        """Laws of ``X(0..t)`` from the point mass at ``x0``."""
        dists = [point_mass(self.graph, x0)]
        for _ in range(t):
            dists.append(self.step(dists[-1]))
        return dists


def _transition_matrix(on_prob: np.ndarray) -> np.ndarray:
    """Row ``s`` is the product law over targets from source state ``s``.

    Target bit ``v`` is vertex ``v``: each vertex doubles the width, off half first.
    """
    acc = np.ones((on_prob.shape[0], 1))
    for v in range(on_prob.shape[1]):
        pv = on_prob[:, v:v + 1]
        acc = np.concatenate([acc * (1.0 - pv), acc * pv], axis=1)
    return acc


def _push(on_prob: np.ndarray, dist: np.ndarray) -> np.ndarray:
    """``dist @ T`` without materialising ``T``, chunked over source states."""
    n = on_prob.shape[1]
    size = 1 << n
    out = np.zeros(size)
    chunk = max(1, _CHUNK_ENTRIES // size)
    live = np.flatnonzero(dist)
    for lo in range(0, live.shape[0], chunk):
        src = live[lo:lo + chunk]
        acc = dist[src][:, None]
        for v in range(n):
            pv = on_prob[src, v:v + 1]
            acc = np.concatenate([acc * (1.0 - pv), acc * pv], axis=1)
        out += acc.sum(axis=0)
    return out


def exact_step(graph: Graph, pair: InteractionPair, dist) -> np.ndarray:
    """One step of the chain: independent per-vertex updates from each source state."""
    _check_size(graph)
    dist = check_distribution(dist, graph.n_vertices)
    return _push(ExactChain(graph, pair).on_prob, dist)


def exact_vertex_expectation(dist, v: int) -> float:
    dist = np.asarray(dist, dtype=np.float64)
    n = dist.shape[0].bit_length() - 1
    if not 0 <= v < n:
        raise ArgumentError(f"vertex {v} out of range")
    mask = (np.arange(dist.shape[0]) >> v) & 1
    return float(dist[mask.astype(bool)].sum())


def exact_expectations(dist, n: int) -> np.ndarray:
    """``E X_v`` for all vertices at once."""
    return np.asarray(dist) @ state_bits(n)


def exact_neighborhood_deviation(chain: ExactChain, dist, x) -> np.ndarray:
    """``E|X_{N_v} - x_{N_v}|`` for every ``v`` under ``dist``."""
    xn = neighborhood_averages(chain.graph, x)
    return np.asarray(dist) @ np.abs(chain.neighborhood - xn)


def exact_observable_deviation(graph: Graph, pair: InteractionPair, x0, p: Polynomial, t: int) -> float:
    """``E|P(X(t)) - P(x(t))|`` from the point mass at ``x0``."""
    if t < 0:
        raise ArgumentError("t must be non-negative")
    chain = ExactChain(graph, pair)
    if t * (1 << graph.n_vertices) > 1 << 26:
        raise CapacityError("t * 2^|V| exceeds the oracle budget")
    dist = chain.distributions(x0, t)[-1]
    x = deterministic_trajectory(graph, pair, check_state(graph, x0).astype(float), t)[-1]
    return float(dist @ np.abs(evaluate_polynomial(p, chain.bits) - evaluate_polynomial(p, x)))


@dataclass
class OracleRecord:
    t: int
    expectation: np.ndarray
    deterministic: np.ndarray
    neighborhood_deviation: np.ndarray


def exact_records(graph: Graph, pair: InteractionPair, x0, t_max: int) -> list[OracleRecord]:
    chain = ExactChain(graph, pair)
    dists = chain.distributions(x0, t_max)
    xs = deterministic_trajectory(graph, pair, check_state(graph, x0).astype(float), t_max)
    return [
        OracleRecord(t, dists[t] @ chain.bits, xs[t], exact_neighborhood_deviation(chain, dists[t], xs[t]))
        for t in range(t_max + 1)
    ]
