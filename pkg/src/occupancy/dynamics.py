"""Stochastic occupancy process and its deterministic companion.

Both updates are synchronous: every neighbourhood average is taken from the
pre-step configuration and a fresh output buffer is written.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import ArgumentError, CapacityError, ValidationError
from .graph import Graph
from .interaction import InteractionPair, gamma
from .rng import INIT_STREAM, stream
from .validation import check_density, check_state

#: default ceiling on ``|V| * (T + 1) * R`` for one ensemble
DEFAULT_MAX_CELLS = 200_000_000
WORKERS_ENV = "OCCUPANCY_WORKERS"

# replicas per block; fixed so results never depend on the worker count
_BLOCK_CELLS = 4_000_000


def neighborhood_average(graph: Graph, state, v: int) -> float:
    if graph.degree[v] == 0:
        raise ValidationError(f"vertex {v} is isolated")
    arr = np.asarray(state, dtype=np.float64)
    return float(arr[graph.neighbors(v)].mean())


def neighborhood_averages(graph: Graph, states) -> np.ndarray:
    """``X_{N_v}`` for every vertex; accepts ``(n,)`` or ``(R, n)`` input.

    Constant configurations map to themselves exactly; elsewhere the sparse
    product agrees with the neighbourhood mean up to rounding.
    """
    A = graph.averaging_operator()
    arr = np.asarray(states, dtype=np.float64)
    out = A @ arr if arr.ndim == 1 else (A @ arr.T).T
    out = np.clip(out, 0.0, 1.0)
    if arr.shape[-1]:
        flat = arr.min(axis=-1) == arr.max(axis=-1)
        if flat.any():
            if arr.ndim == 1:
                out[:] = arr[0]
            else:
                out[flat] = arr[flat, :1]
    return out


def switch_on_probability(graph: Graph, pair: InteractionPair, states) -> np.ndarray:
    """``P(X_v(t+1) = 1 | X(t))`` per vertex, i.e. ``gamma(X_v, X_{N_v})``."""
    return gamma(pair, np.asarray(states, dtype=np.float64), neighborhood_averages(graph, states))


def stochastic_step(graph: Graph, pair: InteractionPair, state, rng: np.random.Generator) -> np.ndarray:
    """One synchronous update; one uniform per vertex, drawn in vertex order."""
    state = check_state(graph, state)
    u = rng.random(state.shape)
    return _stochastic_step(graph, pair, state, u)


def _stochastic_step(graph, pair, state, u):
    # a 1 stays on with prob 1-f, a 0 turns on with prob g; both equal gamma(X_v, X_{N_v})
    return u < switch_on_probability(graph, pair, state)


def deterministic_step(graph: Graph, pair: InteractionPair, x) -> np.ndarray:
    x = check_density(graph, x)
    return switch_on_probability(graph, pair, x)


def deterministic_trajectory(graph: Graph, pair: InteractionPair, x0, steps: int) -> np.ndarray:
    """``(steps + 1, n)`` array (or ``(R, steps + 1, n)`` for a batch of starts)."""
    if steps < 0:
        raise ArgumentError("steps must be non-negative")
    x = check_density(graph, x0)
    graph.require_no_isolated()
    out = np.empty(x.shape[:-1] + (steps + 1, graph.n_vertices))
    out[..., 0, :] = x
    for t in range(steps):
        x = switch_on_probability(graph, pair, x)
        out[..., t + 1, :] = x
    return out


def sample_bernoulli_state(n: int, p: float, seed: int, stream_index: int = INIT_STREAM) -> np.ndarray:
    if not 0.0 <= p <= 1.0:
        raise ArgumentError("p outside [0, 1]")
    return stream(seed, stream_index).random(n) < p


def parse_initial_state(spec: str, n: int, seed: int) -> np.ndarray:
    """``all0``, ``all1``, ``bernoulli:p`` (reserved stream), ``file:<path>`` (one bit per line)."""
    s = spec.strip()
    if s == "all0":
        return np.zeros(n, dtype=bool)
    if s == "all1":
        return np.ones(n, dtype=bool)
    kind, _, body = s.partition(":")
    if kind == "bernoulli":
        try:
            p = float(body)
        except ValueError:
            raise ArgumentError(f"bad initial state {spec!r}") from None
        return sample_bernoulli_state(n, p, seed)
    if kind == "file":
        with open(body) as fh:
            bits = [ln.strip() for ln in fh if ln.strip()]
        if len(bits) != n or any(b not in ("0", "1") for b in bits):
            raise ValidationError(f"{body}: expected {n} lines of 0/1")
        return np.array([b == "1" for b in bits])
    raise ArgumentError(f"unknown initial state {spec!r}")


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ArgumentError(f"{WORKERS_ENV}={raw!r} is not an integer") from None


@dataclass(frozen=True)
class TrajectoryEnsemble:
    """``R`` stochastic trajectories plus their deterministic companions.

    Stochastic states are bit-packed along the vertex axis. ``deterministic``
    is ``(T+1, n)`` for a shared start, ``(R, T+1, n)`` when each replica drew
    its own initial state.
    """

    n_vertices: int
    packed: np.ndarray  # (R, T+1, ceil(n/8)) uint8
    deterministic: np.ndarray
    seed: int

    @property
    def replicas(self) -> int:
        return self.packed.shape[0]

    @property
    def steps(self) -> int:
        return self.packed.shape[1] - 1

    def states(self, t: int) -> np.ndarray:
        """``(R, n)`` bool states at time ``t``."""
        return np.unpackbits(self.packed[:, t], axis=-1, count=self.n_vertices).astype(bool)

    def densities(self, t: int) -> np.ndarray:
        """Deterministic state at ``t``, broadcastable against :meth:`states`."""
        if self.deterministic.ndim == 2:
            return self.deterministic[t]
        return self.deterministic[:, t]


def run_trajectories(
    graph: Graph,
    pair: InteractionPair,
    x0=None,
    steps: int = 1,
    replicas: int = 1,
    seed: int = 0,
    *,
    init_p: Optional[float] = None,
    max_cells: int = DEFAULT_MAX_CELLS,
    workers: Optional[int] = None,
) -> TrajectoryEnsemble:
    """Simulate ``replicas`` independent trajectories of ``steps`` steps.

    Replica ``r`` draws from stream ``(seed, r)``. With ``init_p`` set, each
    replica first samples its own ``X(0) ~ Bernoulli(init_p)`` from that stream
    and the deterministic process starts from the same configuration;
    otherwise every replica starts from ``x0``.
    """
    if steps < 0:
        raise ArgumentError("steps must be non-negative")
    if replicas < 1:
        raise ArgumentError("replicas must be >= 1")
    graph.require_no_isolated()
    n = graph.n_vertices
    cells = n * (steps + 1) * replicas
    if cells > max_cells:
        raise CapacityError(f"|V|*(T+1)*R = {cells} exceeds cap {max_cells}")
    if init_p is None:
        if x0 is None:
            raise ArgumentError("either x0 or init_p is required")
        x0 = check_state(graph, x0)
        if x0.ndim != 1:
            raise ValidationError("x0 must be a single configuration")
    elif not 0.0 <= init_p <= 1.0:
        raise ArgumentError("init_p outside [0, 1]")

    nbytes = (n + 7) // 8
    packed = np.empty((replicas, steps + 1, nbytes), dtype=np.uint8)
    shared_det = None
    if init_p is None:
        shared_det = deterministic_trajectory(graph, pair, x0.astype(np.float64), steps)
        det = shared_det
    else:
        det = np.empty((replicas, steps + 1, n))

    block = max(1, _BLOCK_CELLS // max(1, n * (steps + 1)))
    starts = list(range(0, replicas, block))

    def run_block(lo: int) -> None:
        hi = min(replicas, lo + block)
        draws = steps + (0 if init_p is None else 1)
        u = np.empty((hi - lo, draws, n))
        for i, r in enumerate(range(lo, hi)):
            u[i] = stream(seed, r).random((draws, n))
        if init_p is None:
            X = np.broadcast_to(x0, (hi - lo, n)).copy()
            off = 0
        else:
            X = u[:, 0] < init_p
            off = 1
            det[lo:hi] = deterministic_trajectory(graph, pair, X.astype(np.float64), steps)
        packed[lo:hi, 0] = np.packbits(X, axis=-1)
        for t in range(steps):
            X = _stochastic_step(graph, pair, X, u[:, off + t])
            packed[lo:hi, t + 1] = np.packbits(X, axis=-1)

    nworkers = worker_count() if workers is None else max(1, int(workers))
    if nworkers == 1 or len(starts) == 1:
        for lo in starts:
            run_block(lo)
    else:
        with ThreadPoolExecutor(max_workers=nworkers) as pool:
            list(pool.map(run_block, starts))
    return TrajectoryEnsemble(n, packed, det, seed)
