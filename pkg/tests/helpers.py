"""Random instances shared by the test modules."""

import itertools

import numpy as np

from occupancy.graph import Graph
from occupancy.interaction import (
    InteractionPair,
    affine,
    constant,
    logistic,
    memoryless_pair,
    piecewise_linear,
)


def random_connected_graph(rng: np.random.Generator, n: int) -> Graph:
    """Random spanning tree plus independent extra edges."""
    while True:
        perm = rng.permutation(n)
        edges = {tuple(sorted((int(perm[i]), int(perm[rng.integers(0, i)])))) for i in range(1, n)}
        for u, v in itertools.combinations(range(n), 2):
            if rng.random() < 0.4:
                edges.add((u, v))
        g = Graph(n, sorted(edges))
        if g.is_connected():
            return g


def random_function(rng: np.random.Generator, max_lipschitz: float = 2.0):
    kind = rng.integers(0, 5)
    if kind == 0:
        return constant(float(rng.random()))
    if kind == 1:
        b = float(rng.random())
        hi = min(max_lipschitz, 1.0 - b)
        lo = max(-max_lipschitz, -b)
        return affine(float(rng.uniform(lo, hi)), b)
    if kind == 2:
        return logistic(float(rng.uniform(0, max_lipschitz)))
    if kind == 3:
        return logistic(float(rng.uniform(0, max_lipschitz))).complemented()
    # piecewise linear with slopes bounded by max_lipschitz
    xs = np.concatenate([[0.0], np.sort(rng.uniform(0.05, 0.95, size=2)), [1.0]])
    ys = [float(rng.random())]
    for a, b in zip(xs, xs[1:]):
        step = max_lipschitz * (b - a)
        ys.append(float(np.clip(ys[-1] + rng.uniform(-step, step), 0.0, 1.0)))
    return piecewise_linear(list(zip(xs.tolist(), ys)))


def random_pair(rng: np.random.Generator, max_lipschitz: float = 2.0) -> InteractionPair:
    if rng.random() < 0.25:
        return memoryless_pair(random_function(rng, max_lipschitz))
    return InteractionPair(random_function(rng, max_lipschitz), random_function(rng, max_lipschitz))
