"""scikit-learn compatible wrappers.

:class:`OccupancyProcess` is fitted on a graph and transforms a batch of
initial configurations (one per row) into their state after ``steps`` steps.
Parameters follow the scikit-learn conventions, so estimators can be cloned
and reconfigured with ``set_params``. ``fit`` takes a graph rather than data,
so they do not chain inside a ``Pipeline``.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .dynamics import deterministic_trajectory, stochastic_step
from .rng import stream
from .exceptions import ArgumentError
from .graph import walk_brackets
from .interaction import parse_pair
from .bounds import cor_meanfield_from_brackets, thm_main_from_brackets
from .validation import check_density, check_graph, check_state


class OccupancyProcess(TransformerMixin, BaseEstimator):
    """Advance initial configurations by the occupancy dynamics.

    Parameters
    ----------
    f, g : str
        Interaction functions in the text syntax (``"logistic:4"``); ``f`` may
        be ``"memoryless"`` for ``1 - g``.
    steps : int
        Number of synchronous updates.
    mode : {"deterministic", "stochastic"}
        ``deterministic`` iterates the companion map on densities;
        ``stochastic`` samples the process, row ``r`` using stream ``r``.
    random_state : int
        Master seed for ``mode="stochastic"``.
    """

    def __init__(self, f="voter-f", g="voter-g", steps=1, mode="deterministic", random_state=0):
        self.f = f
        self.g = g
        self.steps = steps
        self.mode = mode
        self.random_state = random_state

    def fit(self, X, y=None):
        """``X`` is the graph (Graph, edge-list text or adjacency matrix)."""
        if self.mode not in ("deterministic", "stochastic"):
            raise ArgumentError(f"unknown mode {self.mode!r}")
        self.graph_ = check_graph(X)
        self.pair_ = parse_pair(self.f, self.g)
        self.n_features_in_ = self.graph_.n_vertices
        return self

    def transform(self, X):
        check_is_fitted(self, "graph_")
        return self.trajectory(X)[:, -1, :]

    def trajectory(self, X):
        """``(n_samples, steps + 1, n_vertices)`` trajectories of every row of ``X``."""
        check_is_fitted(self, "graph_")
        X = np.atleast_2d(X)
        if self.mode == "deterministic":
            return deterministic_trajectory(self.graph_, self.pair_, check_density(self.graph_, X), self.steps)
        X = check_state(self.graph_, X)
        out = np.empty((X.shape[0], self.steps + 1, X.shape[1]), dtype=bool)
        for i, row in enumerate(X):
            # row i follows stream (random_state, i), exactly like replica i of an ensemble
            rng = stream(self.random_state, i)
            out[i, 0] = row
            for t in range(self.steps):
                out[i, t + 1] = stochastic_step(self.graph_, self.pair_, out[i, t], rng)
        return out


class NeighborhoodBound(BaseEstimator):
    """Per-vertex random-walk bounds for a fitted graph.

    After :meth:`fit`, ``thm_main_[t, v]`` bounds ``E|X_{N_v}(t) - x_{N_v}(t)|``
    and ``cor_meanfield_[t, v]`` bounds ``|E X_v(t) - x_v(t)|`` for
    ``t = 0..t_max``.
    """

    def __init__(self, M=1.0, t_max=3):
        self.M = M
        self.t_max = t_max

    def fit(self, X, y=None):
        graph = check_graph(X)
        br = walk_brackets(graph, self.t_max)
        ts = range(self.t_max + 1)
        self.thm_main_ = np.array([[thm_main_from_brackets(br[:, v], self.M, t) for v in range(graph.n_vertices)] for t in ts])
        self.cor_meanfield_ = np.array(
            [[cor_meanfield_from_brackets(br[:, v], self.M, t) for v in range(graph.n_vertices)] for t in ts]
        )
        self.n_features_in_ = graph.n_vertices
        return self

    def predict(self, vertices, t=None):
        """Main bound at horizon ``t`` (default ``t_max``) for the given vertices."""
        check_is_fitted(self, "thm_main_")
        t = self.t_max if t is None else t
        return self.thm_main_[t, np.asarray(vertices, dtype=int)]
