"""Undirected simple graphs in compressed sorted-neighbour form.

Vertices are dense 0-based integers. A :class:`Graph` is immutable once built;
the CSR arrays are flagged read-only so instances can be shared across threads.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np
import scipy.sparse as sp

from .exceptions import ArgumentError, GraphParseError, ValidationError


class Graph:
    """Immutable undirected simple graph.

    Parameters
    ----------
    n_vertices : int
        Number of vertices.
    edges : iterable of (int, int)
        Undirected edges. Duplicates (in either orientation) collapse to one
        edge; self-loops raise :class:`ValidationError`.
    name : str, optional
        Free-form label echoed in reports.
    """

    def __init__(self, n_vertices: int, edges: Iterable[tuple[int, int]] = (), name: str = ""):
        n_vertices = int(n_vertices)
        if n_vertices < 0:
            raise ArgumentError("n_vertices must be non-negative")
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        arr = arr.reshape(-1, 2)
        if arr.size:
            if arr.min() < 0 or arr.max() >= n_vertices:
                raise ValidationError("edge endpoint out of range")
            loops = arr[:, 0] == arr[:, 1]
            if loops.any():
                v = int(arr[loops][0, 0])
                raise ValidationError(f"self-loop at vertex {v}")
        lo = np.minimum(arr[:, 0], arr[:, 1])
        hi = np.maximum(arr[:, 0], arr[:, 1])
        pairs = np.unique(np.stack([lo, hi], axis=1), axis=0) if arr.size else arr
        both = np.concatenate([pairs, pairs[:, ::-1]]) if pairs.size else pairs
        # sort by (row, col) so each neighbour list comes out ascending
        if both.size:
            order = np.lexsort((both[:, 1], both[:, 0]))
            both = both[order]
        counts = np.bincount(both[:, 0], minlength=n_vertices) if both.size else np.zeros(n_vertices, np.int64)
        indptr = np.zeros(n_vertices + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        indices = both[:, 1].copy() if both.size else np.zeros(0, np.int64)

        self.n_vertices = n_vertices
        self.name = name
        self.indptr = indptr
        self.indices = indices
        self.degree = counts.astype(np.int64)
        self._edges = pairs.astype(np.int64)
        for a in (self.indptr, self.indices, self.degree, self._edges):
            a.flags.writeable = False

    # -- basic structure -------------------------------------------------
    @property
    def n_edges(self) -> int:
        return int(self._edges.shape[0])

    @property
    def min_degree(self) -> int:
        """Minimum degree; 0 for the graph without vertices."""
        return int(self.degree.min()) if self.n_vertices else 0

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def adjacency_lists(self) -> list[list[int]]:
        return [self.neighbors(v).tolist() for v in range(self.n_vertices)]

    def edges(self) -> np.ndarray:
        """Edges as an ``(m, 2)`` array with ``u < v``, sorted lexicographically."""
        return self._edges

    def has_isolated_vertices(self) -> bool:
        return bool(self.n_vertices and (self.degree == 0).any())

    def is_regular(self) -> bool:
        return bool(self.n_vertices == 0 or (self.degree == self.degree[0]).all())

    def is_connected(self) -> bool:
        if self.n_vertices == 0:
            return True
        ncomp, _ = sp.csgraph.connected_components(self.adjacency_matrix(), directed=False)
        return ncomp == 1

    # -- linear operators --------------------------------------------------
    @cached_property
    def _adjacency(self) -> sp.csr_matrix:
        data = np.ones(self.indices.shape[0], dtype=np.float64)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n_vertices, self.n_vertices))

    def adjacency_matrix(self) -> sp.csr_matrix:
        return self._adjacency

    @cached_property
    def _averaging(self) -> sp.csr_matrix:
        self.require_no_isolated()
        inv = 1.0 / self.degree.astype(np.float64)
        data = np.repeat(inv, self.degree)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n_vertices, self.n_vertices))

    def averaging_operator(self) -> sp.csr_matrix:
        """Row-stochastic ``D^{-1} A``; row ``v`` averages over ``N_v``."""
        return self._averaging

    def require_no_isolated(self) -> None:
        if self.has_isolated_vertices():
            v = int(np.flatnonzero(self.degree == 0)[0])
            raise ValidationError(f"vertex {v} is isolated; neighbourhood average undefined")

    # -- comparisons -------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n_vertices == other.n_vertices and np.array_equal(self._edges, other._edges)

    def __hash__(self) -> int:
        return hash((self.n_vertices, self._edges.tobytes()))

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<Graph{label} n={self.n_vertices} m={self.n_edges} min_degree={self.min_degree}>"

    def relabel(self, perm: np.ndarray) -> "Graph":
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        perm = np.asarray(perm, dtype=np.int64)
        return Graph(self.n_vertices, perm[self._edges], name=self.name)


# -- text I/O ------------------------------------------------------------------

def load_edge_list(text: str, name: str = "") -> Graph:
    """Parse the edge-list format: optional ``n <count>`` header then ``u v`` lines.

    Blank lines and lines starting with ``#`` are ignored.
    """
    n_header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "n":
            if len(parts) != 2 or n_header is not None or edges:
                raise GraphParseError(f"line {lineno}: malformed header {raw!r}")
            n_header = _parse_int(parts[1], lineno, raw)
            if n_header < 0:
                raise GraphParseError(f"line {lineno}: negative vertex count")
            continue
        if len(parts) != 2:
            raise GraphParseError(f"line {lineno}: expected 'u v', got {raw!r}")
        u, v = (_parse_int(p, lineno, raw) for p in parts)
        if u < 0 or v < 0:
            raise GraphParseError(f"line {lineno}: negative vertex index")
        if u == v:
            raise ValidationError(f"line {lineno}: self-loop at vertex {u}")
        edges.append((u, v))
    top = 1 + max((max(e) for e in edges), default=-1)
    if n_header is None:
        n = top
    else:
        if top > n_header:
            raise ValidationError(f"vertex index {top - 1} exceeds header count {n_header}")
        n = n_header
    return Graph(n, edges, name=name)


def _parse_int(token: str, lineno: int, raw: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphParseError(f"line {lineno}: not an integer in {raw!r}") from None


def dump_edge_list(graph: Graph) -> str:
    """Serialise with an explicit header so isolated trailing vertices survive."""
    lines = [f"n {graph.n_vertices}"]
    lines.extend(f"{u} {v}" for u, v in graph.edges().tolist())
    return "\n".join(lines) + "\n"


# -- generators ----------------------------------------------------------------

def complete_graph(n: int) -> Graph:
    if n < 2:
        raise ArgumentError("complete_graph needs n >= 2")
    return Graph(n, itertools.combinations(range(n), 2), name=f"K{n}")


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ArgumentError("cycle_graph needs n >= 3")
    return Graph(n, ((v, (v + 1) % n) for v in range(n)), name=f"C{n}")


def path_graph(n: int) -> Graph:
    if n < 1:
        raise ArgumentError("path_graph needs n >= 1")
    return Graph(n, ((v, v + 1) for v in range(n - 1)), name=f"P{n}")


def cycle_power(n: int, k: int) -> Graph:
    """``k``-th power of the ``n``-cycle: each vertex joined to the ``k`` nearest on each side."""
    if k < 1 or n < 2 * k + 1:
        raise ArgumentError("cycle_power needs k >= 1 and n >= 2k+1")
    edges = [(v, (v + j) % n) for v in range(n) for j in range(1, k + 1)]
    return Graph(n, edges, name=f"C{n}^{k}")


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """G(n, p): every one of the C(n, 2) pairs is kept independently with probability ``p``.

    Pairs are visited in lexicographic order, one uniform per pair, so the graph
    is a pure function of ``(n, p, seed)``.
    """
    if not 0.0 <= p <= 1.0:
        raise ArgumentError(f"edge probability {p} outside [0, 1]")
    if n < 0 or n > 20000:
        raise ArgumentError("erdos_renyi supports 0 <= n <= 20000")
    from .rng import stream

    rng = stream(seed, 0)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.shape[0]) < p
    return Graph(n, np.stack([iu[keep], ju[keep]], axis=1), name=f"ER({n},{p})")


@dataclass(frozen=True)
class LineGraph:
    """Line graph plus the pair ``{j, k}`` each of its vertices stands for."""

    graph: Graph
    edge_map: np.ndarray  # (m, 2), row e = endpoints of base edge e
    base_vertices: int

    def __iter__(self):
        # allows ``lg, emap = line_graph(g)``
        yield self.graph
        yield self.edge_map


def line_graph(g: Graph) -> LineGraph:
    """Vertices are the edges of ``g`` (in ``g.edges()`` order); adjacency = shared endpoint."""
    if g.n_edges == 0:
        raise ValidationError("line graph of an edgeless graph is empty")
    emap = g.edges()
    m = emap.shape[0]
    # incidence lists: for each base vertex, the base edges touching it
    ends = np.concatenate([emap[:, 0], emap[:, 1]])
    eid = np.concatenate([np.arange(m), np.arange(m)])
    order = np.argsort(ends, kind="stable")
    ends, eid = ends[order], eid[order]
    bounds = np.searchsorted(ends, np.arange(g.n_vertices + 1))
    pairs = []
    for v in range(g.n_vertices):
        inc = eid[bounds[v]:bounds[v + 1]]
        if inc.shape[0] > 1:
            a, b = np.triu_indices(inc.shape[0], k=1)
            pairs.append(np.stack([inc[a], inc[b]], axis=1))
    edges = np.concatenate(pairs) if pairs else np.zeros((0, 2), np.int64)
    name = f"L({g.name})" if g.name else "L(G)"
    return LineGraph(Graph(m, edges, name=name), emap, g.n_vertices)


def line_graph_complete(n: int) -> LineGraph:
    """``L(K_n)``; vertex ``e`` is the ``e``-th pair ``j < k`` in lexicographic order."""
    return line_graph(complete_graph(n))


def pair_index(n: int, j: int, k: int) -> int:
    """Index of pair ``{j, k}`` among the lexicographically ordered pairs of ``range(n)``."""
    if j == k:
        raise ArgumentError("pair needs distinct endpoints")
    j, k = min(j, k), max(j, k)
    return j * n - j * (j + 1) // 2 + (k - j - 1)


# -- random walks --------------------------------------------------------------

@dataclass(frozen=True)
class WalkDistribution:
    """Simple-random-walk occupation probabilities ``rows[s][w]`` from ``source``."""

    source: int
    rows: np.ndarray  # (max_steps + 1, n)

    @property
    def max_steps(self) -> int:
        return self.rows.shape[0] - 1


def walk_distribution(g: Graph, source: int, max_steps: int) -> WalkDistribution:
    """Propagate the source indicator by one walk step at a time (row-vector times ``D^{-1}A``)."""
    if not 0 <= source < g.n_vertices:
        raise ArgumentError(f"source {source} out of range")
    if max_steps < 0:
        raise ArgumentError("max_steps must be non-negative")
    rows = np.zeros((max_steps + 1, g.n_vertices))
    rows[0, source] = 1.0
    deg = g.degree
    inv = np.zeros(g.n_vertices)
    np.divide(1.0, deg, out=inv, where=deg > 0)
    for s in range(max_steps):
        cur = rows[s]
        stuck = (cur > 0) & (deg == 0)
        if stuck.any():
            v = int(np.flatnonzero(stuck)[0])
            raise ValidationError(f"isolated vertex {v} reachable by the walk")
        # mass at w spreads uniformly over N_w
        rows[s + 1] = g.adjacency_matrix().T @ (cur * inv)
    rows.flags.writeable = False
    return WalkDistribution(source, rows)


def walk_brackets(g: Graph, max_steps: int) -> np.ndarray:
    """``out[s, v] = sum_w pi_{v,w}(s) / sqrt(deg w)`` for all sources at once.

    Uses ``P^s h`` with ``P = D^{-1}A`` and ``h = deg^{-1/2}``, which equals the
    source-by-source walk expectation.
    """
    g.require_no_isolated()
    P = g.averaging_operator()
    out = np.empty((max_steps + 1, g.n_vertices))
    out[0] = 1.0 / np.sqrt(g.degree)
    for s in range(max_steps):
        out[s + 1] = P @ out[s]
    return out


def n_pairs(n: int) -> int:
    return math.comb(n, 2)
