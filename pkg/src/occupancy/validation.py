"""Input coercion shared by the functional API and the estimators."""

import numpy as np
import scipy.sparse as sp

from .exceptions import ArgumentError, ValidationError
from .graph import Graph, load_edge_list


def check_graph(graph, allow_isolated: bool = False) -> Graph:
    """Accept a :class:`Graph`, an edge-list string, or a symmetric 0/1 adjacency matrix."""
    if isinstance(graph, str):
        graph = load_edge_list(graph)
    elif not isinstance(graph, Graph):
        A = sp.coo_matrix(graph) if sp.issparse(graph) else sp.coo_matrix(np.asarray(graph))
        if A.shape[0] != A.shape[1]:
            raise ValidationError("adjacency matrix must be square")
        if (A != A.T).nnz:
            raise ValidationError("adjacency matrix must be symmetric")
        keep = (A.row < A.col) & (A.data != 0)
        if (A.row == A.col)[A.data != 0].any():
            raise ValidationError("adjacency matrix has self-loops")
        graph = Graph(A.shape[0], np.stack([A.row[keep], A.col[keep]], axis=1))
    if not allow_isolated:
        graph.require_no_isolated()
    return graph


def check_state(graph: Graph, state) -> np.ndarray:
    """Binary configuration(s) as a bool array whose last axis is the vertex axis."""
    arr = np.asarray(state)
    if arr.shape[-1:] != (graph.n_vertices,):
        raise ValidationError(f"state length {arr.shape[-1:]} does not match {graph.n_vertices} vertices")
    if arr.dtype != bool:
        if not np.isin(arr, (0, 1)).all():
            raise ValidationError("state entries must be 0 or 1")
        arr = arr.astype(bool)
    return arr


def check_density(graph: Graph, x) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.shape[-1:] != (graph.n_vertices,):
        raise ValidationError(f"density length {arr.shape[-1:]} does not match {graph.n_vertices} vertices")
    if arr.size and (np.isnan(arr).any() or arr.min() < 0.0 or arr.max() > 1.0):
        raise ValidationError("density entries must lie in [0, 1]")
    return arr


def check_probability(p: float, name: str = "p") -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ArgumentError(f"{name}={p} outside [0, 1]")
    return p
