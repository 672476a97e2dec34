"""Homogeneous polynomial observables, motifs and homomorphism densities."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Union

import numpy as np

from .exceptions import ArgumentError, CapacityError, ValidationError
from .graph import Graph, pair_index

#: largest ``n ** |V(F)|`` evaluated by summing over all maps
ENUMERATION_BUDGET = 10_000_000


class Polynomial:
    """``P(X) = sum_W P_W prod_{w in W} X_w`` over ``d``-subsets ``W`` of the vertices.

    Terms are keyed by sorted vertex tuples; repeated keys are summed and zero
    coefficients dropped. When every coefficient is an ``int`` or
    :class:`~fractions.Fraction` the exact values are kept in ``exact_terms``
    for :meth:`evaluate_exact`.
    """

    def __init__(self, n_vertices: int, terms: Union[Mapping, Iterable] = (), degree: int | None = None):
        items = terms.items() if isinstance(terms, Mapping) else terms
        merged: dict = {}
        exact = True
        for key, coeff in items:
            key = tuple(sorted(int(w) for w in key))
            if len(set(key)) != len(key):
                raise ValidationError(f"term {key} repeats a vertex")
            if key and (key[0] < 0 or key[-1] >= n_vertices):
                raise ValidationError(f"term {key} out of range")
            if degree is None:
                degree = len(key)
            elif len(key) != degree:
                raise ValidationError(f"term {key} has degree {len(key)}, expected {degree}")
            if isinstance(coeff, (int, Fraction)) and not isinstance(coeff, bool):
                coeff = Fraction(coeff)
            else:
                exact = False
                coeff = float(coeff)
            merged[key] = merged.get(key, 0) + coeff
        if degree is None or degree < 1:
            raise ArgumentError("polynomial degree must be given and >= 1")
        self.n_vertices = int(n_vertices)
        self.degree = int(degree)
        keys = sorted(k for k, c in merged.items() if c != 0)
        self.exact_terms = {k: merged[k] for k in keys} if exact else None
        self.terms = {k: float(merged[k]) for k in keys}
        self.index = np.array(keys, dtype=np.int64).reshape(-1, self.degree)
        self.coeffs = np.array([self.terms[k] for k in keys], dtype=np.float64)

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        return f"<Polynomial d={self.degree} terms={len(self)} on {self.n_vertices} vertices>"

    @cached_property
    def vertex_mass(self) -> np.ndarray:
        """``c_v(P)``: total absolute coefficient of the terms containing ``v``."""
        c = np.zeros(self.n_vertices)
        if len(self):
            np.add.at(c, self.index.ravel(), np.repeat(np.abs(self.coeffs), self.degree))
        return c

    @cached_property
    def l1(self) -> float:
        return float(self.vertex_mass.sum())

    @cached_property
    def l2(self) -> float:
        return float(np.sqrt(np.square(self.vertex_mass).sum()))

    def __call__(self, states):
        return evaluate_polynomial(self, states)

    def evaluate_exact(self, state) -> Fraction:
        """Rational value on one binary state; needs exact coefficients."""
        if self.exact_terms is None:
            raise ValidationError("polynomial has floating-point coefficients")
        bits = np.asarray(state, dtype=bool)
        if bits.shape != (self.n_vertices,):
            raise ValidationError("state length does not match polynomial")
        return sum((c for k, c in self.exact_terms.items() if bits[list(k)].all()), Fraction(0))

    def dump(self) -> str:
        """One ``coeff v1 ... vd`` line per term."""
        return "".join(f"{c!r} " + " ".join(map(str, k)) + "\n" for k, c in self.terms.items())

    @classmethod
    def load(cls, text: str, n_vertices: int, degree: int | None = None) -> "Polynomial":
        terms = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            parts = line.split()
            if not parts:
                continue
            try:
                terms.append((tuple(int(v) for v in parts[1:]), float(parts[0])))
            except ValueError:
                raise ValidationError(f"line {lineno}: malformed term {line!r}") from None
        return cls(n_vertices, terms, degree=degree)


def evaluate_polynomial(p: Polynomial, states):
    """Value on one ``(n,)`` state or each row of an ``(R, n)`` batch."""
    arr = np.asarray(states, dtype=np.float64)
    if arr.shape[-1] != p.n_vertices:
        raise ValidationError("state length does not match polynomial")
    if not len(p):
        out = np.zeros(arr.shape[:-1])
    else:
        # same row-wise reduction for a single state and a batch, so equal rows give equal values
        out = (np.prod(arr[..., p.index], axis=-1) * p.coeffs).sum(axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def norms(p: Polynomial) -> tuple[float, float]:
    return p.l1, p.l2


def check_membership(p: Polynomial, lam: float, rho: float) -> bool:
    """Whether ``||P||_1 <= lam`` and ``||P||_2 <= rho``."""
    if lam < 0 or rho < 0:
        raise ArgumentError("norm bounds must be non-negative")
    return p.l1 <= lam and p.l2 <= rho


def neighborhood_polynomial(graph: Graph, v: int) -> Polynomial:
    deg = int(graph.degree[v])
    if deg == 0:
        raise ValidationError(f"vertex {v} is isolated")
    return Polynomial(graph.n_vertices, {(int(w),): 1.0 / deg for w in graph.neighbors(v)}, degree=1)


# -- motifs ----------------------------------------------------------------------

@dataclass(frozen=True)
class Motif:
    name: str
    n_vertices: int
    edges: tuple

    @cached_property
    def aut(self) -> int:
        """Automorphism count by enumerating all vertex permutations."""
        es = {frozenset(e) for e in self.edges}
        return sum(
            1
            for perm in itertools.permutations(range(self.n_vertices))
            if {frozenset((perm[a], perm[b])) for a, b in self.edges} == es
        )

    @property
    def n_edges(self) -> int:
        return len(self.edges)


MOTIFS = {
    "edge": Motif("edge", 2, ((0, 1),)),
    "wedge": Motif("wedge", 3, ((0, 1), (1, 2))),
    "triangle": Motif("triangle", 3, ((0, 1), (1, 2), (0, 2))),
    "p3": Motif("p3", 4, ((0, 1), (1, 2), (2, 3))),
    "c4": Motif("c4", 4, ((0, 1), (1, 2), (2, 3), (0, 3))),
    "k4": Motif("k4", 4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))),
}


def get_motif(name: str) -> Motif:
    try:
        return MOTIFS[name]
    except KeyError:
        raise ArgumentError(f"unknown motif {name!r}; choose from {sorted(MOTIFS)}") from None


def edge_state_adjacency(state, n: int) -> np.ndarray:
    """Symmetric ``(..., n, n)`` weight matrix from a state on ``L(K_n)``; zero diagonal."""
    arr = np.asarray(state, dtype=np.float64)
    m = n * (n - 1) // 2
    if arr.shape[-1] != m:
        raise ValidationError(f"edge state needs C({n},2) = {m} entries")
    iu, ju = np.triu_indices(n, k=1)
    A = np.zeros(arr.shape[:-1] + (n, n))
    A[..., iu, ju] = arr
    A[..., ju, iu] = arr
    return A


def _host_matrix(host) -> np.ndarray:
    if isinstance(host, Graph):
        return host.adjacency_matrix().toarray()
    A = np.asarray(host, dtype=np.float64)
    if A.ndim < 2 or A.shape[-1] != A.shape[-2]:
        raise ValidationError("host must be a Graph or square weight matrix")
    return A


def _einsum_density(motif: Motif, A: np.ndarray) -> np.ndarray:
    letters = "abcdefgh"
    ops = ",".join("..." + letters[i] + letters[j] for i, j in motif.edges)
    total = np.einsum(ops + "->...", *([A] * motif.n_edges), optimize="optimal")
    return total / A.shape[-1] ** motif.n_vertices


def _closed_form_density(motif: Motif, A: np.ndarray) -> np.ndarray:
    n = A.shape[-1]
    if motif.name == "edge":
        return A.sum(axis=(-1, -2)) / n**2
    if motif.name == "wedge":
        return np.square(A.sum(axis=-1)).sum(axis=-1) / n**3
    if motif.name == "triangle":
        # trace(A^3) for symmetric A
        return np.einsum("...ij,...ij->...", A @ A, A) / n**3
    raise CapacityError(f"no closed form for motif {motif.name!r}")


def homomorphism_density(motif: Motif, host, method: str = "auto"):
    """``t(F, G)``: fraction of all maps ``V(F) -> V(G)`` that preserve every edge of ``F``.

    ``host`` is a :class:`Graph`, a (possibly weighted) adjacency matrix with
    zero diagonal, or a batch of them; weighted hosts give the multilinear
    extension evaluated at the weights. ``method`` is ``"auto"``,
    ``"enumerate"`` (sum over all maps) or ``"closed"``.
    """
    A = _host_matrix(host)
    n = A.shape[-1]
    if method == "auto":
        method = "enumerate" if n**motif.n_vertices <= ENUMERATION_BUDGET else "closed"
    if method == "enumerate":
        if n**motif.n_vertices > ENUMERATION_BUDGET:
            raise CapacityError(f"{n}^{motif.n_vertices} maps exceed the enumeration budget")
        out = _einsum_density(motif, A)
    elif method == "closed":
        out = _closed_form_density(motif, A)
    else:
        raise ArgumentError(f"unknown method {method!r}")
    return float(out) if np.ndim(out) == 0 else out


def brute_force_hom_count(motif: Motif, A, injective: bool = False) -> float:
    """Sum over explicit maps of the product of edge weights; test oracle."""
    A = np.asarray(A, dtype=np.float64)
    n = A.shape[0]
    maps = itertools.permutations(range(n), motif.n_vertices) if injective else itertools.product(
        range(n), repeat=motif.n_vertices
    )
    total = 0.0
    for phi in maps:
        w = 1.0
        for a, b in motif.edges:
            w *= A[phi[a], phi[b]]
            if w == 0.0:
                break
        total += w
    return total


def motif_copies(motif: Motif, n: int) -> list[tuple]:
    """Edge sets of ``K_n`` (as sorted ``L(K_n)`` vertex tuples) that form a copy of ``motif``."""
    copies = set()
    for phi in itertools.permutations(range(n), motif.n_vertices):
        copies.add(tuple(sorted(pair_index(n, phi[a], phi[b]) for a, b in motif.edges)))
    return sorted(copies)


def motif_polynomial(motif: Motif, n: int) -> Polynomial:
    """Polynomial on ``L(K_n)`` whose value is the injective hom count over ``n^|V(F)|``."""
    if n < motif.n_vertices:
        return Polynomial(math.comb(n, 2), (), degree=motif.n_edges)
    if n > 12:
        raise CapacityError("motif_polynomial supports n <= 12")
    coeff = Fraction(motif.aut, n**motif.n_vertices)
    return Polynomial(math.comb(n, 2), {c: coeff for c in motif_copies(motif, n)}, degree=motif.n_edges)
