import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from occupancy.bounds import (
    MAX_T,
    bound_report,
    cor_meanfield_bound,
    diag_distance,
    diag_probability,
    growth_constant,
    prop_diag_bound,
    thm_main_bound,
    thm_main_simplified,
    thm_poly_bound,
)
from occupancy.exceptions import ArgumentError
from occupancy.graph import complete_graph, cycle_graph, cycle_power, line_graph_complete, path_graph, walk_distribution
from occupancy.interaction import InteractionPair, constant, memoryless_logistic, voter_pair

from helpers import random_connected_graph


def _wd(g, v=0, steps=12):
    return walk_distribution(g, v, steps)


def test_thm_main_examples():
    for d, g in [(2, cycle_graph(8)), (5, complete_graph(6)), (6, cycle_power(13, 3))]:
        wd = _wd(g)
        assert thm_main_bound(g, wd, 1.0, 0) == 0.0
        assert thm_main_bound(g, wd, 1.0, 2) == pytest.approx(3 * d**-0.5, abs=1e-14)
        for M in (0.5, 1.0, 2.0):
            for t in range(11):
                assert thm_main_bound(g, wd, M, t) == pytest.approx(d**-0.5 * ((M + 1) ** t - 1) / M, rel=1e-12)


def test_thm_main_needs_enough_rows():
    g = path_graph(4)
    with pytest.raises(ArgumentError):
        thm_main_bound(g, walk_distribution(g, 0, 1), 1.0, 3)


def test_simplified_examples():
    assert thm_main_simplified(100, 1.0, 3) == pytest.approx(0.7)
    assert thm_main_simplified(7, 1.0, 0) == 0.0
    assert thm_main_simplified(25, 0.0, 5) == 1.0
    assert thm_main_simplified(25, 1e-9, 5) == pytest.approx(1.0, abs=1e-7)
    with pytest.raises(ArgumentError):
        thm_main_simplified(0, 1.0, 2)


def test_growth_constant_is_exact_binomial_sum():
    for M in (0.25, 0.5, 1.0, 3.0):
        for t in range(MAX_T + 1):
            assert growth_constant(M, t) == pytest.approx(((M + 1) ** t - 1) / M, rel=1e-12)
    with pytest.raises(ArgumentError):
        growth_constant(1.0, MAX_T + 1)


def test_poly_examples():
    assert thm_poly_bound(2, 1.0, 1.0, 0.3, 0) == 0.0
    for d in (1, 2, 3):
        assert thm_poly_bound(d, 1.5, 0.7, 0.3, 1) == pytest.approx(0.6)
    assert thm_poly_bound(1, 1.0, 1.0, 0.25, 2) == pytest.approx(2.5)
    with pytest.raises(ArgumentError):
        thm_poly_bound(0, 1.0, 1.0, 1.0, 2)


def test_meanfield_examples():
    for d, g in [(2, cycle_graph(10)), (4, complete_graph(5))]:
        wd = _wd(g)
        assert cor_meanfield_bound(g, wd, 1.0, 0) == 0.0
        assert cor_meanfield_bound(g, wd, 1.0, 1) == 0.0
        assert cor_meanfield_bound(g, wd, 1.0, 2) == pytest.approx(d**-0.5)


def test_prop_diag_examples():
    lg = line_graph_complete(20).graph  # 190 vertices, degree 36
    ml = memoryless_logistic(4)
    b, _ = prop_diag_bound(lg, ml, 0.3, 0.1, 3)
    assert b == pytest.approx(4 * 0.1 * math.exp(16))
    frozen = InteractionPair(constant(0.7), constant(0.3))
    b, prob = prop_diag_bound(lg, frozen, 0.4, 0.3, 2)
    assert b == 0.0 and prob == diag_probability(190, 36, 0.3)
    assert diag_probability(190, 18, 0.3) == 0.0
    assert 1 - 380 * math.exp(-3.24) < 0
    with pytest.raises(ArgumentError):
        prop_diag_bound(lg, ml, 0.3, 0.1, 0)
    rep = bound_report("prop_diag", graph=line_graph_complete(10).graph, pair=ml, t_max=3, p=0.3, eps=0.3)
    assert rep.vacuous and rep.probability == 0.0 and rep.t == [1, 2, 3]


def test_diag_distance_examples():
    assert diag_distance(np.full(5, 0.4), 0.4) == 0.0
    assert diag_distance([0, 1], 0.5) == 0.5
    assert diag_distance([0.2, 0.9], 0.3) == pytest.approx(0.6)


def test_bounds_on_random_graphs(rng):
    for _ in range(40):
        g = random_connected_graph(rng, int(rng.integers(2, 12)))
        M = float(rng.uniform(0, 3))
        for v in range(g.n_vertices):
            wd = _wd(g, v, 10)
            prev_main = prev_mf = 0.0
            for t in range(11):
                main = thm_main_bound(g, wd, M, t)
                mf = cor_meanfield_bound(g, wd, M, t)
                assert 0 <= main <= thm_main_simplified(g.min_degree, M, t) * (1 + 1e-12)
                if t:
                    # meanfield increment is the main bound one step earlier
                    assert mf - prev_mf == pytest.approx(prev_main, rel=1e-12, abs=1e-15)
                    assert mf >= prev_mf
                prev_main, prev_mf = main, mf


@settings(max_examples=200, deadline=None)
@given(
    st.integers(1, 4), st.floats(0, 3), st.floats(0, 3), st.floats(0, 3), st.integers(0, 20),
    st.sampled_from(["M", "lam", "rho", "t"]),
)
def test_poly_monotone(d, M, lam, rho, t, which):
    base = thm_poly_bound(d, M, lam, rho, t)
    bumped = dict(M=M, lam=lam, rho=rho, t=t)
    bumped[which] = bumped[which] + 1
    assert base >= 0
    assert thm_poly_bound(d, bumped["M"], bumped["lam"], bumped["rho"], bumped["t"]) >= base


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 5000), st.integers(1, 200), st.floats(0.01, 1.0))
def test_diag_probability_monotone(n, delta, eps):
    p = diag_probability(n, delta, eps)
    assert 0 <= p <= 1
    assert diag_probability(n + 1, delta, eps) <= p
    assert diag_probability(n, delta + 1, eps) >= p
    assert diag_probability(n, delta, eps * 1.1) >= p


def test_bound_report_shapes():
    g = cycle_graph(6)
    for kind in ("thm_main", "thm_main_simplified", "cor_meanfield"):
        rep = bound_report(kind, graph=g, pair=voter_pair(), t_max=4)
        assert rep.t == [0, 1, 2, 3, 4] and len(rep.values) == 5
        assert rep.inputs["M"] == 1.0
    rep = bound_report("thm_poly", M=2.0, t_max=3, d=2, lam=1.0, rho=0.5)
    assert rep.values == [thm_poly_bound(2, 2.0, 1.0, 0.5, t) for t in range(4)]
    with pytest.raises(ArgumentError):
        bound_report("nope", graph=g, M=1.0)
    with pytest.raises(ArgumentError):
        bound_report("thm_main", M=1.0)
