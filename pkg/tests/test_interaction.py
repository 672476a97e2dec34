import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from occupancy.exceptions import ArgumentError
from occupancy.interaction import (
    InteractionPair,
    affine,
    constant,
    evaluate,
    gamma,
    gamma_tilde_orbit,
    logistic,
    memoryless_logistic,
    memoryless_pair,
    parse_function,
    parse_pair,
    piecewise_linear,
    theta,
    voter_pair,
)

from helpers import random_function, random_pair

GRID = np.linspace(0.0, 1.0, 10_001)


def test_evaluate_examples():
    assert evaluate(logistic(4), 0.5) == 1.0
    assert evaluate(constant(0.3), 0.77) == 0.3
    assert evaluate(piecewise_linear([(0, 0), (1, 1)]), 0.25) == 0.25
    with pytest.raises(ArgumentError):
        evaluate(constant(0.3), 1.5)


def test_range_validation():
    with pytest.raises(ArgumentError):
        constant(1.2)
    with pytest.raises(ArgumentError):
        affine(1.0, 0.5)
    with pytest.raises(ArgumentError):
        logistic(4.5)
    with pytest.raises(ArgumentError):
        piecewise_linear([(0, 0), (0.5, 1)])


def test_gamma_endpoints():
    pair = InteractionPair(logistic(3), affine(0.5, 0.2))
    for y in (0.0, 0.3, 1.0):
        assert gamma(pair, 1, y) == pytest.approx(1 - evaluate(pair.f, y), abs=1e-15)
        assert gamma(pair, 0, y) == pytest.approx(evaluate(pair.g, y), abs=1e-15)


def test_gamma_tilde_orbit_examples():
    assert gamma_tilde_orbit(memoryless_logistic(4), 0.5, 3) == [0.5, 1.0, 0.0, 0.0]
    assert gamma_tilde_orbit(voter_pair(), 0.37, 0) == [0.37]


def test_theta_examples():
    same = InteractionPair(constant(0.3), constant(0.3))
    assert theta(same, 0.1) == pytest.approx(0.4)
    for p in (0.0, 0.25, 0.9):
        assert theta(voter_pair(), p) == 0.0
        assert theta(memoryless_logistic(4), p) == 0.0


def test_structural_memoryless_detection():
    assert voter_pair().is_memoryless and voter_pair().is_voter
    assert InteractionPair(affine(-0.4, 0.7), affine(0.4, 0.3)).is_memoryless
    assert InteractionPair(constant(0.7), constant(0.3)).is_memoryless
    assert not InteractionPair(constant(0.3), constant(0.3)).is_memoryless
    assert memoryless_logistic(2).is_memoryless
    assert not InteractionPair(logistic(2), logistic(2)).is_memoryless
    pw = piecewise_linear([(0, 0.1), (0.5, 0.9), (1, 0.2)])
    assert memoryless_pair(pw).is_memoryless


def test_lipschitz_values():
    assert constant(0.2).lipschitz == 0
    assert affine(-0.6, 0.8).lipschitz == pytest.approx(0.6)
    assert logistic(4).lipschitz == 4
    assert piecewise_linear([(0, 0), (0.5, 1), (1, 0)]).lipschitz == pytest.approx(2)
    assert memoryless_logistic(3).M == 3


def test_text_round_trip():
    for text in ("constant:0.3", "affine:-1,1", "logistic:4", "pwl:0,0;0.5,1;1,0", "1-logistic:2.5"):
        spec = parse_function(text)
        assert parse_function(spec.to_text()).same_function(spec)
    assert parse_function("voter-f").same_function(affine(-1, 1))
    assert parse_pair("memoryless", "logistic:4").is_memoryless
    assert parse_pair("voter-f", "voter-g").is_voter
    for bad in ("logistic", "affine:1", "spline:1", "pwl:0,0;1"):
        with pytest.raises(ArgumentError):
            parse_function(bad)


def test_evaluate_in_range_and_lipschitz(rng):
    for _ in range(40):
        spec = random_function(rng, max_lipschitz=3.0)
        v = evaluate(spec, GRID)
        assert v.min() >= 0 and v.max() <= 1
        # neighbouring grid points are the tightest pairs; the rest follows by the triangle inequality
        assert (np.abs(np.diff(v)) <= spec.lipschitz * np.diff(GRID) + 1e-12).all()
        c = spec.complemented()
        np.testing.assert_allclose(evaluate(c, GRID), 1 - v, atol=1e-15)


def test_gamma_affine_in_x(rng):
    for _ in range(20):
        pair = random_pair(rng)
        y = rng.random(200)
        x = rng.random(200)
        g0, g1 = gamma(pair, 0.0, y), gamma(pair, 1.0, y)
        np.testing.assert_allclose(gamma(pair, x, y), g0 + x * (g1 - g0), atol=1e-15, rtol=0)


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 1), st.integers(0, 25))
def test_voter_orbit_is_constant(p, t):
    assert gamma_tilde_orbit(voter_pair(), p, t) == [p] * (t + 1)


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 1), st.floats(0, 1))
def test_memoryless_gamma_ignores_own_state(x, y):
    pair = memoryless_logistic(3.3)
    assert gamma(pair, x, y) == pytest.approx(gamma(pair, 0.0, y), abs=1e-15)
