import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from occupancy.bounds import thm_main_simplified
from occupancy.dynamics import deterministic_trajectory, run_trajectories
from occupancy.estimators import NeighborhoodBound, OccupancyProcess
from occupancy.exceptions import ValidationError
from occupancy.graph import Graph, cycle_graph, dump_edge_list
from occupancy.interaction import parse_pair


def test_get_params_and_clone():
    est = OccupancyProcess(f="memoryless", g="logistic:3", steps=4)
    assert est.get_params() == {"f": "memoryless", "g": "logistic:3", "steps": 4,
                                "mode": "deterministic", "random_state": 0}
    c = clone(est).set_params(steps=2)
    assert c.steps == 2 and est.steps == 4


def test_deterministic_transform_matches_library(rng):
    g = cycle_graph(9)
    X = rng.random((5, 9))
    est = OccupancyProcess(f="memoryless", g="logistic:3.5", steps=3).fit(g)
    pair = parse_pair("memoryless", "logistic:3.5")
    np.testing.assert_array_equal(est.transform(X), deterministic_trajectory(g, pair, X, 3)[:, -1])
    # graph given as edge-list text or adjacency matrix
    again = OccupancyProcess(f="memoryless", g="logistic:3.5", steps=3).fit(dump_edge_list(g))
    np.testing.assert_array_equal(again.transform(X), est.transform(X))
    dense = OccupancyProcess(f="memoryless", g="logistic:3.5", steps=3).fit(g.adjacency_matrix().toarray())
    np.testing.assert_array_equal(dense.transform(X), est.transform(X))


def test_stochastic_rows_match_ensemble(rng):
    g = cycle_graph(7)
    x0 = rng.random(7) < 0.5
    est = OccupancyProcess(steps=3, mode="stochastic", random_state=11).fit(g)
    traj = est.trajectory(np.tile(x0, (4, 1)))
    ens = run_trajectories(g, parse_pair("voter-f", "voter-g"), x0, 3, 4, seed=11)
    for t in range(4):
        assert (traj[:, t] == ens.states(t)).all()


def test_validation():
    with pytest.raises(NotFittedError):
        OccupancyProcess().transform(np.zeros((1, 3)))
    with pytest.raises(ValidationError):
        OccupancyProcess().fit(Graph(3, [(0, 1)]))
    est = OccupancyProcess().fit(cycle_graph(4))
    with pytest.raises(ValidationError):
        est.transform(np.zeros((2, 5)))
    with pytest.raises(ValueError):
        OccupancyProcess(mode="async").fit(cycle_graph(4))


def test_pipeline_and_bound():
    g = cycle_graph(6)
    one = OccupancyProcess(steps=1).fit(g)
    X = np.eye(6)
    np.testing.assert_allclose(one.transform(one.transform(X)), OccupancyProcess(steps=2).fit(g).transform(X))
    nb = NeighborhoodBound(M=1.0, t_max=4).fit(g)
    np.testing.assert_allclose(nb.predict([0, 3], t=3), thm_main_simplified(2, 1.0, 3), rtol=1e-12)
    assert nb.cor_meanfield_.shape == (5, 6)
