import numpy as np
import pytest

from dualresist.errors import Disconnected, NonPositiveConductance, TooLarge
from dualresist.graph_model import build_graph, spanning_tree_count, spanning_trees_containing_edge
from dualresist.oracle import (
    brute_force_spanning_trees,
    finite_difference_resistance,
    one_inverse_member_independence,
    weighted_resistance,
)

from conftest import complete, cycle, path


def test_fd_p2(p2):
    res = finite_difference_resistance(p2, 1, 2)
    # exact R(h) = 1 / (1 + h/2)
    assert res.fd_estimates[0] == pytest.approx((1 / 1.005 - 1) / 0.01, abs=1e-12)
    assert res.fd_estimates[0] == pytest.approx(-0.4975, abs=1e-4)
    assert res.extrapolated == pytest.approx(-0.5, abs=1e-6)
    assert res.agreement_error <= 1e-6
    assert res.h_values == (1e-2, 1e-3, 1e-4)


def test_fd_zero_coefficients_exact(k3):
    res = finite_difference_resistance(k3, 1, 2)
    assert res.fd_estimates == (0.0, 0.0, 0.0)
    assert res.extrapolated == 0.0


def test_fd_k3(k3e):
    res = finite_difference_resistance(k3e, 1, 2)
    assert res.extrapolated == pytest.approx(-4 / 9, abs=1e-6)


def test_fd_converges(k3e):
    res = finite_difference_resistance(k3e, 1, 2)
    errs = [abs(f - res.extrapolated) for f in res.fd_estimates]
    assert errs[0] > errs[1] > errs[2]


def test_fd_errors(k3e):
    G = build_graph(2, [(1, 2, -200.0)])
    with pytest.raises(NonPositiveConductance):
        finite_difference_resistance(G, 1, 2)
    with pytest.raises(Disconnected):
        finite_difference_resistance(build_graph(3, [(1, 2, 1)]), 1, 2)
    with pytest.raises(ValueError):
        finite_difference_resistance(k3e, 1, 2, h_values=[1e-3])


def test_weighted_resistance_series_parallel():
    # two unit edges in series with conductances 1+h*a
    G = path(3, 1.0)
    assert weighted_resistance(G, 1, 3, 0.5) == pytest.approx(2 / 1.5, abs=1e-12)
    assert weighted_resistance(cycle(4), 1, 3, 0.3) == pytest.approx(1.0, abs=1e-12)


def test_fd_on_small_ensemble(small_ensemble):
    for G in small_ensemble[:10]:
        for i in range(1, G.n + 1):
            for j in range(i + 1, G.n + 1):
                assert finite_difference_resistance(G, i, j).agreement_error <= 1e-5


@pytest.mark.parametrize("G, tau, per_edge", [
    (complete(3), 3, 2),
    (path(4), 1, 1),
    (cycle(5), 5, 4),
])
def test_enumeration_examples(G, tau, per_edge):
    t, counts = brute_force_spanning_trees(G)
    assert t == tau
    assert set(counts.values()) == {per_edge}
    assert sorted(counts) == [e.pair for e in G.edges]


def test_enumeration_k4():
    assert brute_force_spanning_trees(complete(4))[0] == 16


def test_enumeration_matches_matrix_tree(small_ensemble):
    for G in small_ensemble:
        tau, counts = brute_force_spanning_trees(G)
        assert tau == spanning_tree_count(G)
        for pair, c in counts.items():
            assert c == spanning_trees_containing_edge(G, pair)
        # each tree has n-1 edges
        assert sum(counts.values()) == tau * (G.n - 1)


def test_enumeration_budget():
    with pytest.raises(TooLarge):
        brute_force_spanning_trees(path(11))
    with pytest.raises(TooLarge):
        brute_force_spanning_trees(complete(7))  # m = 21


def test_member_independence_examples(p2, k3):
    assert one_inverse_member_independence(p2)
    rng = np.random.default_rng(3)
    k3r = k3.with_perturbation({e.pair: rng.uniform(-1, 1) for e in k3.edges})
    assert one_inverse_member_independence(k3r)
    assert one_inverse_member_independence(k3r, trials=0)


def test_member_independence_ensemble(small_ensemble):
    assert all(one_inverse_member_independence(G, trials=5, seed=i)
               for i, G in enumerate(small_ensemble))


def test_member_independence_disconnected():
    with pytest.raises(Disconnected):
        one_inverse_member_independence(build_graph(3, [(1, 2, 1)]))
