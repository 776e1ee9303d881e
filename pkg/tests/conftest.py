import numpy as np
import pytest
import sympy as sp

from dualresist.graph_model import build_graph, random_connected_graph

ENSEMBLE_SEED = 2024
ENSEMBLE_SIZE = 100


def path(n, a=0.0):
    return build_graph(n, [(i, i + 1, a) for i in range(1, n)])


def cycle(n):
    return build_graph(n, [(i, i % n + 1, 0.0) for i in range(1, n + 1)])


def complete(n):
    return build_graph(n, [(i, j, 0.0) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


def make_ensemble(size=ENSEMBLE_SIZE, seed=ENSEMBLE_SEED, n_range=(4, 12), p=0.5):
    rng = np.random.default_rng(seed)
    return [random_connected_graph(int(rng.integers(n_range[0], n_range[1] + 1)), p, rng)
            for _ in range(size)]


@pytest.fixture
def p2():
    return build_graph(2, [(1, 2, 0.5)])


@pytest.fixture
def k3():
    return complete(3)


@pytest.fixture
def k3e():
    """K3 with a_hat = 1 on edge {1,2}."""
    return build_graph(3, [(1, 2, 1.0), (2, 3, 0.0), (1, 3, 0.0)])


@pytest.fixture(scope="session")
def ensemble():
    return make_ensemble()


@pytest.fixture(scope="session")
def small_ensemble():
    return make_ensemble(size=25, seed=7, n_range=(2, 8))


def symbolic_resistance(G, i, j):
    """Exact R_ij(t) with conductances 1 + t*a_hat, as (R(0), dR/dt(0)).

    Uses rational arithmetic and the grounded Laplacian; no dual numbers and
    no floating-point linear algebra are involved.
    """
    t = sp.Symbol("t")
    n = G.n
    L = sp.zeros(n, n)
    for e in G.edges:
        c = 1 + t * sp.nsimplify(e.a_hat, rational=True)
        a, b = e.i - 1, e.j - 1
        L[a, a] += c
        L[b, b] += c
        L[a, b] -= c
        L[b, a] -= c
    g = j - 1
    keep = [k for k in range(n) if k != g]
    sub = L.extract(keep, keep)
    pos = keep.index(i - 1)
    r = sp.simplify(sub.inv()[pos, pos])
    return r.subs(t, 0), sp.diff(r, t).subs(t, 0)
