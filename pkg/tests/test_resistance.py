from itertools import combinations

import numpy as np
import pytest

from dualresist.dual_core import DualScalar
from dualresist.dual_linalg import DualMatrix, mp_axiom_residuals
from dualresist.errors import Disconnected, SameVertex, ValidationError, VertexOutOfRange
from dualresist.graph_model import build_graph, laplacian
from dualresist.resistance import (
    KIRCHHOFF_METHODS,
    RESISTANCE_METHODS,
    block_one_inverse,
    dual_laplacian_pinv,
    kirchhoff_index,
    node_potentials,
    regularized_pinv,
    resistance,
    resistance_matrix,
)

from conftest import complete, cycle, path, symbolic_resistance

EXACT = 1e-10


def pairs(n):
    return combinations(range(1, n + 1), 2)


# -- anchors against exact rational computation ----------------------------------------

@pytest.mark.parametrize("method", sorted(RESISTANCE_METHODS))
def test_p2(p2, method):
    r = resistance(p2, 1, 2, method)
    assert r.isclose(DualScalar(1.0, -0.5), atol=EXACT)


@pytest.mark.parametrize("method", sorted(RESISTANCE_METHODS))
def test_k3_perturbed_edge(k3e, method):
    assert resistance(k3e, 1, 2, method).isclose(DualScalar(2 / 3, -4 / 9), atol=EXACT)
    assert resistance(k3e, 1, 3, method).isclose(DualScalar(2 / 3, -1 / 9), atol=EXACT)
    assert resistance(k3e, 2, 3, method).isclose(DualScalar(2 / 3, -1 / 9), atol=EXACT)


def test_symmetric_in_endpoints(k3e):
    for m in RESISTANCE_METHODS:
        assert resistance(k3e, 2, 1, m).isclose(resistance(k3e, 1, 2, m), atol=EXACT)
    assert resistance(k3e, 2, 2) == DualScalar(0.0, 0.0)


def test_series_path():
    # unit resistors in series; perturbed resistances add
    G = path(5, 0.5)
    assert resistance(G, 1, 5).isclose(DualScalar(4.0, -2.0), atol=EXACT)


@pytest.mark.parametrize("G", [
    build_graph(3, [(1, 2, 0.25), (2, 3, -0.75)]),
    build_graph(4, [(1, 2, 1), (2, 3, -1), (3, 4, 0.5), (4, 1, 0), (1, 3, 2)]),
    build_graph(5, [(1, 2, 0.3), (1, 3, -0.2), (2, 3, 0.1), (3, 4, 0.6),
                    (4, 5, -0.9), (2, 5, 0.4), (1, 5, 0.0)]),
])
def test_against_symbolic_derivative(G):
    for i, j in pairs(G.n):
        r0, dr = symbolic_resistance(G, i, j)
        for m in RESISTANCE_METHODS:
            r = resistance(G, i, j, m)
            assert r.isclose(DualScalar(float(r0), float(dr)), atol=EXACT)


def test_symbolic_oracle_on_ensemble_sample(small_ensemble):
    for G in small_ensemble[:4]:
        for i, j in list(pairs(G.n))[:3]:
            r0, dr = symbolic_resistance(G, i, j)
            assert resistance(G, i, j).isclose(DualScalar(float(r0), float(dr)), atol=1e-9)


def test_resistance_errors():
    with pytest.raises(Disconnected):
        resistance(build_graph(3, [(1, 2, 0)]), 1, 3)
    with pytest.raises(VertexOutOfRange):
        resistance(path(3), 1, 4)
    with pytest.raises(ValueError):
        resistance(path(3), 1, 2, "svd")


# -- Kirchhoff ------------------------------------------------------------------------

@pytest.mark.parametrize("method", sorted(KIRCHHOFF_METHODS))
def test_kirchhoff_anchors(k3, k3e, p2, method):
    assert kirchhoff_index(k3, method).isclose(DualScalar(2.0, 0.0), atol=EXACT)
    assert kirchhoff_index(k3e, method).isclose(DualScalar(2.0, -2 / 3), atol=EXACT)
    assert kirchhoff_index(p2, method).isclose(DualScalar(1.0, -0.5), atol=EXACT)


def test_kirchhoff_closed_forms():
    # Kf(K_n) = n - 1, Kf(P_n) = (n^3 - n) / 6, Kf(C_n) = (n^3 - n) / 12
    for n in range(2, 9):
        assert kirchhoff_index(complete(n)).isclose(DualScalar(n - 1.0, 0.0), atol=1e-9)
        assert kirchhoff_index(path(n)).isclose(DualScalar((n ** 3 - n) / 6, 0.0), atol=1e-9)
    for n in range(3, 9):
        assert kirchhoff_index(cycle(n)).isclose(DualScalar((n ** 3 - n) / 12, 0.0), atol=1e-9)


def test_kirchhoff_single_vertex():
    assert kirchhoff_index(build_graph(1, [])) == DualScalar(0.0, 0.0)


def test_kirchhoff_unknown_method(k3):
    with pytest.raises(ValueError):
        kirchhoff_index(k3, "nope")


# -- properties over the random ensemble ----------------------------------------------

def test_mp_axioms_on_laplacians(ensemble):
    for G in ensemble:
        res = mp_axiom_residuals(laplacian(G).matrix, dual_laplacian_pinv(G))
        assert max(res.values()) <= 1e-9


def test_projector_identity(ensemble):
    for G in ensemble:
        Lw = laplacian(G).matrix
        X = dual_laplacian_pinv(G)
        J = DualMatrix.real(np.full((G.n, G.n), 1.0 / G.n))
        I = DualMatrix.identity(G.n)
        assert (I - Lw @ X - J).max_abs() <= 1e-9
        assert (I - X @ Lw - J).max_abs() <= 1e-9


def test_pinv_annihilates_ones(ensemble):
    for G in ensemble:
        X = dual_laplacian_pinv(G)
        ones = DualMatrix.real(np.ones(G.n))
        assert (X @ ones).max_abs() <= 1e-10


def test_three_routes_agree(ensemble):
    for G in ensemble:
        A, B, C = (resistance_matrix_by(G, m) for m in ("mp", "regularized", "block"))
        assert np.abs(A - B).max() <= 1e-8
        assert np.abs(A - C).max() <= 1e-8


def resistance_matrix_by(G, method):
    out = np.zeros((2, G.n, G.n))
    for i, j in pairs(G.n):
        r = resistance(G, i, j, method)
        out[:, i - 1, j - 1] = r.standard, r.infinitesimal
    return out


def test_resistance_matrix_properties(ensemble):
    for G in ensemble[:30]:
        Rm = resistance_matrix(G)
        np.testing.assert_array_equal(np.diag(Rm.standard), 0)
        np.testing.assert_array_equal(np.diag(Rm.infinitesimal), 0)
        assert np.abs(Rm.standard - Rm.standard.T).max() <= 1e-12
        # Kf is the sum over unordered pairs
        kf = kirchhoff_index(G)
        assert abs(Rm.standard.sum() / 2 - kf.standard) <= 1e-9
        assert abs(Rm.infinitesimal.sum() / 2 - kf.infinitesimal) <= 1e-9
        # standard parts form a metric
        S = Rm.standard
        assert (S[np.triu_indices(G.n, 1)] > 0).all()
        viol = S[:, None, :] - S[:, :, None] - S.T[None, :, :]
        assert viol.max() <= 1e-9


def test_kirchhoff_methods_agree(ensemble):
    for G in ensemble:
        ref = kirchhoff_index(G, "trace")
        for m in KIRCHHOFF_METHODS:
            assert kirchhoff_index(G, m).isclose(ref, atol=1e-8 * max(1.0, ref.standard))


def test_zero_perturbation_gives_zero_infinitesimal(ensemble):
    for G in ensemble[:20]:
        G0 = G.unperturbed()
        assert not dual_laplacian_pinv(G0).infinitesimal.any()
        assert not block_one_inverse(G0).infinitesimal.any()
        assert not regularized_pinv(G0).infinitesimal.any()
        assert kirchhoff_index(G0).infinitesimal == 0.0


def test_block_one_inverse_is_one_inverse(ensemble):
    for G in ensemble[:20]:
        Lw = laplacian(G).matrix
        for ground in (1, G.n):
            X = block_one_inverse(G, ground)
            assert (Lw @ X @ Lw - Lw).max_abs() <= 1e-9


def test_cached_results_are_read_only(k3e):
    X = dual_laplacian_pinv(k3e)
    with pytest.raises(ValueError):
        X.standard[0, 0] = 5.0


# -- node potentials ------------------------------------------------------------------

def test_potentials_p2(p2):
    v = node_potentials(p2, 1, 2)
    np.testing.assert_allclose(v.standard, [0.5, -0.5], atol=EXACT)
    np.testing.assert_allclose(v.infinitesimal, [-0.25, 0.25], atol=EXACT)


def test_potential_drop_is_resistance(ensemble):
    for G in ensemble[:10]:
        v = node_potentials(G, 1, G.n, DualScalar(2.0, 0.5))
        drop = v[0] - v[G.n - 1]
        assert drop.isclose(DualScalar(2.0, 0.5) * resistance(G, 1, G.n), atol=1e-9)
        assert abs(v.standard.sum()) <= 1e-9 and abs(v.infinitesimal.sum()) <= 1e-9


def test_potential_errors(p2):
    with pytest.raises(SameVertex):
        node_potentials(p2, 1, 1)
    with pytest.raises(Disconnected):
        node_potentials(build_graph(3, [(1, 2, 0)]), 1, 2)
    with pytest.raises(ValidationError):
        node_potentials(p2, 1, 2, DualScalar(0.0, 1.0))
