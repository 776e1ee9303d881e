"""Dual-valued resistance distances and Kirchhoff indices.

Three independent routes are provided:

* ``mp``           -- the dual Moore-Penrose inverse ``L^+ - L^+ L_hat L^+ eps``;
* ``regularized``  -- the dual inverse of ``L_w + J/n`` minus ``J/n``;
* ``block``        -- the dual inverse of the grounded Laplacian (row/column of
  the reference vertex deleted), i.e. the {1}-inverse ``diag(L11^-1, 0)``.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .dual_core import DualScalar
from .dual_linalg import (
    DEFAULT_TOL,
    DualMatrix,
    SpectralDecomposition,
    dual_inverse,
    one_inverse_member,
    real_pinv,
    symmetric_eigen,
)
from .errors import NumericalError, SameVertex, ValidationError
from .graph_model import PerturbedGraph, laplacian, require_connected

__all__ = [
    "ResistanceValue",
    "KirchhoffValue",
    "laplacian_spectrum",
    "dual_laplacian_pinv",
    "regularized_pinv",
    "block_one_inverse",
    "resistance",
    "resistance_mp",
    "resistance_regularized",
    "resistance_block",
    "resistance_from_one_inverse",
    "kirchhoff_from_one_inverse",
    "resistance_matrix",
    "kirchhoff_index",
    "node_potentials",
    "RESISTANCE_METHODS",
    "KIRCHHOFF_METHODS",
]


class ResistanceValue(DualScalar):
    """R_ij(G^w) = R_ij(G) + (first-order change) eps."""


class KirchhoffValue(DualScalar):
    """Kf(G^w) = Kf(G) + Delta Kf eps."""


# -- shared decompositions ----------------------------------------------------------
# Graphs are immutable and hashable, so per-graph work is computed once and
# shared read-only by every pairwise query.

@lru_cache(maxsize=256)
def laplacian_spectrum(G: PerturbedGraph) -> SpectralDecomposition:
    """Eigen-decomposition of the standard Laplacian L (descending)."""
    return symmetric_eigen(laplacian(G).standard)


@lru_cache(maxsize=256)
def dual_laplacian_pinv(G: PerturbedGraph) -> DualMatrix:
    """L_w^+ = L^+ - L^+ L_hat L^+ eps for a connected graph."""
    require_connected(G)
    Lw = laplacian(G).matrix
    Lp = real_pinv(Lw.standard, decomposition=laplacian_spectrum(G))
    Lp = 0.5 * (Lp + Lp.T)
    return DualMatrix(Lp, -(Lp @ Lw.infinitesimal @ Lp))


@lru_cache(maxsize=256)
def regularized_pinv(G: PerturbedGraph) -> DualMatrix:
    """(L_w + J/n)^-1 - J/n via the dual inverse."""
    require_connected(G)
    n = G.n
    J_n = np.full((n, n), 1.0 / n)
    return dual_inverse(laplacian(G).matrix + J_n) - J_n


def _grounded(G: PerturbedGraph, ground: int) -> tuple[DualMatrix, np.ndarray]:
    # Swap the 0-based ``ground`` vertex with the last label and delete it.
    n = G.n
    perm = np.arange(n)
    perm[[ground, n - 1]] = perm[[n - 1, ground]]
    Lw = laplacian(G).matrix
    Ls = Lw.standard[np.ix_(perm, perm)]
    Ld = Lw.infinitesimal[np.ix_(perm, perm)]
    return DualMatrix(Ls[:-1, :-1], Ld[:-1, :-1]), perm


@lru_cache(maxsize=1024)
def _grounded_inverse(G: PerturbedGraph, ground: int) -> tuple[DualMatrix, np.ndarray]:
    sub, perm = _grounded(G, ground)
    perm.setflags(write=False)
    return dual_inverse(sub), perm


def block_one_inverse(G: PerturbedGraph, ground: int | None = None) -> DualMatrix:
    """The {1}-inverse ``diag(L~11^-1, 0)`` of L_w, in original vertex order.

    ``ground`` (1-based) is the vertex whose row and column are deleted;
    the default is vertex n.
    """
    require_connected(G)
    g = G.n - 1 if ground is None else G.check_vertex(ground)
    inv, perm = _grounded_inverse(G, g)
    n = G.n
    s = np.zeros((n, n))
    d = np.zeros((n, n))
    s[:-1, :-1] = inv.standard
    d[:-1, :-1] = inv.infinitesimal
    back = np.argsort(perm)
    return DualMatrix(s[np.ix_(back, back)], d[np.ix_(back, back)])


# -- resistance ------------------------------------------------------------------

def _pair(G: PerturbedGraph, i: int, j: int) -> tuple[int, int]:
    require_connected(G)
    return G.check_vertex(i), G.check_vertex(j)


def _quadratic_form(X: DualMatrix, a: int, b: int) -> ResistanceValue:
    # X_aa + X_bb - X_ab - X_ba, valid for any {1}-inverse (symmetric or not)
    if a == b:
        return ResistanceValue(0.0, 0.0)
    s, d = X.standard, X.infinitesimal
    return ResistanceValue(
        float(s[a, a] + s[b, b] - s[a, b] - s[b, a]),
        float(d[a, a] + d[b, b] - d[a, b] - d[b, a]),
    )


def resistance_mp(G: PerturbedGraph, i: int, j: int) -> ResistanceValue:
    """Resistance distance between 1-based vertices ``i`` and ``j``.

    Computed as ``(L_w^+)_ii + (L_w^+)_jj - 2 (L_w^+)_ij``; the infinitesimal
    part is ``-[(L^+ L_hat L^+)_ii + (L^+ L_hat L^+)_jj - 2 (L^+ L_hat L^+)_ij]``.
    """
    a, b = _pair(G, i, j)
    return _quadratic_form(dual_laplacian_pinv(G), a, b)


def resistance_regularized(G: PerturbedGraph, i: int, j: int) -> ResistanceValue:
    a, b = _pair(G, i, j)
    return _quadratic_form(regularized_pinv(G), a, b)


def resistance_block(G: PerturbedGraph, i: int, j: int) -> ResistanceValue:
    """Relabel ``j`` as vertex n and read ``(L~11^-1)_ii`` off the grounded inverse.

    ``(L~11^-1)_ii = (L11^-1)_ii - (L11^-1 L_hat11 L11^-1)_ii eps``.
    """
    a, b = _pair(G, i, j)
    if a == b:
        return ResistanceValue(0.0, 0.0)
    inv, perm = _grounded_inverse(G, b)
    pos = int(np.flatnonzero(perm == a)[0])
    return ResistanceValue(float(inv.standard[pos, pos]),
                           float(inv.infinitesimal[pos, pos]))


RESISTANCE_METHODS = {
    "mp": resistance_mp,
    "regularized": resistance_regularized,
    "block": resistance_block,
}


def resistance(G: PerturbedGraph, i: int, j: int, method: str = "mp") -> ResistanceValue:
    try:
        fn = RESISTANCE_METHODS[method]
    except KeyError:
        raise ValueError(f"unknown resistance method {method!r}") from None
    return fn(G, i, j)


def resistance_from_one_inverse(X: DualMatrix, i: int, j: int) -> ResistanceValue:
    """Resistance distance from an arbitrary {1}-inverse ``X`` of L_w."""
    return _quadratic_form(X, i - 1, j - 1)


def resistance_matrix(G: PerturbedGraph) -> DualMatrix:
    """All-pairs resistance distances (MP route); zero diagonal."""
    X = dual_laplacian_pinv(G)
    parts = []
    for M in (X.standard, X.infinitesimal):
        diag = np.diag(M)
        R = diag[:, None] + diag[None, :] - M - M.T
        np.fill_diagonal(R, 0.0)
        parts.append(R)
    return DualMatrix(*parts)


# -- Kirchhoff index ------------------------------------------------------------------

def kirchhoff_from_one_inverse(X: DualMatrix) -> KirchhoffValue:
    """Kf = n tr(X) - 1^T X 1 for any {1}-inverse X of L_w."""
    n = X.shape[0]
    return KirchhoffValue(
        float(n * np.trace(X.standard) - X.standard.sum()),
        float(n * np.trace(X.infinitesimal) - X.infinitesimal.sum()),
    )


def _kf_trace(G):
    X = dual_laplacian_pinv(G)
    n = G.n
    return KirchhoffValue(float(n * np.trace(X.standard)),
                          float(n * np.trace(X.infinitesimal)))


def _kf_regularized(G):
    X = regularized_pinv(G)
    n = G.n
    return KirchhoffValue(float(n * np.trace(X.standard)),
                          float(n * np.trace(X.infinitesimal)))


def _kf_one_inverse(G):
    Lw = laplacian(G).matrix
    X0 = block_one_inverse(G)
    zero = DualMatrix.zeros((G.n, G.n))
    return kirchhoff_from_one_inverse(one_inverse_member(Lw, X0, zero, zero))


def _kf_block(G):
    require_connected(G)
    if G.n == 1:
        return KirchhoffValue(0.0, 0.0)
    sub, _ = _grounded(G, G.n - 1)
    L11 = sub.standard
    inv = np.linalg.inv(L11)
    corr = inv @ sub.infinitesimal @ inv
    n = G.n
    return KirchhoffValue(
        float(n * np.trace(inv) - inv.sum()),
        float(-(n * np.trace(corr) - corr.sum())),
    )


KIRCHHOFF_METHODS = {
    "trace": _kf_trace,
    "one_inverse": _kf_one_inverse,
    "block": _kf_block,
    "regularized": _kf_regularized,
}


def kirchhoff_index(G: PerturbedGraph, method: str = "trace") -> KirchhoffValue:
    """Dual Kirchhoff index Kf(G^w) = Kf(G) + Delta Kf eps.

    ``method`` is one of ``trace`` (n tr(L_w^+)), ``one_inverse``
    (n tr(X) - 1^T X 1 with the block {1}-inverse), ``block`` (the same
    expression on the grounded n-1 block, expanded in real arithmetic) or
    ``regularized`` (n tr of the regularized-route pseudoinverse).
    """
    require_connected(G)
    try:
        fn = KIRCHHOFF_METHODS[method]
    except KeyError:
        raise ValueError(f"unknown Kirchhoff method {method!r}") from None
    return fn(G)


# -- potentials ------------------------------------------------------------------------

def node_potentials(G: PerturbedGraph, source: int, sink: int,
                    current: DualScalar = DualScalar(1.0, 0.0),
                    tol: float = DEFAULT_TOL) -> DualMatrix:
    """Potentials v = L_w^+ Y (1_source - 1_sink) for injected current Y.

    The returned dual vector is grounded so that its entries sum to zero.
    """
    a, b = _pair(G, source, sink)
    if a == b:
        raise SameVertex(f"source and sink are both vertex {source}")
    current = DualScalar.coerce(current)
    if not current.standard > 0:
        raise ValidationError("injected current must have a positive standard part")
    rhs = np.zeros(G.n)
    rhs[a], rhs[b] = 1.0, -1.0
    rhs = DualMatrix.real(rhs) * current
    v = dual_laplacian_pinv(G) @ rhs
    residual = (laplacian(G).matrix @ v - rhs).max_abs()
    if residual > tol * max(1.0, rhs.max_abs()):
        raise NumericalError(f"potential residual {residual:.3g} exceeds {tol:g}")
    return v
