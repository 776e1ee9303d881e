"""Independent checks for the dual-number results.

None of these routines touch dual arithmetic on the quantity they verify:
finite differences re-solve real weighted networks, spanning trees are
counted by exhaustive enumeration, and {1}-inverse members are sampled at
random and compared against the Moore-Penrose route.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .dual_linalg import DualMatrix, one_inverse_member, real_pinv
from .errors import NonPositiveConductance, TooLarge
from .graph_model import PerturbedGraph, laplacian, require_connected
from .resistance import (
    block_one_inverse,
    kirchhoff_from_one_inverse,
    kirchhoff_index,
    resistance_from_one_inverse,
    resistance_mp,
)

__all__ = [
    "FDResult",
    "weighted_resistance",
    "finite_difference_resistance",
    "brute_force_spanning_trees",
    "one_inverse_member_independence",
    "DEFAULT_H_VALUES",
    "MAX_ENUM_N",
    "MAX_ENUM_M",
]

DEFAULT_H_VALUES = (1e-2, 1e-3, 1e-4)
MAX_ENUM_N = 10
MAX_ENUM_M = 20


@dataclass(frozen=True)
class FDResult:
    h_values: tuple[float, ...]
    fd_estimates: tuple[float, ...]
    extrapolated: float
    agreement_error: float


@lru_cache(maxsize=512)
def _weighted_pinv(G: PerturbedGraph, h: float) -> np.ndarray:
    L = np.zeros((G.n, G.n))
    for e in G.edges:
        c = 1.0 + h * e.a_hat
        if c <= 0:
            raise NonPositiveConductance(
                f"conductance 1 + {h:g}*{e.a_hat:g} on edge {{{e.i},{e.j}}} is not positive")
        i, j = e.i - 1, e.j - 1
        L[i, i] += c
        L[j, j] += c
        L[i, j] -= c
        L[j, i] -= c
    out = real_pinv(L)
    out.setflags(write=False)
    return out


def weighted_resistance(G: PerturbedGraph, i: int, j: int, h: float) -> float:
    """Real effective resistance with edge conductances ``1 + h*a_hat``."""
    X = _weighted_pinv(G, float(h))
    a, b = i - 1, j - 1
    return float(X[a, a] + X[b, b] - X[a, b] - X[b, a])


def finite_difference_resistance(G: PerturbedGraph, i: int, j: int,
                                 h_values=DEFAULT_H_VALUES) -> FDResult:
    """Forward differences (R(h) - R(0)) / h of the real effective resistance.

    The two smallest steps are combined by Richardson extrapolation assuming
    an O(h) leading error, and the result is compared with the infinitesimal
    part of the dual resistance distance.
    """
    require_connected(G)
    G.check_vertex(i)
    G.check_vertex(j)
    hs = tuple(sorted((float(h) for h in h_values), reverse=True))
    if len(hs) < 2 or min(hs) <= 0:
        raise ValueError("need at least two positive step sizes")
    r0 = weighted_resistance(G, i, j, 0.0)
    fd = tuple((weighted_resistance(G, i, j, h) - r0) / h for h in hs)
    h1, h2 = hs[-2], hs[-1]
    d1, d2 = fd[-2], fd[-1]
    extrapolated = (h1 * d2 - h2 * d1) / (h1 - h2)
    dual = resistance_mp(G, i, j).infinitesimal
    return FDResult(hs, fd, float(extrapolated), float(abs(extrapolated - dual)))


def _is_spanning_tree(n: int, edges) -> bool:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in edges:
        ri, rj = find(i), find(j)
        if ri == rj:
            return False
        parent[ri] = rj
    # n-1 acyclic edges on n vertices always span
    return True


def brute_force_spanning_trees(G: PerturbedGraph) -> tuple[int, dict[tuple[int, int], int]]:
    """Count spanning trees, and trees through each edge, by enumeration.

    Every (n-1)-subset of the m edges is tested for acyclicity.
    """
    require_connected(G)
    if G.n > MAX_ENUM_N or G.m > MAX_ENUM_M:
        raise TooLarge(f"enumeration budget is n <= {MAX_ENUM_N}, m <= {MAX_ENUM_M}; "
                       f"got n={G.n}, m={G.m}")
    pairs = [e.pair for e in G.edges]
    zero_based = [(i - 1, j - 1) for i, j in pairs]
    per_edge = np.zeros(len(pairs), dtype=np.int64)
    tau = 0
    for subset in combinations(range(len(pairs)), G.n - 1):
        if _is_spanning_tree(G.n, (zero_based[k] for k in subset)):
            tau += 1
            per_edge[list(subset)] += 1
    return tau, {p: int(c) for p, c in zip(pairs, per_edge)}


def _random_dual(rng, shape) -> DualMatrix:
    return DualMatrix(rng.uniform(-1.0, 1.0, shape), rng.uniform(-1.0, 1.0, shape))


def one_inverse_member_independence(G: PerturbedGraph, trials: int = 10, seed: int = 42,
                                    n_pairs: int = 5, tol: float = 1e-8) -> bool:
    """Check that random {1}-inverses of L_w all give the same R_ij and Kf.

    Members are ``X0 L_w X0 + (I - X0 L_w) P + Q (I - L_w X0)`` with the block
    {1}-inverse ``X0`` and dual ``P``, ``Q`` uniform in [-1, 1].
    """
    require_connected(G)
    if trials <= 0:
        return True
    rng = np.random.default_rng(seed)
    n = G.n
    Lw = laplacian(G).matrix
    X0 = block_one_inverse(G)
    all_pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    if all_pairs:
        idx = rng.choice(len(all_pairs), size=min(n_pairs, len(all_pairs)), replace=False)
        pairs = [all_pairs[k] for k in idx]
    else:
        pairs = []
    expected_r = {p: resistance_mp(G, *p) for p in pairs}
    expected_kf = kirchhoff_index(G, "trace")

    for _ in range(trials):
        Y = one_inverse_member(Lw, X0, _random_dual(rng, (n, n)), _random_dual(rng, (n, n)))
        for p in pairs:
            if not resistance_from_one_inverse(Y, *p).isclose(expected_r[p], atol=tol):
                return False
        if not kirchhoff_from_one_inverse(Y).isclose(expected_kf, atol=tol):
            return False
    return True
