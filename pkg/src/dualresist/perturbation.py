"""First-order perturbation of the Kirchhoff index and resistance distances.

With eigenvalues lam_1 >= ... >= lam_{n-1} > lam_n = 0 of L and mu_i of
L_hat, the Kirchhoff perturbation Delta Kf = -n tr(L^+ L_hat L^+) obeys

    |Delta Kf| <= n / lam_{n-1}**2 * sum |mu_i|
    |Delta Kf| <= n * rho(L_hat) * sum_{i<n} 1 / lam_i**2

and when only edge e = {i, j} is perturbed by a_hat:

    Delta R_ij = -a_hat * R_ij(G)**2 = -a_hat * (tau_e / tau)**2
    1/lam_1**2 <= Delta Kf / (-2 n a_hat) <= 1/lam_{n-1}**2
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dual_linalg import symmetric_eigen
from .graph_model import (
    PerturbedGraph,
    laplacian,
    require_connected,
    spanning_tree_count,
    spanning_trees_containing_edge,
)
from .resistance import (
    KirchhoffValue,
    dual_laplacian_pinv,
    kirchhoff_index,
    laplacian_spectrum,
    resistance_mp,
)

__all__ = [
    "PerturbationReport",
    "EdgePerturbationResult",
    "kirchhoff_perturbation",
    "perturbation_eigenvalues",
    "bound_eigsum",
    "bound_specrad",
    "single_edge_analysis",
    "perturbation_report",
    "BOUND_SLACK",
]

BOUND_SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class PerturbationReport:
    kf: KirchhoffValue
    delta_kf: float
    bound_eigsum: float
    bound_specrad: float
    eig_L: np.ndarray
    eig_Lhat: np.ndarray
    bounds_hold: tuple[bool, bool]

    def to_dict(self) -> dict:
        return {
            "kf": self.kf.to_dict(),
            "delta_kf": self.delta_kf,
            "bound_eigsum": self.bound_eigsum,
            "bound_specrad": self.bound_specrad,
            "eig_L": [float(x) for x in self.eig_L],
            "eig_Lhat": [float(x) for x in self.eig_Lhat],
            "bounds_hold": list(self.bounds_hold),
        }


@dataclass(frozen=True)
class EdgePerturbationResult:
    edge: tuple[int, int]
    a_hat: float
    delta_r: float
    tau: int
    tau_e: int
    kf_ratio_bounds: tuple[float, float]
    kf_ratio: float | None = None
    # the other two routes to delta_r, kept for cross-checking
    delta_r_trees: float = 0.0
    delta_r_dual: float = 0.0
    delta_kf: float = 0.0

    @property
    def kf_ratio_within_bounds(self) -> bool | None:
        if self.kf_ratio is None:
            return None
        lo, hi = self.kf_ratio_bounds
        return lo - BOUND_SLACK <= self.kf_ratio <= hi + BOUND_SLACK

    def to_dict(self) -> dict:
        out = {
            "edge": list(self.edge),
            "a_hat": self.a_hat,
            "delta_r": self.delta_r,
            "delta_r_trees": self.delta_r_trees,
            "delta_r_dual": self.delta_r_dual,
            "delta_kf": self.delta_kf,
            "tau": self.tau,
            "tau_e": self.tau_e,
            "kf_ratio_bounds": list(self.kf_ratio_bounds),
        }
        if self.kf_ratio is not None:
            out["kf_ratio"] = self.kf_ratio
            out["kf_ratio_within_bounds"] = self.kf_ratio_within_bounds
        return out


def kirchhoff_perturbation(G: PerturbedGraph) -> float:
    """Delta Kf = -n tr(L^+ L_hat L^+)."""
    require_connected(G)
    X = dual_laplacian_pinv(G)
    return float(G.n * np.trace(X.infinitesimal))


def perturbation_eigenvalues(G: PerturbedGraph) -> np.ndarray:
    """Eigenvalues mu of the perturbation Laplacian L_hat, descending."""
    return symmetric_eigen(laplacian(G).infinitesimal).eigenvalues


def _algebraic_connectivity(G: PerturbedGraph) -> float:
    lam = laplacian_spectrum(G).eigenvalues
    return float(lam[-2]) if G.n > 1 else 0.0


def bound_eigsum(G: PerturbedGraph) -> float:
    """n / lam_{n-1}**2 * sum_i |mu_i|."""
    require_connected(G)
    if G.n == 1:
        return 0.0
    mu = perturbation_eigenvalues(G)
    return float(G.n / _algebraic_connectivity(G) ** 2 * np.abs(mu).sum())


def bound_specrad(G: PerturbedGraph) -> float:
    """n * rho(L_hat) * sum_{i=1}^{n-1} 1 / lam_i**2."""
    require_connected(G)
    if G.n == 1:
        return 0.0
    mu = perturbation_eigenvalues(G)
    lam = laplacian_spectrum(G).eigenvalues[:-1]
    return float(G.n * np.abs(mu).max() * np.sum(1.0 / lam ** 2))


def single_edge_analysis(G_base: PerturbedGraph, e, a_hat: float) -> EdgePerturbationResult:
    """Analyse G_e^w: coefficient ``a_hat`` on edge ``e`` and 0 everywhere else.

    Any coefficients already present on ``G_base`` are ignored; only its
    standard graph is used.
    """
    require_connected(G_base)
    i, j = e[:2]
    edge = G_base.edge(i, j)
    base = G_base.unperturbed()
    Ge = base.with_perturbation({edge.pair: a_hat})

    r = resistance_mp(base, i, j).standard
    tau = spanning_tree_count(base)
    tau_e = spanning_trees_containing_edge(base, edge.pair)
    delta_kf = kirchhoff_perturbation(Ge)

    lam = laplacian_spectrum(base).eigenvalues
    bounds = (1.0 / lam[0] ** 2, 1.0 / lam[-2] ** 2) if G_base.n > 1 else (0.0, 0.0)
    ratio = delta_kf / (-2.0 * G_base.n * a_hat) if a_hat != 0 else None
    return EdgePerturbationResult(
        edge=edge.pair,
        a_hat=float(a_hat),
        delta_r=float(-a_hat * r * r),
        tau=tau,
        tau_e=tau_e,
        kf_ratio_bounds=(float(bounds[0]), float(bounds[1])),
        kf_ratio=None if ratio is None else float(ratio),
        delta_r_trees=float(-a_hat * tau_e ** 2 / tau ** 2),
        delta_r_dual=resistance_mp(Ge, i, j).infinitesimal,
        delta_kf=delta_kf,
    )


def perturbation_report(G: PerturbedGraph) -> PerturbationReport:
    require_connected(G)
    kf = kirchhoff_index(G, "trace")
    delta = kf.infinitesimal
    b1 = bound_eigsum(G)
    b2 = bound_specrad(G)
    return PerturbationReport(
        kf=kf,
        delta_kf=delta,
        bound_eigsum=b1,
        bound_specrad=b2,
        eig_L=laplacian_spectrum(G).eigenvalues,
        eig_Lhat=perturbation_eigenvalues(G),
        bounds_hold=(abs(delta) <= b1 + BOUND_SLACK, abs(delta) <= b2 + BOUND_SLACK),
    )
