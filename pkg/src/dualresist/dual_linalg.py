"""Dense real and dual matrix algebra.

A dual matrix is a pair of equally shaped real arrays ``(standard,
infinitesimal)``; one-dimensional pairs serve as dual vectors. Products drop
the eps**2 term:

    (A_s + A_d eps)(B_s + B_d eps) = A_s B_s + (A_s B_d + A_d B_s) eps

The symmetric eigen-solver is a cyclic Jacobi iteration; everything else
(pseudoinverses of Gram matrices, Moore-Penrose inverses of dual matrices)
is built on top of it so no general SVD is required.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dual_core import DualScalar
from .errors import (
    MPDoesNotExist,
    NoConvergence,
    NotAOneInverse,
    NotSymmetric,
    SingularStandardPart,
)

__all__ = [
    "DualMatrix",
    "DualVector",
    "SpectralDecomposition",
    "SolveResult",
    "symmetric_eigen",
    "real_pinv",
    "dual_inverse",
    "dual_mp_exists",
    "dual_pinv",
    "one_inverse_member",
    "dual_solve",
    "mp_axiom_residuals",
    "DEFAULT_RANK_TOL",
    "DEFAULT_TOL",
]

DEFAULT_RANK_TOL = 1e-10
DEFAULT_TOL = 1e-9
JACOBI_REL_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DualMatrix:
    """Immutable dual matrix (or vector when the parts are 1-D)."""

    standard: np.ndarray
    infinitesimal: np.ndarray

    def __post_init__(self):
        s = _frozen(self.standard)
        d = _frozen(self.infinitesimal)
        if s.shape != d.shape:
            raise ValueError(f"part shapes differ: {s.shape} vs {d.shape}")
        object.__setattr__(self, "standard", s)
        object.__setattr__(self, "infinitesimal", d)

    @classmethod
    def real(cls, a) -> "DualMatrix":
        a = np.asarray(a, dtype=float)
        return cls(a, np.zeros_like(a))

    @classmethod
    def identity(cls, n: int) -> "DualMatrix":
        return cls.real(np.eye(n))

    @classmethod
    def zeros(cls, shape) -> "DualMatrix":
        return cls.real(np.zeros(shape))

    @property
    def shape(self):
        return self.standard.shape

    @property
    def T(self) -> "DualMatrix":
        return DualMatrix(self.standard.T, self.infinitesimal.T)

    def __matmul__(self, other):
        if not isinstance(other, DualMatrix):
            other = DualMatrix.real(other)
        return DualMatrix(
            self.standard @ other.standard,
            self.standard @ other.infinitesimal + self.infinitesimal @ other.standard,
        )

    def __rmatmul__(self, other):
        return DualMatrix.real(other) @ self

    def __add__(self, other):
        if not isinstance(other, DualMatrix):
            other = DualMatrix.real(other)
        return DualMatrix(self.standard + other.standard,
                          self.infinitesimal + other.infinitesimal)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, DualMatrix):
            other = DualMatrix.real(other)
        return DualMatrix(self.standard - other.standard,
                          self.infinitesimal - other.infinitesimal)

    def __rsub__(self, other):
        return DualMatrix.real(other) - self

    def __neg__(self):
        return DualMatrix(-self.standard, -self.infinitesimal)

    def __mul__(self, scalar):
        """Scale by a real or a dual scalar."""
        if isinstance(scalar, DualScalar):
            return DualMatrix(
                scalar.standard * self.standard,
                scalar.standard * self.infinitesimal + scalar.infinitesimal * self.standard,
            )
        return DualMatrix(scalar * self.standard, scalar * self.infinitesimal)

    __rmul__ = __mul__

    def __getitem__(self, key):
        s = self.standard[key]
        d = self.infinitesimal[key]
        if np.ndim(s) == 0:
            return DualScalar(float(s), float(d))
        return DualMatrix(s, d)

    def trace(self) -> DualScalar:
        return DualScalar(float(np.trace(self.standard)),
                          float(np.trace(self.infinitesimal)))

    def max_abs(self) -> float:
        """Largest absolute entry over both parts."""
        if self.standard.size == 0:
            return 0.0
        return float(max(np.abs(self.standard).max(), np.abs(self.infinitesimal).max()))

    def allclose(self, other, atol: float = DEFAULT_TOL) -> bool:
        if not isinstance(other, DualMatrix):
            other = DualMatrix.real(other)
        return self.shape == other.shape and (self - other).max_abs() <= atol

    def __repr__(self):
        return f"DualMatrix(standard={self.standard!r}, infinitesimal={self.infinitesimal!r})"


DualVector = DualMatrix


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        p = self.eigenvectors
        return (p * self.eigenvalues) @ p.T


@dataclass(frozen=True, eq=False)
class SolveResult:
    particular: DualMatrix
    projector: DualMatrix
    solvable: bool

    def solution(self, u) -> DualMatrix:
        """General solution ``particular + projector @ u``."""
        return self.particular + self.projector @ u


# -- real symmetric eigenproblem ----------------------------------------------

def symmetric_eigen(S, tol: float = 1e-12) -> SpectralDecomposition:
    """Eigendecomposition of a real symmetric matrix by cyclic Jacobi sweeps.

    Eigenvalues are returned in descending order. Each eigenvector is signed
    so that its first non-negligible component is positive.

    Raises
    ------
    NotSymmetric
        If ``max|S - S^T| > tol``.
    NoConvergence
        If the off-diagonal mass does not fall below ``1e-12 * ||S||_F``
        within 100 sweeps.
    """
    a = np.array(S, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n and np.abs(a - a.T).max() > tol:
        raise NotSymmetric("matrix is not symmetric within tolerance")
    a = 0.5 * (a + a.T)
    v = np.eye(n)

    target = JACOBI_REL_TOL * np.linalg.norm(a)
    off_mask = ~np.eye(n, dtype=bool)

    for _ in range(JACOBI_MAX_SWEEPS):
        if np.sqrt(np.sum(a[off_mask] ** 2)) <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(1.0, theta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        if np.sqrt(np.sum(a[off_mask] ** 2)) > target:
            raise NoConvergence(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")

    w = np.diag(a).copy()
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = v[:, order]
    for k in range(n):
        col = v[:, k]
        lead = np.flatnonzero(np.abs(col) > 1e-12)
        if lead.size and col[lead[0]] < 0:
            v[:, k] = -col
    return SpectralDecomposition(_frozen(w), _frozen(v))


def real_pinv(S, rank_tol: float = DEFAULT_RANK_TOL,
              decomposition: SpectralDecomposition | None = None) -> np.ndarray:
    """Moore-Penrose inverse of a real symmetric matrix.

    Sums ``p p^T / lam`` over eigenpairs with ``|lam| > rank_tol * max|lam|``.
    A precomputed ``decomposition`` of ``S`` may be supplied.
    """
    dec = decomposition if decomposition is not None else symmetric_eigen(S)
    w = dec.eigenvalues
    p = dec.eigenvectors
    if w.size == 0:
        return np.zeros((0, 0))
    scale = np.abs(w).max()
    keep = np.abs(w) > rank_tol * scale if scale > 0 else np.zeros(w.shape, bool)
    pk = p[:, keep]
    return (pk / w[keep]) @ pk.T


def _general_pinv(a, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    # A^+ = (A^T A)^+ A^T, Gram matrix handled by the symmetric routine
    a = np.asarray(a, dtype=float)
    return real_pinv(a.T @ a, rank_tol) @ a.T


def _is_symmetric(a, tol=1e-12) -> bool:
    return a.shape[0] == a.shape[1] and (a.size == 0 or np.abs(a - a.T).max() <= tol)


# -- dual inverses --------------------------------------------------------------

def dual_inverse(A: DualMatrix, tol: float = 1e-12) -> DualMatrix:
    """(A_s + A_d eps)^-1 = A_s^-1 - A_s^-1 A_d A_s^-1 eps.

    ``tol`` is the smallest admissible reciprocal condition number of A_s.
    """
    s = A.standard
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError(f"dual_inverse needs a square matrix, got {s.shape}")
    if s.shape[0] == 0:
        return DualMatrix.zeros((0, 0))
    cond = np.linalg.cond(s)
    if not np.isfinite(cond) or 1.0 / cond < tol:
        raise SingularStandardPart(f"standard part is singular (cond={cond:.3g})")
    inv = np.linalg.inv(s)
    return DualMatrix(inv, -inv @ A.infinitesimal @ inv)


def _pinv_of(a, rank_tol):
    return real_pinv(a, rank_tol) if _is_symmetric(a) else _general_pinv(a, rank_tol)


def _existence_residual(A: DualMatrix, s_pinv, rank_tol) -> np.ndarray:
    s = A.standard
    m, n = s.shape
    left = np.eye(m) - s @ s_pinv
    right = np.eye(n) - s_pinv @ s
    return left @ A.infinitesimal @ right


def dual_mp_exists(A: DualMatrix, tol: float = DEFAULT_TOL,
                   rank_tol: float = DEFAULT_RANK_TOL) -> bool:
    """True iff ``(I - A_s A_s^+) A_d (I - A_s^+ A_s)`` vanishes within ``tol``."""
    s_pinv = _pinv_of(A.standard, rank_tol)
    res = _existence_residual(A, s_pinv, rank_tol)
    return res.size == 0 or float(np.abs(res).max()) <= tol


def dual_pinv(A: DualMatrix, tol: float = DEFAULT_TOL,
              rank_tol: float = DEFAULT_RANK_TOL) -> DualMatrix:
    """Moore-Penrose inverse of a dual matrix, ``A_s^+ - R eps`` with

        R = A_s^+ A_d A_s^+ - (A_s^T A_s)^+ A_d^T (I - A_s A_s^+)
            - (I - A_s^+ A_s) A_d^T (A_s A_s^T)^+

    Raises
    ------
    MPDoesNotExist
        When the existence condition fails.
    """
    s = A.standard
    d = A.infinitesimal
    m, n = s.shape
    if _is_symmetric(s):
        s_pinv = real_pinv(s, rank_tol)
        gram_left = gram_right = s_pinv @ s_pinv
    else:
        gram_left = real_pinv(s.T @ s, rank_tol)      # (A_s^T A_s)^+
        gram_right = real_pinv(s @ s.T, rank_tol)     # (A_s A_s^T)^+
        s_pinv = gram_left @ s.T
    res = _existence_residual(A, s_pinv, rank_tol)
    if res.size and float(np.abs(res).max()) > tol:
        raise MPDoesNotExist(
            f"existence condition fails (residual {np.abs(res).max():.3g})")
    r = (s_pinv @ d @ s_pinv
         - gram_left @ d.T @ (np.eye(m) - s @ s_pinv)
         - (np.eye(n) - s_pinv @ s) @ d.T @ gram_right)
    return DualMatrix(s_pinv, -r)


def mp_axiom_residuals(A: DualMatrix, X: DualMatrix) -> dict[str, float]:
    """Max-entry residuals of the four Penrose equations over both dual parts."""
    ax = A @ X
    xa = X @ A
    return {
        "AXA=A": (ax @ A - A).max_abs(),
        "XAX=X": (xa @ X - X).max_abs(),
        "(AX)^T=AX": (ax.T - ax).max_abs(),
        "(XA)^T=XA": (xa.T - xa).max_abs(),
    }


def _check_one_inverse(A: DualMatrix, X0: DualMatrix, tol: float):
    res = (A @ X0 @ A - A).max_abs()
    if res > tol:
        raise NotAOneInverse(f"A X0 A != A (residual {res:.3g})")


def one_inverse_member(A: DualMatrix, X0: DualMatrix, P: DualMatrix, Q: DualMatrix,
                       tol: float = DEFAULT_TOL) -> DualMatrix:
    """Member ``X0 A X0 + (I - X0 A) P + Q (I - A X0)`` of the {1}-inverse set of A.

    ``X0`` must already be a {1}-inverse of ``A``; every choice of dual
    ``P`` and ``Q`` (shape ``n x m``) then yields another one.
    """
    _check_one_inverse(A, X0, tol)
    m, n = A.shape
    x0a = X0 @ A
    ax0 = A @ X0
    return (X0 @ A @ X0
            + (DualMatrix.identity(n) - x0a) @ P
            + Q @ (DualMatrix.identity(m) - ax0))


def dual_solve(A: DualMatrix, b: DualMatrix, X0: DualMatrix,
               tol: float = DEFAULT_TOL) -> SolveResult:
    """Particular solution and null-space projector for ``A x = b``.

    Every ``x = particular + projector @ u`` solves the system when
    ``solvable`` is true.
    """
    _check_one_inverse(A, X0, tol)
    particular = X0 @ b
    residual = (A @ particular - b).max_abs()
    projector = DualMatrix.identity(A.shape[1]) - X0 @ A
    return SolveResult(particular, projector, bool(residual <= tol))
