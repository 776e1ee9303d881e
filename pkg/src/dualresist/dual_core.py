"""Dual numbers a + b*eps with eps**2 == 0.

Components are whatever real type the caller passes in (float in normal
use). Arithmetic never rounds beyond the underlying real operations, so
``fractions.Fraction`` components give exact results.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Real

from .errors import ZeroStandardPart

__all__ = [
    "DualScalar",
    "dual_arith",
    "dual_reciprocal",
    "conductance_of_edge",
    "EPS_SYMBOL",
]

EPS_SYMBOL = "ε"


@dataclass(frozen=True, eq=False)
class DualScalar:
    standard: Real = 0.0
    infinitesimal: Real = 0.0

    # value equality across subclasses (ResistanceValue == DualScalar)
    def __eq__(self, other):
        if isinstance(other, DualScalar):
            return (self.standard, self.infinitesimal) == (other.standard, other.infinitesimal)
        return NotImplemented

    def __hash__(self):
        return hash((self.standard, self.infinitesimal))

    @classmethod
    def coerce(cls, value) -> "DualScalar":
        if isinstance(value, DualScalar):
            return value
        if isinstance(value, Real):
            return DualScalar(value, 0 * value)
        return NotImplemented

    # arithmetic -------------------------------------------------------------

    def __add__(self, other):
        other = DualScalar.coerce(other)
        if other is NotImplemented:
            return other
        return DualScalar(self.standard + other.standard,
                          self.infinitesimal + other.infinitesimal)

    __radd__ = __add__

    def __sub__(self, other):
        other = DualScalar.coerce(other)
        if other is NotImplemented:
            return other
        return DualScalar(self.standard - other.standard,
                          self.infinitesimal - other.infinitesimal)

    def __rsub__(self, other):
        other = DualScalar.coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return DualScalar(-self.standard, -self.infinitesimal)

    def __mul__(self, other):
        other = DualScalar.coerce(other)
        if other is NotImplemented:
            return other
        # eps**2 term is dropped, never formed
        return DualScalar(
            self.standard * other.standard,
            self.standard * other.infinitesimal + self.infinitesimal * other.standard,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = DualScalar.coerce(other)
        if other is NotImplemented:
            return other
        return self * dual_reciprocal(other)

    def __rtruediv__(self, other):
        other = DualScalar.coerce(other)
        if other is NotImplemented:
            return other
        return other * dual_reciprocal(self)

    # comparison -------------------------------------------------------------

    def isclose(self, other, rtol: float = 0.0, atol: float = 1e-9) -> bool:
        """Componentwise closeness; ``rtol=atol=0`` demands exact equality."""
        other = DualScalar.coerce(other)
        return (math.isclose(self.standard, other.standard, rel_tol=rtol, abs_tol=atol)
                and math.isclose(self.infinitesimal, other.infinitesimal,
                                 rel_tol=rtol, abs_tol=atol))

    # presentation -----------------------------------------------------------

    def format(self, digits: int = 12) -> str:
        # adding 0.0 folds -0.0 into 0.0
        s = float(self.standard) + 0.0
        d = float(self.infinitesimal) + 0.0
        return f"{s:.{digits}g} + ({d:.{digits}g}){EPS_SYMBOL}"

    def __str__(self):
        return self.format()

    def to_dict(self) -> dict:
        return {"standard": float(self.standard),
                "infinitesimal": float(self.infinitesimal)}


def dual_arith(a: DualScalar, b: DualScalar, kind: str) -> DualScalar:
    """Apply ``kind`` in {"add", "sub", "mul"} to two dual scalars."""
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    raise ValueError(f"unknown operation {kind!r}")


def dual_reciprocal(a: DualScalar) -> DualScalar:
    """1/(a_s + a_d eps) = 1/a_s - (a_d/a_s**2) eps.

    Raises
    ------
    ZeroStandardPart
        If the standard part is zero; such a dual number has no inverse.
    """
    if a.standard == 0:
        raise ZeroStandardPart(f"dual number {a} has zero standard part")
    inv = 1 / a.standard
    return DualScalar(inv, -a.infinitesimal * inv * inv)


def conductance_of_edge(a_hat) -> DualScalar:
    """Edge weight 1 + a_hat*eps; its reciprocal 1 - a_hat*eps is the resistance."""
    return DualScalar(1.0, a_hat + 0.0)
