"""Term-by-term evaluation of the k-tension field in the reduced scalar setting.

For the model geometries every section that appears in tau_k is a real
multiple of one unit normal field, so a normal field is represented by its
coefficient along that normal. Three rewrite rules suffice:

* iterated rough Laplacian: ``Lap^l tau = beta^l * tau``;
* curvature trace: ``sum_j R(V, dphi e_j) dphi e_j = m_eff * V``;
* cross contraction: ``sum_j R(nabla_{e_j} W, U) dphi e_j = <tau, W> U``,
  whose mirror ``sum_j R(W, nabla_{e_j} U) dphi e_j = -<tau, U> W``.

The unit-sphere curvature ``R(U,V)W = <V,W>U - <W,U>V`` is assumed
throughout. The tension itself is ``tau = -sqrt(tau2) * normal``.

:func:`tau_k` builds the literal list of terms for k = 2s or k = 2s+1,
rewrites each one with the rules above and sums them; the closed factored
form is computed separately for comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .models import ScalarInvariants, sqrt

DEFAULT_REL_TOL = 1e-9


@dataclass(frozen=True)
class NormalExpression:
    """A normal field, stored as its coefficient along the unit normal."""

    coeff: object

    def __add__(self, other: "NormalExpression") -> "NormalExpression":
        return NormalExpression(self.coeff + other.coeff)

    def __sub__(self, other: "NormalExpression") -> "NormalExpression":
        return NormalExpression(self.coeff - other.coeff)

    def __neg__(self) -> "NormalExpression":
        return NormalExpression(-self.coeff)


# -- terms ------------------------------------------------------------------


@dataclass(frozen=True)
class Lap:
    """``Lap^power tau``."""

    power: int


@dataclass(frozen=True)
class CurvTrace:
    """``sum_j R(field, dphi e_j) dphi e_j``."""

    field: Lap


@dataclass(frozen=True)
class Cross:
    """``sum_j R(nabla_{e_j} grad, other) dphi e_j``."""

    grad: Lap
    other: Lap


@dataclass(frozen=True)
class Mirror:
    """``sum_j R(other, nabla_{e_j} grad) dphi e_j``."""

    other: Lap
    grad: Lap


@dataclass(frozen=True)
class Diff:
    left: "Term"
    right: "Term"


Term = Union[Lap, CurvTrace, Cross, Mirror, Diff]


def tension_coeff(inv: ScalarInvariants):
    """Coefficient of tau along the unit normal (sign convention: <= 0)."""
    return -sqrt(inv.tau2)


def laplacian_power(inv: ScalarInvariants, l: int):
    """Scalar ``beta^l`` with ``Lap^l tau = beta^l tau``."""
    if l < 0:
        raise ValueError("negative Laplacian powers are dropped by the caller")
    return inv.beta ** l


def curvature_trace(inv: ScalarInvariants, v_coeff):
    return inv.m_eff * v_coeff


def cross_contraction(inv: ScalarInvariants, w_coeff, u_coeff):
    """Coefficient of ``sum_j R(nabla_{e_j} W, U) dphi e_j = <tau, W> U``."""
    return tension_coeff(inv) * w_coeff * u_coeff


def mirrored_contraction(inv: ScalarInvariants, w_coeff, u_coeff):
    """Coefficient of ``sum_j R(W, nabla_{e_j} U) dphi e_j = -<tau, U> W``."""
    return -cross_contraction(inv, u_coeff, w_coeff)


def rewrite(term: Term, inv: ScalarInvariants) -> NormalExpression:
    """Reduce a term to a multiple of the unit normal."""
    if isinstance(term, Lap):
        return NormalExpression(laplacian_power(inv, term.power) * tension_coeff(inv))
    if isinstance(term, CurvTrace):
        return NormalExpression(curvature_trace(inv, rewrite(term.field, inv).coeff))
    if isinstance(term, Cross):
        w = rewrite(term.grad, inv).coeff
        u = rewrite(term.other, inv).coeff
        return NormalExpression(cross_contraction(inv, w, u))
    if isinstance(term, Mirror):
        w = rewrite(term.other, inv).coeff
        u = rewrite(term.grad, inv).coeff
        return NormalExpression(mirrored_contraction(inv, w, u))
    if isinstance(term, Diff):
        return rewrite(term.left, inv) - rewrite(term.right, inv)
    raise TypeError(f"unknown term {term!r}")


def expand(k: int) -> tuple[Term, Term, list[Term]]:
    """Leading, curvature and cross terms of tau_k.

    For k = 2s the summands are ``Cross(Lap^{s+l-2}, Lap^{s-l-1}) -
    Mirror(Lap^{s+l-2}, Lap^{s-l-1})`` for l = 1..s-1. For k = 2s+1 the
    Laplacian exponent in the first slot is s+l-1 and one extra term
    ``Cross(Lap^{s-1}, Lap^{s-1})`` closes the list.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    s, odd = divmod(k, 2)
    leading = Lap(k - 1)
    curvature = CurvTrace(Lap(k - 2))
    shift = 1 if odd else 2
    cross: list[Term] = []
    for l in range(1, s):
        a = Lap(s + l - shift)
        b = Lap(s - l - 1)
        cross.append(Diff(Cross(a, b), Mirror(a, b)))
    if odd:
        cross.append(Cross(Lap(s - 1), Lap(s - 1)))
    return leading, curvature, cross


def factored(inv: ScalarInvariants, k: int):
    """``tau_coeff * beta^{k-3} (beta^2 - m beta - (k-2) tau2)``; k = 2 uses ``beta - m``."""
    tc = tension_coeff(inv)
    if k == 2:
        return tc * (inv.beta - inv.m_eff)
    b = inv.beta
    return tc * b ** (k - 3) * (b * b - inv.m_eff * b - (k - 2) * inv.tau2)


@dataclass(frozen=True)
class TensionEvaluation:
    k: int
    leading_term: object
    curvature_term: object
    cross_terms: tuple
    total: object
    factored_total: object

    @property
    def discrepancy(self):
        return abs(self.total - self.factored_total)

    def agrees(self, rel_tol: float = DEFAULT_REL_TOL) -> bool:
        return self.discrepancy <= rel_tol * max(1, abs(self.factored_total))

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "leading_term": float(self.leading_term),
            "curvature_term": float(self.curvature_term),
            "cross_terms": [float(c) for c in self.cross_terms],
            "total": float(self.total),
            "factored_total": float(self.factored_total),
        }


def tau_k(inv: ScalarInvariants, k: int) -> TensionEvaluation:
    leading, curvature, cross = expand(k)
    lead = rewrite(leading, inv).coeff
    curv = rewrite(curvature, inv).coeff
    cross_values = tuple(rewrite(t, inv).coeff for t in cross)
    total = lead - curv
    for c in cross_values:
        total = total - c
    return TensionEvaluation(k, lead, curv, cross_values, total, factored(inv, k))
