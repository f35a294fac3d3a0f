"""Printed closed-form solutions, evaluated and checked against master polynomials.

Radicals are evaluated in double precision. Every result carries the
scaled residual of its master polynomial so agreement with the certified
roots can be audited; formulas that cannot be evaluated as printed raise
:class:`~kharmonic.errors.FormulaInapplicable` with a diagnostic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import FormulaInapplicable
from .polysolve import MasterPolynomial, classify, master_clifford, master_product_sphere

RESIDUAL_TOL = 1e-9
IMAG_TOL = 1e-8
EXAMPLE_TOL = 1e-6
MATCH_TOL = 1e-9


@dataclass(frozen=True)
class ClosedFormResult:
    values: tuple  # candidate geometric parameters
    residual: float  # max scaled |master polynomial| over the squared values
    source: str
    pairs: tuple = ()  # (r1, r2) pairs for the product-sphere formulas

    def as_dict(self) -> dict:
        return {
            "values": list(self.values),
            "pairs": [list(p) for p in self.pairs],
            "residual": self.residual,
            "source": self.source,
        }


def _max_residual(poly: MasterPolynomial, squares) -> float:
    return max((poly.scaled_residual(x) for x in squares), default=0.0)


def _check_k(k: int, minimum: int = 2) -> None:
    if not isinstance(k, int) or k < minimum:
        raise ValueError(f"k must be an integer >= {minimum}, got {k!r}")


def _real_cbrt(x: float) -> float:
    return math.copysign(abs(x) ** (1 / 3), x)


def corollary_3_9(k: int) -> ClosedFormResult:
    """Clifford tori with m = 2p: ``lambda = sqrt((k-2 +- sqrt(k(k-4)))/2)`` for k >= 5."""
    _check_k(k)
    source = "Corollary 3.9"
    if k <= 4:
        return ClosedFormResult((), 0.0, source)
    disc = math.sqrt(k * (k - 4))
    squares = ((k - 2 + disc) / 2, (k - 2 - disc) / 2)
    values = tuple(math.sqrt(q) for q in squares)
    return ClosedFormResult(values, _max_residual(master_clifford(2, 1, k), squares), source)


def _cardano_a(a: float, k: int) -> complex:
    inner = a * k**4 - 4 * (a * a + a + 1) * k**3 + 12 * (a + 1) ** 2 * k**2
    inner += -4 * (3 * a * a + 10 * a + 3) * k + 4 * (a - 1) ** 2
    radicand = -a * inner
    tail = (-2 * k**3 + 9 * a * (k * k - 2 * k - 2) + 2 * (3 * k * k - 3 * k + 1)) / 54
    scale = 2 * 3**1.5
    if radicand >= 0:
        return math.sqrt(radicand) / scale - tail
    return cmath.sqrt(radicand) / scale - tail


def corollary_3_10(a, k: int) -> ClosedFormResult:
    """The single Cardano-type root printed for Clifford tori with m != 2p.

    ``a = (m-p)/p``. When the radicand inside A is negative, A^{1/3} is the
    principal complex cube root; otherwise the real cube root.
    """
    _check_k(k, 3)
    expr = "Corollary 3.10"
    a_exact = Fraction(a)
    a = float(a_exact)
    if not a > 0:
        raise ValueError("a = (m-p)/p must be positive")
    big_a = _cardano_a(a, k)
    if isinstance(big_a, complex):
        cube = big_a ** (1 / 3)
    else:
        cube = _real_cbrt(big_a)
    if abs(cube) < 1e-12 * max(1.0, k * k, a * k):
        raise FormulaInapplicable(expr, f"A^(1/3) vanishes (A = {big_a!r}); the second term is 0/0")
    square = cube + (k * k - 3 * a * (k - 1) - 2 * k + 1) / (9 * cube) + (k - 1) / 3
    if isinstance(square, complex):
        if abs(square.imag) > IMAG_TOL:
            raise FormulaInapplicable(expr, f"lambda^2 has imaginary part {square.imag:.3e}", value=square)
        square = square.real
    # master polynomial in exact form; m and p only enter through a
    poly = MasterPolynomial(
        "q",
        (-a_exact, (k - 1) * a_exact, Fraction(-(k - 1)), Fraction(1)),
        (Fraction(0), None),
        (a_exact,),
    )
    if not square > 0:
        raise FormulaInapplicable(expr, f"lambda^2 = {square!r} is not positive", value=square)
    residual = poly.scaled_residual(square)
    if residual > RESIDUAL_TOL:
        raise FormulaInapplicable(expr, f"residual {residual:.3e} exceeds {RESIDUAL_TOL}", square, residual)
    if abs(square - a) <= 1e-9 * max(1.0, a):
        raise FormulaInapplicable(
            expr, f"selects the harmonic root lambda^2 = a = {a!r}", value=square, residual=residual
        )
    return ClosedFormResult((math.sqrt(square),), residual, expr)


def corollary_4_8(k: int, n: int = 1) -> ClosedFormResult:
    """Product spheres with n1 = n2: ``r1 = sqrt((1 +- sqrt((k-4)/k))/2)``."""
    _check_k(k)
    source = "Corollary 4.8"
    if k <= 4:
        return ClosedFormResult((), 0.0, source)
    w = math.sqrt((k - 4) / k)
    squares = ((1 + w) / 2, (1 - w) / 2)
    pairs = tuple((math.sqrt(t), math.sqrt(1 - t)) for t in squares)
    residual = _max_residual(master_product_sphere(n, n, k), squares)
    return ClosedFormResult(tuple(r1 for r1, _ in pairs), residual, source, pairs)


def theorem_4_4(k: int) -> float:
    """Radius ``a = 1/sqrt(k)`` of the hypersurface giving proper k-harmonicity."""
    _check_k(k)
    return 1 / math.sqrt(k)


def theorem_4_4_height(k: int) -> float:
    """The matching height ``b = sqrt((k-1)/k)`` (up to sign)."""
    _check_k(k)
    return math.sqrt((k - 1) / k)


# Example 4.9 i: the W^{1/3} coefficients are typeset as "113^{1/3}" and
# "163^{1/3}", which can also be read as 11*3^{1/3} and 16*3^{1/3}.
_EXAMPLE_I_READINGS = {
    "113^(1/3)": 113 ** (1 / 3),
    "11*3^(1/3)": 11 * 3 ** (1 / 3),
}
_EXAMPLE_I_READINGS_R2 = {
    "163^(1/3)": 163 ** (1 / 3),
    "16*3^(1/3)": 16 * 3 ** (1 / 3),
}


def _example_i_squares(c1: float, c2: float) -> tuple[float, float]:
    w = 81 * math.sqrt(19) + 197 * math.sqrt(3)
    den = (3 ** (5 / 3) * w ** (1 / 6)) ** 2
    t1 = (3 ** (1 / 6) * w ** (2 / 3) + c1 * w ** (1 / 3) - 14 * math.sqrt(3)) / den
    t2 = (-(3 ** (1 / 6)) * w ** (2 / 3) + c2 * w ** (1 / 3) + 14 * math.sqrt(3)) / den
    return t1, t2


def _example_ii_squares(c: int) -> tuple[float, float]:
    big_c = c * c + 4 * math.sqrt(c) * (c + 1) + 6 * c + 1
    cr = big_c ** (1 / 3)
    den = 4 * cr * (c + 1)
    t1 = ((c - 1) ** (5 / 3) + (c + 3) * cr + (c - 1) ** (1 / 3) * cr * cr) / den
    t2 = (-((c - 1) ** (5 / 3)) + (3 * c + 1) * cr - (c - 1) ** (1 / 3) * cr * cr) / den
    return t1, t2


def _pair_residual(t1: float, t2: float, c: int, k: int) -> float:
    if not (0 < t1 < 1 and 0 < t2 < 1):
        return math.inf
    worst = 0.0
    for n1 in (1, 2):
        poly = master_product_sphere(n1, c * n1, k)
        worst = max(worst, poly.scaled_residual(t1))
    return max(worst, abs(t1 + t2 - 1))


def example_4_9(case: str, c: int, k: int) -> ClosedFormResult:
    """Product-sphere examples with n2 = c n1.

    Case ``"i"`` (c = 2, k = 3) resolves the typesetting ambiguity by
    taking the reading with the smallest master-polynomial residual; the
    chosen reading is recorded in ``source``. Case ``"ii"`` (k = 4) is
    evaluated as printed.
    """
    if case == "i":
        if c != 2 or k != 3:
            raise ValueError("Example 4.9 i is stated for n2 = 2 n1 and k = 3")
        best = None
        for (n1_name, c1), (n2_name, c2) in product(_EXAMPLE_I_READINGS.items(), _EXAMPLE_I_READINGS_R2.items()):
            t1, t2 = _example_i_squares(c1, c2)
            res = _pair_residual(t1, t2, c, k)
            if best is None or res < best[0]:
                best = (res, t1, t2, f"Example 4.9 i [{n1_name}, {n2_name}]")
        residual, t1, t2, source = best
    elif case == "ii":
        if k != 4 or not isinstance(c, int) or c < 2:
            raise ValueError("Example 4.9 ii is stated for k = 4 and integer c >= 2")
        t1, t2 = _example_ii_squares(c)
        residual = _pair_residual(t1, t2, c, k)
        source = "Example 4.9 ii"
    else:
        raise ValueError(f"unknown case {case!r}")
    if not residual <= EXAMPLE_TOL:
        raise FormulaInapplicable(
            source, f"residual {residual:.3e} exceeds {EXAMPLE_TOL} (r1^2={t1!r}, r2^2={t2!r})",
            value=(t1, t2), residual=residual,
        )
    pair = (math.sqrt(t1), math.sqrt(t2))
    return ClosedFormResult((pair[0],), residual, source, (pair,))


# -- audit ----------------------------------------------------------------------


@dataclass(frozen=True)
class AuditEntry:
    formula: str
    params: dict
    status: str  # "match", "inapplicable" or "fail"
    values: tuple
    certified: tuple
    residual: float
    detail: str = ""

    def as_dict(self) -> dict:
        return {
            "formula": self.formula,
            "params": dict(self.params),
            "status": self.status,
            "values": list(self.values),
            "certified": list(self.certified),
            "residual": self.residual,
            "detail": self.detail,
        }


def _same_set(found, certified, tol=MATCH_TOL) -> bool:
    if len(found) != len(certified):
        return False
    return all(abs(x - y) <= tol for x, y in zip(sorted(found), sorted(certified)))


def _matches_one(value: float, certified, tol=MATCH_TOL) -> bool:
    return any(abs(value - y) <= tol for y in certified)


def audit(k_values=range(2, 11), clifford_dims=None, example_cs=(2, 3, 4, 5)) -> list[AuditEntry]:
    """Check every printed closed form against certified roots.

    Formulas that cannot be applied are reported with status
    ``"inapplicable"`` and the failing expression; ``"fail"`` means a
    formula evaluated cleanly but disagrees with the certified roots.
    """
    k_values = list(k_values)
    entries: list[AuditEntry] = []

    for k in k_values:
        res = corollary_3_9(k)
        cert = classify("clifford", k, m=2, p=1).values
        ok = _same_set(res.values, cert)
        entries.append(AuditEntry("Corollary 3.9", {"k": k}, "match" if ok else "fail", res.values, tuple(cert), res.residual))

        res = corollary_4_8(k)
        cert = classify("product_sphere", k, n1=1, n2=1).values
        ok = _same_set(res.values, cert)
        entries.append(AuditEntry("Corollary 4.8", {"k": k}, "match" if ok else "fail", res.values, tuple(cert), res.residual))

        a = theorem_4_4(k)
        cert = classify("hypersurface", k, n=1).values
        ok = _same_set((a,), cert)
        entries.append(AuditEntry("Theorem 4.4", {"k": k}, "match" if ok else "fail", (a,), tuple(cert), 0.0))

    if clifford_dims is None:
        clifford_dims = [(m, p) for m in range(2, 7) for p in range(1, m) if m != 2 * p]
        clifford_dims.append((2, 1))  # m = 2p: cross-check with corollary_3_9
    for m, p in clifford_dims:
        a = Fraction(m - p, p)
        for k in k_values:
            if k < 3:
                continue
            params = {"m": m, "p": p, "a": str(a), "k": k}
            cert = tuple(classify("clifford", k, m=m, p=p).values)
            try:
                res = corollary_3_10(a, k)
            except FormulaInapplicable as exc:
                entries.append(AuditEntry("Corollary 3.10", params, "inapplicable", (), cert, exc.residual or math.nan, str(exc)))
                continue
            status = "match" if _matches_one(res.values[0], cert) else "fail"
            entries.append(AuditEntry("Corollary 3.10", params, status, res.values, cert, res.residual))

    cases = [("i", 2, 3)] + [("ii", c, 4) for c in example_cs]
    for case, c, k in cases:
        params = {"case": case, "c": c, "k": k}
        cert = tuple(classify("product_sphere", k, n1=1, n2=c).values)
        try:
            res = example_4_9(case, c, k)
        except FormulaInapplicable as exc:
            entries.append(AuditEntry(f"Example 4.9 {case}", params, "inapplicable", (), cert, exc.residual or math.nan, str(exc)))
            continue
        status = "match" if _matches_one(res.values[0], cert) else "fail"
        entries.append(AuditEntry(res.source, params, status, res.values, cert, res.residual))
    return entries
