"""Master polynomials and certified real-root classification.

Each family's k-harmonicity condition becomes a polynomial with exact
rational coefficients in a squared parameter: ``q = lambda^2`` (Clifford
tori), ``t = r1^2`` (product spheres) or ``x = a^2`` (hypersurfaces and
small spheres). Real roots inside the geometric domain are isolated with
Sturm sequences over the rationals, refined by certified bisection with
Newton proposals, and the harmonic loci are split off as excluded roots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

import mpmath

from . import qpoly
from .errors import ResidualCheckFailed
from .models import build, invariants
from .tension import tau_k

DEFAULT_WIDTH = 1e-12
DEFAULT_RESIDUAL_TOL = 1e-9

# precision used for the tension residual of a reported root
_CHECK_WIDTH = Fraction(1, 10**40)
_CHECK_DPS = 60


@dataclass(frozen=True)
class MasterPolynomial:
    variable: str
    coeffs: tuple  # ascending, Fractions
    domain: tuple  # (lo, hi); hi is None for an unbounded domain
    excluded_roots: tuple = ()
    family: str = ""
    dims: dict = field(default_factory=dict)
    k: int = 0

    def __post_init__(self):
        if not self.coeffs or self.coeffs[-1] == 0:
            raise ValueError("leading coefficient must be nonzero")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        return qpoly.evaluate(self.coeffs, x)

    def scaled_residual(self, x: float) -> float:
        """``|P(x)| / sum |c_i| |x|^i``: backward error of a candidate root."""
        num = abs(sum(float(c) * x ** i for i, c in enumerate(self.coeffs)))
        den = sum(abs(float(c)) * abs(x) ** i for i, c in enumerate(self.coeffs))
        return num / den if den else num

    def __str__(self) -> str:
        return qpoly.to_str(self.coeffs, self.variable)


@dataclass(frozen=True)
class IsolatingInterval:
    """Closed rational interval holding exactly one distinct root.

    ``lo == hi`` marks an exactly known rational root.
    """

    lo: Fraction
    hi: Fraction
    multiplicity: int = 1

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


@dataclass(frozen=True)
class Root:
    interval: IsolatingInterval
    square: float  # root in the squared variable
    value: float  # geometric parameter: sqrt(square)
    multiplicity: int
    residual: Optional[float] = None  # |tau_k total| at the root

    def as_dict(self) -> dict:
        return {
            "interval": [str(self.interval.lo), str(self.interval.hi)],
            "square": self.square,
            "value": self.value,
            "multiplicity": self.multiplicity,
            "residual": self.residual,
        }


@dataclass(frozen=True)
class RootReport:
    family: str
    dims: dict
    k: int
    variable: str
    polynomial: str
    certified_count: int
    proper_roots: tuple
    excluded: tuple

    @property
    def values(self) -> list[float]:
        return [r.value for r in self.proper_roots]

    def as_dict(self) -> dict:
        return {
            "family": self.family,
            "dims": dict(self.dims),
            "k": self.k,
            "variable": self.variable,
            "polynomial": self.polynomial,
            "certified_count": self.certified_count,
            "proper_roots": [r.as_dict() for r in self.proper_roots],
            "excluded": [r.as_dict() for r in self.excluded],
        }


# -- master polynomials -------------------------------------------------------


def _check_k(k: int) -> None:
    if isinstance(k, bool) or not isinstance(k, int) or k < 2:
        raise ValueError(f"k must be an integer >= 2, got {k!r}")


def master_clifford(m: int, p: int, k: int) -> MasterPolynomial:
    """Condition on ``q = lambda^2`` with the harmonic factor ``q - (m-p)/p`` removed.

    k >= 3: ``q^3 - (k-1) q^2 + (k-1) a q - a`` with ``a = (m-p)/p``.
    k = 2: ``p q^2 - m q + (m-p)``, i.e. ``|B|^2 = m`` (this one still has
    the harmonic root).
    """
    if not (isinstance(m, int) and isinstance(p, int) and 1 <= p <= m - 1):
        raise ValueError(f"need 1 <= p <= m-1, got m={m!r}, p={p!r}")
    _check_k(k)
    a = Fraction(m - p, p)
    if k == 2:
        coeffs = qpoly.make([m - p, -m, p])
    else:
        coeffs = qpoly.make([-a, (k - 1) * a, -(k - 1), 1])
    return MasterPolynomial("q", coeffs, (Fraction(0), None), (a,), "clifford", {"m": m, "p": p}, k)


def prop35_clifford(m: int, p: int, k: int) -> tuple:
    """``q^2 (|B|^4 - m |B|^2 - (k-2) |tau|^2)`` for the Clifford torus, exactly.

    Built from ``|B|^2 = p q + (m-p)/q`` and ``|tau|^2 = (p q - (m-p))^2 / q``
    without reference to the factored cubic.
    """
    A = Fraction(m - p)
    q2_beta = qpoly.make([A, 0, p])  # q * beta
    lin = qpoly.make([-A, p])  # p q - (m-p)
    q = qpoly.make([0, 1])
    term1 = qpoly.mul(q2_beta, q2_beta)
    term2 = qpoly.scale(qpoly.mul(q, q2_beta), m)
    term3 = qpoly.scale(qpoly.mul(q, qpoly.mul(lin, lin)), k - 2)
    return qpoly.sub(qpoly.sub(term1, term2), term3)


def master_product_sphere(n1: int, n2: int, k: int) -> MasterPolynomial:
    """Quartic in ``t = r1^2``: the condition times ``t^2 (1-t)^2``."""
    if not (isinstance(n1, int) and isinstance(n2, int) and n1 >= 1 and n2 >= 1):
        raise ValueError(f"need n1, n2 >= 1, got {n1!r}, {n2!r}")
    _check_k(k)
    n = n1 + n2
    one_minus = qpoly.make([1, -1])
    t = qpoly.make([0, 1])
    s = qpoly.mul(t, one_minus)  # t(1-t)
    big_n = qpoly.add(qpoly.scale(qpoly.mul(one_minus, one_minus), n1), qpoly.scale(qpoly.mul(t, t), n2))
    lin = qpoly.sub(qpoly.scale(t, n2), qpoly.scale(one_minus, n1))
    coeffs = qpoly.sub(
        qpoly.sub(qpoly.mul(big_n, big_n), qpoly.scale(qpoly.mul(big_n, s), n)),
        qpoly.scale(qpoly.mul(qpoly.mul(lin, lin), s), k - 2),
    )
    return MasterPolynomial(
        "t", coeffs, (Fraction(0), Fraction(1)), (Fraction(n1, n),), "product_sphere", {"n1": n1, "n2": n2}, k
    )


def master_hypersurface(n: int, k: int, family: str = "hypersurface") -> MasterPolynomial:
    """``k x - 1`` in ``x = a^2``; there is no harmonic locus."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"need n >= 1, got {n!r}")
    _check_k(k)
    dims = {"m": n} if family == "small_sphere" else {"n": n}
    return MasterPolynomial("x", qpoly.make([-1, k]), (Fraction(0), Fraction(1)), (), family, dims, k)


def master_polynomial(family: str, k: int, **dims) -> MasterPolynomial:
    if family == "clifford":
        return master_clifford(dims["m"], dims["p"], k)
    if family == "product_sphere":
        return master_product_sphere(dims["n1"], dims["n2"], k)
    if family == "hypersurface":
        return master_hypersurface(dims["n"], k)
    if family == "small_sphere":
        return master_hypersurface(dims["m"], k, family="small_sphere")
    raise ValueError(f"unknown family {family!r}")


# -- isolation ----------------------------------------------------------------


def _strip_endpoint_roots(g: tuple, lo: Fraction, hi: Fraction) -> tuple:
    for end in (lo, hi):
        if qpoly.evaluate(g, end) == 0:
            g = qpoly.divmod_(g, qpoly.make([-end, 1]))[0]
    return g


def _split_point(g: tuple, lo: Fraction, hi: Fraction) -> Fraction:
    """A point strictly inside (lo, hi) that is not a root of g."""
    for num, den in ((1, 2), (1, 3), (2, 3), (2, 5), (3, 5), (3, 7), (4, 7)):
        x = lo + (hi - lo) * num / den
        if qpoly.evaluate(g, x) != 0:
            return x
    # g has at most deg(g) roots; walk a finer grid
    den = 11
    while True:
        for num in range(1, den):
            x = lo + (hi - lo) * Fraction(num, den)
            if qpoly.evaluate(g, x) != 0:
                return x
        den += 2


def _isolate_squarefree(g: tuple, lo: Fraction, hi: Fraction) -> list[tuple[Fraction, Fraction]]:
    """Intervals (lo, hi) with non-root endpoints, one root of g each."""
    if qpoly.degree(g) < 1:
        return []
    if qpoly.degree(g) == 1:
        r = -g[0] / g[1]
        return [(r, r)] if lo < r < hi else []
    seq = qpoly.sturm_sequence(g)
    out = []
    stack = [(lo, hi, qpoly.sign_variations(seq, lo) - qpoly.sign_variations(seq, hi))]
    while stack:
        a, b, count = stack.pop()
        if count == 0:
            continue
        if count == 1:
            out.append((a, b))
            continue
        mid = _split_point(g, a, b)
        v_mid = qpoly.sign_variations(seq, mid)
        stack.append((mid, b, v_mid - qpoly.sign_variations(seq, b)))
        stack.append((a, mid, qpoly.sign_variations(seq, a) - v_mid))
    return sorted(out)


def _bisect_once(ig: tuple, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """One bisection step; ``ig`` holds integer coefficients."""
    mid = (lo + hi) / 2
    s_mid = qpoly.int_sign(ig, mid)
    if s_mid == 0:
        return mid, mid
    if qpoly.int_sign(ig, lo) * s_mid < 0:
        return lo, mid
    return mid, hi


def _domain_bounds(poly: MasterPolynomial, g: tuple) -> tuple[Fraction, Fraction]:
    lo, hi = poly.domain
    if hi is None:
        hi = qpoly.positive_root_bound(g)
    return Fraction(lo), Fraction(hi)


def isolate_roots(poly: MasterPolynomial) -> list[IsolatingInterval]:
    """Pairwise disjoint isolating intervals for the distinct roots in the domain.

    Roots are grouped by multiplicity through a squarefree decomposition;
    within each factor the count comes from a Sturm sequence.
    """
    found: list[tuple[Fraction, Fraction, int, tuple]] = []
    for factor, mult in qpoly.squarefree_decomposition(poly.coeffs):
        lo, hi = _domain_bounds(poly, factor)
        g = _strip_endpoint_roots(factor, lo, hi)
        for a, b in _isolate_squarefree(g, lo, hi):
            found.append((a, b, mult, g))
    # roots of distinct factors are distinct; shrink until the intervals separate
    while True:
        found.sort(key=lambda r: (r[0], r[1]))
        clash = next(
            (i for i in range(len(found) - 1) if found[i][1] >= found[i + 1][0]),
            None,
        )
        if clash is None:
            break
        for j in (clash, clash + 1):
            a, b, mult, g = found[j]
            if a != b:
                a, b = _bisect_once(qpoly.integer_coeffs(g), a, b)
            found[j] = (a, b, mult, g)
    return [IsolatingInterval(a, b, mult) for a, b, mult, _ in found]


# -- refinement ---------------------------------------------------------------


def _to_fraction(x) -> Fraction:
    if isinstance(x, mpmath.mpf):
        man, exp = x.man_exp
        return Fraction(int(man)) * Fraction(2) ** int(exp)
    return Fraction(x)


def refine_bracket(g: tuple, lo: Fraction, hi: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    """Shrink a sign-changing bracket of a squarefree g below ``width``.

    Each step proposes a Newton iterate (in doubles, then extended precision),
    then certifies a tight bracket around it by an exact sign test. When the
    certificate fails the step falls back to plain bisection.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if lo == hi:
        return lo, hi
    ig = qpoly.integer_coeffs(g)
    s_lo, s_hi = qpoly.int_sign(ig, lo), qpoly.int_sign(ig, hi)
    if s_lo == 0:
        return lo, lo
    if s_hi == 0:
        return hi, hi
    if s_lo * s_hi > 0:
        raise ValueError("interval does not bracket a sign change")
    dg = qpoly.derivative(g)
    x = (lo + hi) / 2
    with mpmath.workdps(max(30, int(-math.log10(float(width))) + 20)):
        while hi - lo > width:
            # doubles suffice for the proposal until the bracket nears rounding level
            if hi - lo > 1e-11 * max(1.0, abs(float(hi))):
                xm = float(x)
            else:
                xm = mpmath.mpf(x.numerator) / x.denominator
            slope = qpoly.evaluate(dg, xm)
            stepped = False
            if slope != 0:
                step = qpoly.evaluate(g, xm) / slope
                c = _to_fraction(xm - step)
                # Newton error after the step is far below the step itself
                delta = max(_to_fraction(abs(step)), width / 4)
                a, b = max(lo, c - delta), min(hi, c + delta)
                if a < b and b - a <= (hi - lo) / 2:
                    sa, sb = qpoly.int_sign(ig, a), qpoly.int_sign(ig, b)
                    if sa == 0:
                        return a, a
                    if sb == 0:
                        return b, b
                    if sa * sb < 0:
                        lo, hi = a, b
                        x = c if a <= c <= b else (a + b) / 2
                        stepped = True
            if not stepped:
                lo, hi = _bisect_once(ig, lo, hi)
                if lo == hi:
                    return lo, hi
                x = (lo + hi) / 2
    return lo, hi


def refine_root(poly: MasterPolynomial, interval: IsolatingInterval, tol: float = DEFAULT_WIDTH) -> float:
    """Root inside ``interval`` as a float, from a bracket of width <= tol."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    g = qpoly.squarefree_part(poly.coeffs)
    lo, hi = refine_bracket(g, interval.lo, interval.hi, Fraction(tol))
    value = float((lo + hi) / 2)
    return min(max(value, float(lo)), float(hi))


def _residual(family: str, dims: dict, k: int, square) -> float:
    model = build(family, square, **dims)
    inv = invariants(model).convert(mpmath.mpf)
    return float(abs(tau_k(inv, k).total))


def split_roots(poly: MasterPolynomial, tol: float = DEFAULT_WIDTH) -> tuple[list[Root], list[Root], int]:
    """Proper and excluded (harmonic) roots of a master polynomial in its domain.

    Returns ``(proper, excluded, certified_count)``. A root is excluded when
    an excluded rational lies in its isolating interval and is an exact root.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    g = qpoly.squarefree_part(poly.coeffs)
    proper, excluded = [], []
    intervals = isolate_roots(poly)
    for iv in intervals:
        harmonic = next((e for e in poly.excluded_roots if e in iv and qpoly.sign_at(g, e) == 0), None)
        if harmonic is not None:
            # known exactly; keep the certified interval from isolation
            excluded.append(Root(iv, float(harmonic), math.sqrt(harmonic), iv.multiplicity))
            continue
        lo, hi = refine_bracket(g, iv.lo, iv.hi, Fraction(tol))
        square = min(max(float((lo + hi) / 2), float(lo)), float(hi))
        proper.append(Root(IsolatingInterval(lo, hi, iv.multiplicity), square, math.sqrt(square), iv.multiplicity))
    return proper, excluded, len(intervals)


def classify(
    family: str,
    k: int,
    tol: float = DEFAULT_WIDTH,
    residual_tol: float = DEFAULT_RESIDUAL_TOL,
    **dims,
) -> RootReport:
    """Certified proper k-harmonic parameters of a family.

    Every proper root is re-checked against the term-by-term tension
    oracle at extended precision; a failure raises
    :class:`ResidualCheckFailed`.
    """
    poly = master_polynomial(family, k, **dims)
    g = qpoly.squarefree_part(poly.coeffs)
    candidates, excluded, count = split_roots(poly, tol)
    proper = []
    for root in candidates:
        lo, hi = refine_bracket(g, root.interval.lo, root.interval.hi, _CHECK_WIDTH)
        with mpmath.workdps(_CHECK_DPS):
            mid = (lo + hi) / 2
            residual = _residual(family, dims, k, mpmath.mpf(mid.numerator) / mid.denominator)
        if not residual <= residual_tol:
            raise ResidualCheckFailed(
                f"{family} {dims} k={k}: root {root.square!r} has tension residual {residual:.3e}"
            )
        proper.append(replace(root, residual=residual))
    return RootReport(family, dict(dims), k, poly.variable, str(poly), count, tuple(proper), tuple(excluded))
