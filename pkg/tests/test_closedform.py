from __future__ import annotations

import math
from fractions import Fraction

import pytest

from kharmonic import closedform
from kharmonic.closedform import (
    audit,
    corollary_3_9,
    corollary_3_10,
    corollary_4_8,
    example_4_9,
    theorem_4_4,
    theorem_4_4_height,
)
from kharmonic.errors import FormulaInapplicable
from kharmonic.models import HypersurfaceSubmersion, invariants
from kharmonic.polysolve import classify, master_clifford, master_product_sphere
from kharmonic.tension import tau_k


def test_corollary_3_9_empty_below_5():
    for k in (2, 3, 4):
        assert corollary_3_9(k).values == ()


def test_corollary_3_9_k5():
    res = corollary_3_9(5)
    assert sorted(res.values) == pytest.approx([0.6180339887, 1.6180339887], abs=1e-10)
    assert res.values[0] == pytest.approx(math.sqrt((3 + math.sqrt(5)) / 2), rel=1e-15)


def test_corollary_3_9_k6():
    res = corollary_3_9(6)
    squares = sorted(v * v for v in res.values)
    assert squares == pytest.approx([2 - math.sqrt(3), 2 + math.sqrt(3)], rel=1e-14)
    poly = master_clifford(2, 1, 6)
    assert all(abs(poly(q)) < 1e-12 for q in squares)


@pytest.mark.parametrize("k", range(5, 13))
def test_corollary_3_9_branch_completeness(k):
    res = corollary_3_9(k)
    assert sorted(res.values) == pytest.approx(classify("clifford", k, m=2, p=1).values, abs=1e-10)
    q_plus, q_minus = (v * v for v in res.values)
    assert q_plus * q_minus == pytest.approx(1.0, abs=1e-12)
    assert res.residual <= 1e-9


@pytest.mark.parametrize("k", range(5, 11))
def test_corollary_4_8_matches_3_9_under_bijection(k):
    t_values = sorted(r * r for r in corollary_4_8(k).values)
    from_q = sorted(1 / (1 + v * v) for v in corollary_3_9(k).values)
    assert t_values == pytest.approx(from_q, abs=1e-12)


def test_corollary_4_8_examples():
    res = corollary_4_8(5)
    (r1a, r2a), (r1b, r2b) = res.pairs
    assert r1a**2 == pytest.approx(0.72360680, abs=1e-8)
    assert r2a**2 == pytest.approx(0.27639320, abs=1e-8)
    assert r1a**2 * r2a**2 == pytest.approx(1 / 5, abs=1e-12)
    assert corollary_4_8(4).values == ()
    for n in (1, 2, 3):
        res = corollary_4_8(8, n)
        assert res.values[0] ** 2 == pytest.approx((1 + math.sqrt(0.5)) / 2, rel=1e-15)
        poly = master_product_sphere(n, n, 8)
        assert max(poly.scaled_residual(v * v) for v in res.values) <= 1e-10


def test_theorem_4_4_examples():
    assert theorem_4_4(2) == pytest.approx(1 / math.sqrt(2), rel=1e-15)
    assert theorem_4_4(9) == pytest.approx(1 / 3, rel=1e-15)
    assert theorem_4_4(3) ** 2 + theorem_4_4_height(3) ** 2 == pytest.approx(1.0)
    for n in range(1, 6):
        ev = tau_k(invariants(HypersurfaceSubmersion.with_radius(n, theorem_4_4(3))), 3)
        assert abs(ev.total) <= 1e-10


def test_corollary_3_10_a2_k3_matches_bisection():
    res = corollary_3_10(2, 3)
    lo, hi = 0.0, 2.0
    f = lambda q: q**3 - 2 * q**2 + 4 * q - 2  # noqa: E731
    for _ in range(200):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if f(mid) < 0 else (lo, mid)
    assert res.values[0] ** 2 == pytest.approx(lo, abs=1e-9)
    assert res.source == "Corollary 3.10"


def test_corollary_3_10_a1_k5_reproduces_3_9_or_flags():
    try:
        res = corollary_3_10(1, 5)
    except FormulaInapplicable as exc:
        assert exc.expression == "Corollary 3.10"
        return
    assert any(abs(res.values[0] - v) <= 1e-9 for v in corollary_3_9(5).values)


def test_corollary_3_10_a3_k4():
    try:
        res = corollary_3_10(3, 4)
    except FormulaInapplicable:
        pytest.fail("expected the printed root to be usable for a=3, k=4")
    assert master_clifford(4, 1, 4).scaled_residual(res.values[0] ** 2) <= 1e-9


@pytest.mark.parametrize("a,k", [(2, 7), (3, 10), (1, 4)])
def test_corollary_3_10_flags_vanishing_cube_root(a, k):
    with pytest.raises(FormulaInapplicable) as info:
        corollary_3_10(a, k)
    assert "A^(1/3)" in str(info.value)


def test_corollary_3_10_flags_harmonic_selection():
    with pytest.raises(FormulaInapplicable, match="harmonic"):
        corollary_3_10(1, 3)


def test_corollary_3_10_rejects_bad_input():
    with pytest.raises(ValueError):
        corollary_3_10(0, 5)
    with pytest.raises(ValueError):
        corollary_3_10(2, 2)


def test_example_4_9_i_reading():
    res = example_4_9("i", 2, 3)
    assert "11*3^(1/3)" in res.source and "16*3^(1/3)" in res.source
    cert = classify("product_sphere", 3, n1=1, n2=2).values
    assert any(abs(res.values[0] - v) <= 1e-9 for v in cert)
    (r1, r2), = res.pairs
    assert r1 * r1 + r2 * r2 == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("c", [2, 3, 4, 5])
def test_example_4_9_ii(c):
    res = example_4_9("ii", c, 4)
    (r1, r2), = res.pairs
    assert r1 * r1 + r2 * r2 == pytest.approx(1.0, abs=1e-10)
    cert = classify("product_sphere", 4, n1=1, n2=c).values
    assert any(abs(res.values[0] - v) <= 1e-9 for v in cert)


def test_example_4_9_ii_big_c_value():
    c = 2
    big_c = c * c + 4 * math.sqrt(c) * (c + 1) + 6 * c + 1
    assert big_c == pytest.approx(17 + 12 * math.sqrt(2), rel=1e-15)


def test_example_4_9_bad_case():
    with pytest.raises(ValueError):
        example_4_9("iii", 2, 3)
    with pytest.raises(ValueError):
        example_4_9("i", 3, 3)
    with pytest.raises(ValueError):
        example_4_9("ii", 2, 5)


def test_formula_inapplicable_carries_context():
    exc = FormulaInapplicable("X", "reason", value=1.5, residual=2.0)
    assert exc.expression == "X" and exc.residual == 2.0
    assert "X" in str(exc)


def test_audit_has_no_failures():
    entries = audit()
    assert entries
    statuses = {e.status for e in entries}
    assert "fail" not in statuses
    for e in entries:
        if e.status == "inapplicable":
            assert e.detail
        else:
            assert e.residual <= closedform.EXAMPLE_TOL
    d = entries[0].as_dict()
    assert set(d) == {"formula", "params", "status", "values", "certified", "residual", "detail"}


def test_audit_covers_every_formula():
    formulas = {e.formula.split(" [")[0] for e in audit(range(3, 6))}
    assert {"Corollary 3.9", "Corollary 3.10", "Corollary 4.8", "Theorem 4.4", "Example 4.9 i", "Example 4.9 ii"} <= formulas


def test_corollary_3_10_exact_a_accepted():
    res = corollary_3_10(Fraction(1, 2), 5)
    assert master_clifford(3, 2, 5).scaled_residual(res.values[0] ** 2) <= 1e-9
