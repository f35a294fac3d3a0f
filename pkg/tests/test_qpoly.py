from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from kharmonic import qpoly

X = sympy.Symbol("x")

small_ints = st.integers(min_value=-6, max_value=6)
polys = st.lists(small_ints, min_size=1, max_size=6).map(qpoly.make)


def to_sympy(p):
    return sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in p])) or [0], X)


def from_sympy(sp):
    return qpoly.make(Fraction(int(c.p), int(c.q)) for c in reversed(sp.all_coeffs()))


def test_make_trims_trailing_zeros():
    assert qpoly.make([1, 2, 0, 0]) == (Fraction(1), Fraction(2))
    assert qpoly.make([0, 0]) == ()


def test_to_str():
    assert qpoly.to_str(qpoly.make([-1, 3, -3, 1]), "q") == "q^3 - 3*q^2 + 3*q - 1"
    assert qpoly.to_str(()) == "0"


@given(polys.filter(bool), polys.filter(bool))
def test_mul_matches_sympy(p, q):
    assert qpoly.mul(p, q) == from_sympy(to_sympy(p) * to_sympy(q))


@given(polys, polys.filter(bool))
def test_divmod_reconstructs(p, q):
    quot, rem = qpoly.divmod_(p, q)
    assert qpoly.add(qpoly.mul(quot, q), rem) == p
    assert qpoly.degree(rem) < qpoly.degree(q)


@given(polys.filter(lambda p: qpoly.degree(p) >= 1), polys.filter(lambda p: qpoly.degree(p) >= 1))
@settings(max_examples=60)
def test_gcd_matches_sympy(p, q):
    expected = from_sympy(sympy.gcd(to_sympy(p), to_sympy(q)).monic())
    assert qpoly.gcd(p, q) == expected


def test_yun_on_known_product():
    # (x-1)^3 (x+2)^2 (x-5)
    p = qpoly.mul(qpoly.power(qpoly.make([-1, 1]), 3), qpoly.mul(qpoly.power(qpoly.make([2, 1]), 2), qpoly.make([-5, 1])))
    parts = dict((m, f) for f, m in qpoly.squarefree_decomposition(p))
    assert parts == {1: qpoly.make([-5, 1]), 2: qpoly.make([2, 1]), 3: qpoly.make([-1, 1])}


@given(st.lists(st.tuples(st.integers(-5, 5), st.integers(1, 3)), min_size=1, max_size=3))
@settings(max_examples=60)
def test_yun_multiplicities_match_sympy(factors):
    p = (Fraction(1),)
    for root, mult in factors:
        p = qpoly.mul(p, qpoly.power(qpoly.make([-root, 1]), mult))
    ours = sorted((qpoly.degree(f), m) for f, m in qpoly.squarefree_decomposition(p))
    _, theirs = sympy.sqf_list(to_sympy(p))
    assert ours == sorted((f.degree(), m) for f, m in theirs)


@given(polys.filter(lambda p: qpoly.degree(p) >= 1), st.fractions(-10, 10, max_denominator=50))
def test_sign_at_is_exact(p, x):
    value = qpoly.evaluate(p, x)
    assert qpoly.sign_at(p, x) == (value > 0) - (value < 0)


@given(polys.filter(lambda p: qpoly.degree(p) >= 1))
@settings(max_examples=80)
def test_sturm_count_matches_sympy(p):
    g = qpoly.squarefree_part(p)
    bound = qpoly.positive_root_bound(g)
    seq = qpoly.sturm_sequence(g)
    count = qpoly.sign_variations(seq, -bound) - qpoly.sign_variations(seq, bound)
    assert count == len(set(sympy.real_roots(to_sympy(p))))


@given(polys.filter(lambda p: qpoly.degree(p) >= 1))
def test_root_bound_encloses_roots(p):
    bound = qpoly.positive_root_bound(p)
    for r in sympy.real_roots(to_sympy(p)):
        assert abs(r) < bound


def test_evaluate_types():
    p = qpoly.make([Fraction(1, 3), 0, 1])
    assert qpoly.evaluate(p, Fraction(1, 2)) == Fraction(7, 12)
    assert qpoly.evaluate(p, 0.5) == pytest.approx(7 / 12, rel=1e-15)


def test_divide_by_zero():
    with pytest.raises(ZeroDivisionError):
        qpoly.divmod_(qpoly.make([1]), ())
