from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kharmonic import models
from kharmonic.errors import ModelError, NotApplicable
from kharmonic.models import (
    CliffordTorus,
    HypersurfaceSubmersion,
    ProductSphereSubmersion,
    SmallSphere,
    harmonic_parameter,
    invariants,
    is_harmonic,
)

positive_q = st.fractions(min_value=Fraction(1, 50), max_value=50, max_denominator=60).filter(lambda q: q > 0)
unit_open = st.fractions(min_value=Fraction(1, 100), max_value=Fraction(99, 100), max_denominator=100)


@st.composite
def clifford_models(draw):
    m = draw(st.integers(2, 12))
    p = draw(st.integers(1, m - 1))
    return CliffordTorus(m, p, draw(positive_q))


# -- examples -------------------------------------------------------------------


def test_small_sphere_at_inverse_sqrt2():
    inv = invariants(SmallSphere(2, Fraction(1, 2)))
    assert (inv.m_eff, inv.beta, inv.tau2) == (2, 2, 4)
    assert inv.c == pytest.approx(1.0, abs=1e-15)


def test_clifford_harmonic_point():
    inv = invariants(CliffordTorus(2, 1, Fraction(1)))
    assert (inv.m_eff, inv.beta, inv.tau2) == (2, 2, 0)


def test_product_sphere_tau2_two_ways():
    r1 = math.sqrt((1 + math.sqrt(1 / 5)) / 2)
    model = ProductSphereSubmersion.with_radius(1, 1, r1)
    r2 = model.r2
    inv = invariants(model)
    assert inv.tau2 == pytest.approx((r1 / r2 - r2 / r1) ** 2, abs=1e-12)
    assert inv.tau2 * r1**2 * r2**2 == pytest.approx((2 * r1**2 - 1) ** 2, abs=1e-12)


def test_is_harmonic_examples():
    assert is_harmonic(CliffordTorus.with_lambda(4, 1, math.sqrt(3)))
    assert not is_harmonic(SmallSphere.with_radius(3, 0.5))
    assert invariants(SmallSphere.with_radius(3, 0.5)).tau2 == pytest.approx(27)
    assert is_harmonic(ProductSphereSubmersion.with_radius(2, 6, 0.5))


def test_harmonic_parameter_examples():
    assert harmonic_parameter("clifford", m=2, p=1) == 1.0
    assert harmonic_parameter("product_sphere", n1=1, n2=3) == 0.5
    with pytest.raises(NotApplicable):
        harmonic_parameter("small_sphere", m=2)
    with pytest.raises(NotApplicable):
        harmonic_parameter("hypersurface", n=3)


@pytest.mark.parametrize(
    "build",
    [
        lambda: CliffordTorus(2, 2, 1),
        lambda: CliffordTorus(3, 0, 1),
        lambda: CliffordTorus(3, 1, 0),
        lambda: CliffordTorus.with_lambda(3, 1, -1.0),
        lambda: SmallSphere(2, 1),
        lambda: SmallSphere(0, 0.5),
        lambda: HypersurfaceSubmersion(2, 0),
        lambda: ProductSphereSubmersion(1, 1, 1.5),
        lambda: ProductSphereSubmersion(1, True, 0.5),
    ],
)
def test_invalid_models_rejected(build):
    with pytest.raises(ModelError):
        build()


def test_is_harmonic_rejects_bad_tol():
    with pytest.raises(ValueError):
        is_harmonic(SmallSphere(2, 0.5), tol=0)


def test_build_dispatch():
    assert models.build("hypersurface", Fraction(1, 3), n=4) == HypersurfaceSubmersion(4, Fraction(1, 3))
    with pytest.raises(ValueError):
        models.build("torus", 0.5)


# -- properties -----------------------------------------------------------------


@given(clifford_models())
def test_clifford_tau2_below_m_beta(model):
    inv = invariants(model)
    assert inv.tau2 < model.m * inv.beta


@given(clifford_models())
def test_clifford_swap_symmetry(model):
    swapped = CliffordTorus(model.m, model.m - model.p, 1 / model.q)
    a, b = invariants(model), invariants(swapped)
    assert (a.beta, a.tau2) == (b.beta, b.tau2)


@given(st.integers(1, 12), unit_open)
def test_small_sphere_saturates_cauchy_schwarz(m, a2):
    inv = invariants(SmallSphere(m, a2))
    assert inv.beta / inv.m_eff == (1 - a2) / a2
    assert inv.tau2 == inv.m_eff * inv.beta


@given(st.integers(1, 8), st.integers(1, 8), positive_q)
def test_product_sphere_matches_clifford(n1, n2, q):
    t = 1 / (1 + q)
    prod = invariants(ProductSphereSubmersion(n1, n2, t))
    cliff = invariants(CliffordTorus(n1 + n2, n1, q))
    assert (prod.m_eff, prod.beta, prod.tau2) == (cliff.m_eff, cliff.beta, cliff.tau2)
    # same check through floating point
    fprod = invariants(ProductSphereSubmersion(n1, n2, float(t)))
    assert fprod.beta == pytest.approx(float(cliff.beta), rel=1e-12)
    assert fprod.tau2 == pytest.approx(float(cliff.tau2), rel=1e-12, abs=1e-12)


@given(st.integers(1, 8), st.integers(1, 8))
def test_product_harmonic_parameter_kills_tension(n1, n2):
    r1 = harmonic_parameter("product_sphere", n1=n1, n2=n2)
    assert invariants(ProductSphereSubmersion(n1, n2, Fraction(n1, n1 + n2))).tau2 == 0
    assert is_harmonic(ProductSphereSubmersion.with_radius(n1, n2, r1), tol=1e-7)


def test_mpf_conversion_is_lossless():
    import mpmath

    with mpmath.workdps(50):
        inv = invariants(CliffordTorus(5, 2, Fraction(1, 3))).convert(mpmath.mpf)
        assert abs(inv.beta - (mpmath.mpf(2) / 3 + 9)) < mpmath.mpf(10) ** -45
