"""Model geometries and their scalar invariants.

Four families are supported:

* ``SmallSphere`` -- the totally umbilic immersion S^m(a) -> S^{m+1}.
* ``CliffordTorus`` -- the generalized Clifford torus
  S^p(1/sqrt(1+lam^2)) x S^{m-p}(lam/sqrt(1+lam^2)) -> S^{m+1}.
* ``HypersurfaceSubmersion`` -- a harmonic Riemannian submersion onto
  S^n(a) followed by the inclusion S^n(a) -> S^{n+1}.
* ``ProductSphereSubmersion`` -- harmonic Riemannian submersions onto
  S^{n1}(r1) x S^{n2}(r2) followed by the inclusion into S^{n+1}.

Each model stores its *squared* parameter (a^2, lam^2 or r1^2). Passing a
``Fraction`` keeps every invariant exact; floats and mpmath numbers are
carried through unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Optional, Union

import mpmath

from .errors import ModelError, NotApplicable

Number = Union[int, Fraction, float, mpmath.mpf]

FAMILIES = ("small_sphere", "clifford", "hypersurface", "product_sphere")

DEFAULT_HARMONIC_TOL = 1e-10


def sqrt(x):
    """Square root that keeps mpmath numbers in mpmath."""
    if isinstance(x, mpmath.mpf):
        return mpmath.sqrt(x)
    return math.sqrt(x)


def _check_dim(name: str, value, minimum: int = 1) -> None:
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ModelError(f"{name} must be an integer >= {minimum}, got {value!r}")


def _check_open_unit(name: str, value) -> None:
    if not isinstance(value, (Real, mpmath.mpf)) or not 0 < value < 1:
        raise ModelError(f"{name} must lie in (0, 1), got {value!r}")


@dataclass(frozen=True)
class ScalarInvariants:
    """Trace dimension, ``|B|^2``, ``|tau|^2`` and (umbilic case) the scale c."""

    m_eff: int
    beta: Number
    tau2: Number
    c: Optional[Number] = None

    def convert(self, kind) -> "ScalarInvariants":
        """Same invariants with every real field passed through ``kind``."""
        c = None if self.c is None else _as(kind, self.c)
        return ScalarInvariants(self.m_eff, _as(kind, self.beta), _as(kind, self.tau2), c)


def _as(kind, value):
    if kind is mpmath.mpf and isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    return kind(value)


@dataclass(frozen=True)
class SmallSphere:
    m: int
    a2: Number

    family = "small_sphere"

    def __post_init__(self):
        _check_dim("m", self.m)
        _check_open_unit("a^2", self.a2)

    @classmethod
    def with_radius(cls, m: int, a: Number) -> "SmallSphere":
        return cls(m, a * a)

    @property
    def a(self):
        return sqrt(self.a2)

    @property
    def dims(self) -> dict:
        return {"m": self.m}


@dataclass(frozen=True)
class CliffordTorus:
    m: int
    p: int
    q: Number  # lambda^2

    family = "clifford"

    def __post_init__(self):
        _check_dim("m", self.m, 2)
        if isinstance(self.p, bool) or not isinstance(self.p, int) or not 1 <= self.p <= self.m - 1:
            raise ModelError(f"p must satisfy 1 <= p <= m-1 (m={self.m}), got {self.p!r}")
        if not self.q > 0:
            raise ModelError(f"lambda^2 must be positive, got {self.q!r}")

    @classmethod
    def with_lambda(cls, m: int, p: int, lam: Number) -> "CliffordTorus":
        if not lam > 0:
            raise ModelError(f"lambda must be positive, got {lam!r}")
        return cls(m, p, lam * lam)

    @property
    def lam(self):
        return sqrt(self.q)

    @property
    def dims(self) -> dict:
        return {"m": self.m, "p": self.p}


@dataclass(frozen=True)
class HypersurfaceSubmersion:
    n: int
    a2: Number

    family = "hypersurface"

    def __post_init__(self):
        _check_dim("n", self.n)
        _check_open_unit("a^2", self.a2)

    @classmethod
    def with_radius(cls, n: int, a: Number) -> "HypersurfaceSubmersion":
        return cls(n, a * a)

    @property
    def a(self):
        return sqrt(self.a2)

    @property
    def b(self):
        """Height of the parallel hypersurface, taken positive."""
        return sqrt(1 - self.a2)

    @property
    def dims(self) -> dict:
        return {"n": self.n}


@dataclass(frozen=True)
class ProductSphereSubmersion:
    n1: int
    n2: int
    t: Number  # r1^2; r2^2 = 1 - t

    family = "product_sphere"

    def __post_init__(self):
        _check_dim("n1", self.n1)
        _check_dim("n2", self.n2)
        _check_open_unit("r1^2", self.t)

    @classmethod
    def with_radius(cls, n1: int, n2: int, r1: Number) -> "ProductSphereSubmersion":
        return cls(n1, n2, r1 * r1)

    @property
    def r1(self):
        return sqrt(self.t)

    @property
    def r2(self):
        return sqrt(1 - self.t)

    @property
    def dims(self) -> dict:
        return {"n1": self.n1, "n2": self.n2}


ModelGeometry = Union[SmallSphere, CliffordTorus, HypersurfaceSubmersion, ProductSphereSubmersion]


def invariants(model: ModelGeometry) -> ScalarInvariants:
    """Exact scalar invariants of a model; rational in its squared parameter."""
    if isinstance(model, (SmallSphere, HypersurfaceSubmersion)):
        dim = model.m if isinstance(model, SmallSphere) else model.n
        x = model.a2
        c2 = x / (1 - x)
        return ScalarInvariants(dim, dim / c2, dim * dim / c2, sqrt(c2))
    if isinstance(model, CliffordTorus):
        m, p, q = model.m, model.p, model.q
        beta = p * q + (m - p) / q
        tau2 = (p * q - (m - p)) ** 2 / q
        return ScalarInvariants(m, beta, tau2)
    if isinstance(model, ProductSphereSubmersion):
        n1, n2, t = model.n1, model.n2, model.t
        s = 1 - t
        beta = n1 * s / t + n2 * t / s
        tau2 = (n2 * t - n1 * s) ** 2 / (t * s)
        return ScalarInvariants(n1 + n2, beta, tau2)
    raise TypeError(f"not a model geometry: {model!r}")


def is_harmonic(model: ModelGeometry, tol: float = DEFAULT_HARMONIC_TOL) -> bool:
    if not tol > 0:
        raise ValueError("tol must be positive")
    return invariants(model).tau2 < tol * tol


def harmonic_parameter(family: str, **dims) -> float:
    """The parameter at which a family's map is harmonic.

    ``lambda = sqrt((m-p)/p)`` for Clifford tori and
    ``r1 = sqrt(n1/(n1+n2))`` for product-sphere submersions. The two
    hypersurface families have nowhere-vanishing tension.
    """
    if family == "clifford":
        m, p = dims["m"], dims["p"]
        CliffordTorus(m, p, 1)  # validates dims
        return math.sqrt((m - p) / p)
    if family == "product_sphere":
        n1, n2 = dims["n1"], dims["n2"]
        _check_dim("n1", n1)
        _check_dim("n2", n2)
        return math.sqrt(n1 / (n1 + n2))
    if family in ("small_sphere", "hypersurface"):
        raise NotApplicable(f"{family}: tension never vanishes for a in (0, 1)")
    raise ValueError(f"unknown family {family!r}")


def build(family: str, square: Number, **dims) -> ModelGeometry:
    """Construct a model of ``family`` from its squared parameter."""
    if family == "small_sphere":
        return SmallSphere(dims["m"], square)
    if family == "clifford":
        return CliffordTorus(dims["m"], dims["p"], square)
    if family == "hypersurface":
        return HypersurfaceSubmersion(dims["n"], square)
    if family == "product_sphere":
        return ProductSphereSubmersion(dims["n1"], dims["n2"], square)
    raise ValueError(f"unknown family {family!r}")
