"""Numerical checks of the scaled Hopf map S^3(sqrt k) -> S^2(1/sqrt k).

The map is ``(z1, z2) -> (2 z1 conj(z2), |z1|^2 - |z2|^2) / (k sqrt k)``.
The domain sphere is read as ``|z1|^2 + |z2|^2 = k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .polysolve import classify

POINT_TOL = 1e-12
DEFAULT_STEP = 1e-5


@dataclass(frozen=True)
class HopfPoint:
    z1: complex
    z2: complex
    k_scale: int

    def __post_init__(self):
        if not isinstance(self.k_scale, int) or self.k_scale < 1:
            raise ValueError(f"k_scale must be a positive integer, got {self.k_scale!r}")
        r2 = abs(self.z1) ** 2 + abs(self.z2) ** 2
        if abs(r2 - self.k_scale) > POINT_TOL * self.k_scale:
            raise ValueError(f"|z1|^2 + |z2|^2 = {r2!r}, expected {self.k_scale}")

    def as_real(self) -> np.ndarray:
        return np.array([self.z1.real, self.z1.imag, self.z2.real, self.z2.imag])


def _hopf_real(x: np.ndarray, k: int) -> np.ndarray:
    """Hopf map on R^4 = C^2, valid off the sphere as well (for differencing)."""
    z1 = complex(x[0], x[1])
    z2 = complex(x[2], x[3])
    w = 2 * z1 * z2.conjugate()
    scale = k * math.sqrt(k)
    return np.array([w.real, w.imag, abs(z1) ** 2 - abs(z2) ** 2]) / scale


def hopf_map(p: HopfPoint) -> np.ndarray:
    return _hopf_real(p.as_real(), p.k_scale)


def fiber_invariance_check(p: HopfPoint, samples: int = 8) -> float:
    """Largest distance between images of points on the fiber through p."""
    if samples < 2:
        raise ValueError("samples must be >= 2")
    base = hopf_map(p)
    worst = 0.0
    for theta in np.linspace(0.0, 2 * math.pi, samples, endpoint=False):
        phase = complex(math.cos(theta), math.sin(theta))
        q = _hopf_real(np.array([(phase * p.z1).real, (phase * p.z1).imag, (phase * p.z2).real, (phase * p.z2).imag]), p.k_scale)
        worst = max(worst, float(np.linalg.norm(q - base)))
    return worst


def jacobian(p: HopfPoint, h: float = DEFAULT_STEP) -> np.ndarray:
    """3 x 4 central-difference Jacobian in the real coordinates of C^2."""
    if not 1e-8 <= h <= 1e-4:
        raise ValueError(f"step {h!r} outside the conditioned range [1e-8, 1e-4]")
    x = p.as_real()
    cols = []
    for i in range(4):
        e = np.zeros(4)
        e[i] = h
        cols.append((_hopf_real(x + e, p.k_scale) - _hopf_real(x - e, p.k_scale)) / (2 * h))
    return np.column_stack(cols)


@dataclass(frozen=True)
class SubmersionCheck:
    singular_values: tuple  # of the Jacobian restricted to the horizontal space
    vertical_norm: float  # image of the unit fiber direction

    @property
    def dilation(self) -> float:
        return float(np.mean(self.singular_values))

    @property
    def spread(self) -> float:
        return float(max(self.singular_values) - min(self.singular_values))


def _horizontal_basis(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    radial = x / np.linalg.norm(x)
    vertical = np.array([-x[1], x[0], -x[3], x[2]])  # i * (z1, z2)
    vertical /= np.linalg.norm(vertical)
    basis = [radial, vertical]
    for e in np.eye(4):
        v = e - sum(np.dot(e, b) * b for b in basis)
        n = np.linalg.norm(v)
        if n > 1e-6:
            basis.append(v / n)
        if len(basis) == 4:
            break
    return np.column_stack(basis[2:]), vertical


def submersion_check(p: HopfPoint, h: float = DEFAULT_STEP) -> SubmersionCheck:
    jac = jacobian(p, h)
    horizontal, vertical = _horizontal_basis(p.as_real())
    sv = np.linalg.svd(jac @ horizontal, compute_uv=False)
    return SubmersionCheck(tuple(float(s) for s in sv), float(np.linalg.norm(jac @ vertical)))


def random_points(k: int, count: int, rng: np.random.Generator) -> list[HopfPoint]:
    """Uniform sample on S^3(sqrt k)."""
    x = rng.standard_normal((count, 4))
    x *= math.sqrt(k) / np.linalg.norm(x, axis=1, keepdims=True)
    return [HopfPoint(complex(r[0], r[1]), complex(r[2], r[3]), k) for r in x]


def _fibonacci_sphere(count: int) -> np.ndarray:
    i = np.arange(count) + 0.5
    polar = np.arccos(1 - 2 * i / count)
    azim = math.pi * (1 + 5**0.5) * i
    return np.column_stack([np.cos(azim) * np.sin(polar), np.sin(azim) * np.sin(polar), np.cos(polar)])


def largest_empty_cap(images: np.ndarray, probes: int = 400) -> float:
    """Largest angular gap between probe directions and the nearest image."""
    dirs = images / np.linalg.norm(images, axis=1, keepdims=True)
    cosines = _fibonacci_sphere(probes) @ dirs.T
    return float(np.max(np.arccos(np.clip(cosines.max(axis=1), -1.0, 1.0))))


@dataclass(frozen=True)
class HopfReport:
    k: int
    samples: int
    norm_deviation: float
    fiber_deviation: float
    dilation: float
    dilation_spread: float
    vertical_norm: float
    largest_empty_cap: float
    classified_radius: float

    def checks(self) -> dict:
        return {
            "image_norm": self.norm_deviation <= 1e-12,
            "fiber_invariance": self.fiber_deviation <= 1e-12,
            "horizontal_isometry": self.dilation_spread <= 1e-5,
            "vertical_kernel": self.vertical_norm <= 1e-7,
            "coverage": self.largest_empty_cap < 0.2,
            "classification": abs(self.classified_radius - 1 / math.sqrt(self.k)) <= 1e-10,
        }

    @property
    def passed(self) -> bool:
        return all(self.checks().values())

    def as_dict(self) -> dict:
        out = {
            "k": self.k,
            "samples": self.samples,
            "norm_deviation": self.norm_deviation,
            "fiber_deviation": self.fiber_deviation,
            "dilation": self.dilation,
            "dilation_spread": self.dilation_spread,
            "vertical_norm": self.vertical_norm,
            "largest_empty_cap": self.largest_empty_cap,
            "classified_radius": self.classified_radius,
        }
        out["checks"] = self.checks()
        return out


def hopf_checks(k: int, samples: int = 1000, seed: int = 0, fiber_samples: int = 8) -> HopfReport:
    """Run every Hopf-map check on a random sample of S^3(sqrt k).

    The horizontal singular values are reported as a common dilation
    factor; for this normalization it comes out as 2/k.
    """
    rng = np.random.default_rng(seed)
    points = random_points(k, samples, rng)
    images = np.array([hopf_map(p) for p in points])
    norm_dev = float(np.max(np.abs(np.linalg.norm(images, axis=1) - 1 / math.sqrt(k))))
    fiber_dev = max(fiber_invariance_check(p, fiber_samples) for p in points)
    sv = []
    vert = 0.0
    for p in points:
        chk = submersion_check(p)
        sv.extend(chk.singular_values)
        vert = max(vert, chk.vertical_norm)
    sv = np.array(sv)
    # composite through S^2(1/sqrt k) in S^3: hypersurface case with n = 2
    report = classify("hypersurface", k, n=2)
    radius = report.values[0] if len(report.values) == 1 else math.nan
    return HopfReport(
        k,
        samples,
        norm_dev,
        fiber_dev,
        float(sv.mean()),
        float(sv.max() - sv.min()),
        vert,
        largest_empty_cap(images),
        radius,
    )
