"""Trigonometric (Viete) solution of real cubics with three real roots."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .exceptions import ComplexRootRegime, DegenerateDiscriminant

ACOS_SLACK = 1e-9


@dataclass(frozen=True)
class CubicCoefficients:
    """``mu**3 + x1*mu**2 + x2*mu + x3 = 0``"""

    x1: float
    x2: float
    x3: float

    def __call__(self, mu):
        return ((mu + self.x1) * mu + self.x2) * mu + self.x3


@dataclass(frozen=True)
class CubicRoots:
    mu1: float
    mu2: float
    mu3: float
    phi: float

    def __iter__(self):
        return iter((self.mu1, self.mu2, self.mu3))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.mu1, self.mu2, self.mu3)

    def shifted(self, offset: float) -> "CubicRoots":
        return CubicRoots(self.mu1 + offset, self.mu2 + offset, self.mu3 + offset, self.phi)


def disc_epsilon(x1: float) -> float:
    return 1e-12 * max(1.0, x1 * x1)


def solve_cubic_trig(coeffs: CubicCoefficients) -> CubicRoots:
    """Three real roots, sorted ascending.

    Raises DegenerateDiscriminant when ``x1**2 - 3*x2`` is too small to
    separate the roots, and ComplexRootRegime when the arccos argument leaves
    ``[-1, 1]`` by more than ``ACOS_SLACK``.
    """
    x1, x2, x3 = coeffs.x1, coeffs.x2, coeffs.x3
    p = x1 * x1 - 3.0 * x2
    if not p > disc_epsilon(x1):
        raise DegenerateDiscriminant(f"x1^2 - 3 x2 = {p:.3e} (coincident roots)")
    arg = (9.0 * x1 * x2 - 2.0 * x1 ** 3 - 27.0 * x3) / (2.0 * p ** 1.5)
    if abs(arg) > 1.0 + ACOS_SLACK:
        raise ComplexRootRegime(f"arccos argument {arg!r} outside [-1, 1]")
    arg = min(1.0, max(-1.0, arg))
    phi = math.acos(arg) / 3.0
    centre = -x1 / 3.0
    radius = 2.0 / 3.0 * math.sqrt(p)
    roots = sorted(centre + radius * math.cos(phi + 2.0 * math.pi * m / 3.0) for m in range(3))
    return CubicRoots(roots[0], roots[1], roots[2], phi)


def min_root_separation(roots) -> float:
    r = list(roots)
    return min(abs(r[i] - r[j]) for i in range(len(r)) for j in range(i + 1, len(r)))
