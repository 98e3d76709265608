"""Physical parameters, the rotated normal-mode frame and per-block coefficients.

All quantities are in units where the common atom-field coupling sets the
scale; the dimensionless time used throughout is ``tau = lambda * t``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .exceptions import NonIdenticalAtoms, ParameterError

_EQ_RTOL = 1e-12


def rotation_angle(Omega1: float, Omega2: float, lambda12: float) -> float:
    """Mixing angle that removes the bilinear mode-mode coupling.

    Principal branch of ``0.5 * arctan(2*lambda12 / (Omega1 - Omega2))``, so
    ``|theta| <= pi/4``. Degenerate modes give ``pi/4 * sign(lambda12)``.
    """
    d = Omega1 - Omega2
    if d == 0.0:
        return 0.25 * math.pi * (math.copysign(1.0, lambda12) if lambda12 != 0.0 else 0.0)
    # atan(y/x) == atan2(y*sign(x), |x|) without overflowing y/x
    return 0.5 * math.atan2(2.0 * lambda12 * math.copysign(1.0, d), abs(d))


@dataclass(frozen=True)
class ModelParams:
    """Physical constants of the two-atom, two-mode Kerr cavity.

    ``alpha1``/``alpha2`` are the coherent amplitudes of the (rotated) modes;
    ``chi`` is the self-Kerr strength with the cross-Kerr fixed at ``2*chi``.
    """

    omega1: float = 4.0
    omega2: float = 4.0
    Omega1: float = 2.0
    Omega2: float = 2.0
    lambda12: float = 0.5
    lambda1: float = 1.0
    lambda2: float = 1.0
    chi: float = 0.4
    beta: float = 0.0
    alpha1: complex = math.sqrt(10.0)
    alpha2: complex = math.sqrt(10.0)
    n_max: int = 40
    tail_tol: float = 1e-8

    def __post_init__(self):
        reals = ("omega1", "omega2", "Omega1", "Omega2", "lambda12",
                 "lambda1", "lambda2", "chi", "beta", "tail_tol")
        for name in reals:
            value = getattr(self, name)
            if isinstance(value, complex) or not math.isfinite(value):
                raise ParameterError(f"{name} must be a finite real number, got {value!r}")
        for name in ("alpha1", "alpha2"):
            value = complex(getattr(self, name))
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise ParameterError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.lambda1 <= 0 or self.lambda2 <= 0:
            raise ParameterError("atom-field couplings must be positive")
        if not 0.0 <= self.beta <= math.pi:
            raise ParameterError(f"beta must lie in [0, pi], got {self.beta}")
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ParameterError(f"n_max must be an integer >= 1, got {self.n_max}")
        object.__setattr__(self, "n_max", int(self.n_max))
        if self.tail_tol <= 0:
            raise ParameterError("tail_tol must be positive")

    @property
    def identical_atoms(self) -> bool:
        frame = rotated_frame(self)
        return (math.isclose(self.lambda1, self.lambda2, rel_tol=_EQ_RTOL)
                and math.isclose(frame.delta1, frame.delta2,
                                 rel_tol=_EQ_RTOL, abs_tol=_EQ_RTOL))

    @property
    def lam(self) -> float:
        """Common coupling; only meaningful for identical atoms."""
        return self.lambda1

    def require_identical(self) -> float:
        """Return the common detuning, or raise if the atoms differ."""
        frame = rotated_frame(self)
        if not math.isclose(self.lambda1, self.lambda2, rel_tol=_EQ_RTOL):
            raise NonIdenticalAtoms(
                f"closed form needs lambda1 == lambda2, got {self.lambda1}, {self.lambda2}")
        if not math.isclose(frame.delta1, frame.delta2, rel_tol=_EQ_RTOL, abs_tol=_EQ_RTOL):
            raise NonIdenticalAtoms(
                f"closed form needs equal detunings, got {frame.delta1}, {frame.delta2}")
        return frame.delta1

    def with_scaled(self, chi_over_lambda: float, delta_over_lambda: float) -> "ModelParams":
        """Copy with ``chi`` and the common detuning set in units of ``lambda1``.

        The atomic frequencies are moved so that both detunings equal
        ``delta_over_lambda * lambda1``.
        """
        frame = rotated_frame(self)
        split = frame.OmegaBar2 - frame.OmegaBar1
        omega = delta_over_lambda * self.lambda1 + split
        return replace(self, chi=chi_over_lambda * self.lambda1, omega1=omega, omega2=omega)


@dataclass(frozen=True)
class RotatedFrame:
    theta: float
    OmegaBar1: float
    OmegaBar2: float
    delta1: float
    delta2: float


def rotated_frame(params: ModelParams) -> RotatedFrame:
    """Normal-mode frequencies and detunings.

    The sign of the ``lambda12 * sin(2 theta)`` terms is the one for which
    the returned frequencies are the eigenvalues of
    ``[[Omega1, lambda12], [lambda12, Omega2]]`` at the angle from
    :func:`rotation_angle`.
    """
    theta = rotation_angle(params.Omega1, params.Omega2, params.lambda12)
    c2 = math.cos(theta) ** 2
    s2 = math.sin(theta) ** 2
    cross = params.lambda12 * math.sin(2.0 * theta)
    ob1 = params.Omega1 * c2 + params.Omega2 * s2 + cross
    ob2 = params.Omega1 * s2 + params.Omega2 * c2 - cross
    split = ob2 - ob1
    return RotatedFrame(theta, ob1, ob2, params.omega1 - split, params.omega2 - split)


@dataclass(frozen=True)
class BlockCoefficients:
    """Couplings and Kerr shifts of one photon block ``(n1, n2)``.

    The block holds ``|e e, n1+2, n2>``, ``|e g, n1+1, n2+1>``,
    ``|g e, n1+1, n2+1>`` and ``|g g, n1, n2+2>``. Indices down to ``-2`` are
    accepted for the truncated edge blocks; couplings to states that would
    need a negative photon number are zero there.
    """

    n1: int
    n2: int
    f1: float
    f2: float
    V1: float
    V2: float
    V3: float
    lam: float = field(default=1.0, repr=False)
    chi: float = field(default=0.0, repr=False)

    @property
    def is_edge(self) -> bool:
        return self.n1 < 0 or self.n2 < 0

    def shifted(self, energy: float) -> "BlockCoefficients":
        """Same block with ``energy`` subtracted from every Kerr shift."""
        return replace(self, V1=self.V1 - energy, V2=self.V2 - energy, V3=self.V3 - energy)


def _coupling(lam: float, a: int, b: int) -> float:
    prod = a * b
    return lam * math.sqrt(prod) if a > 0 and b > 0 else 0.0


def block_coefficients(n1: int, n2: int, lam: float, chi: float) -> BlockCoefficients:
    if int(n1) != n1 or int(n2) != n2 or n1 < -2 or n2 < -2:
        raise ParameterError(f"block indices must be integers >= -2, got ({n1}, {n2})")
    n1, n2 = int(n1), int(n2)
    f1 = _coupling(lam, n1 + 2, n2 + 1)
    f2 = _coupling(lam, n1 + 1, n2 + 2)
    V1 = chi * ((n1 + 2) * (n1 + 1) + n2 * (n2 - 1) + 2 * (n1 + 2) * n2)
    V2 = chi * (n1 * (n1 + 1) + n2 * (n2 + 1) + 2 * (n1 + 1) * (n2 + 1))
    V3 = chi * (n1 * (n1 - 1) + (n2 + 1) * (n2 + 2) + 2 * n1 * (n2 + 2))
    return BlockCoefficients(n1, n2, f1, f2, V1, V2, V3, lam=lam, chi=chi)
