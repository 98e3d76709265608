"""Entanglement measures of the two-atom density matrix.

Every function accepts a raw 4x4 matrix (or :class:`AtomDensityMatrix`) in the
basis ee, eg, ge, gg and normalises it by its trace first. Entropies are in
nats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cubic import CubicCoefficients, solve_cubic_trig
from .exceptions import (DegenerateDiscriminant, NegativeEigenvalue,
                         NegativeRadicand, StructureViolation)

EIG_CLAMP = 1e-10
STRUCTURE_TOL = 1e-9
RADICAND_CLAMP = 1e-12
MAX_CONCURRENCE = math.sqrt(1.5)
# Two cubic roots both this small are fixed by the coefficients only to about
# sqrt(machine eps), which -xi*ln(xi) amplifies.
CARDANO_FLOOR = 1e-6


def _normalized(rho) -> np.ndarray:
    m = np.asarray(rho, dtype=complex)
    if m.shape[-2:] != (4, 4):
        raise ValueError(f"expected 4x4 density matrices, got shape {m.shape}")
    tr = np.trace(m, axis1=-2, axis2=-1).real
    return m / tr[..., None, None]


def _jacobi_symmetric(a: np.ndarray, tol: float = 1e-15, max_sweeps: int = 50) -> np.ndarray:
    """Cyclic Jacobi sweeps on a stack of real symmetric matrices; returns the diagonals."""
    a = np.array(a, dtype=float, copy=True)
    n = a.shape[-1]
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        for _ in range(max_sweeps):
            off = np.sum(np.triu(a, 1) ** 2, axis=(-2, -1))
            if np.all(off <= (tol ** 2) * np.sum(a ** 2, axis=(-2, -1))):
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[:, p, q]
                    active = apq != 0.0
                    if not active.any():
                        continue
                    theta = np.where(active, (a[:, q, q] - a[:, p, p]) / (2.0 * apq), 0.0)
                    t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
                    t = np.where(np.isfinite(theta), t, 0.0)
                    t = np.where(active, t, 0.0)
                    c = 1.0 / np.sqrt(t * t + 1.0)
                    s = t * c
                    cp, cq = a[:, :, p].copy(), a[:, :, q].copy()
                    a[:, :, p] = c[:, None] * cp - s[:, None] * cq
                    a[:, :, q] = s[:, None] * cp + c[:, None] * cq
                    rp, rq = a[:, p, :].copy(), a[:, q, :].copy()
                    a[:, p, :] = c[:, None] * rp - s[:, None] * rq
                    a[:, q, :] = s[:, None] * rp + c[:, None] * rq
    return np.diagonal(a, axis1=-2, axis2=-1)


def hermitian_eigvalsh(m) -> np.ndarray:
    """Ascending eigenvalues of Hermitian matrices ``(..., n, n)``.

    Works on the real symmetric embedding ``[[Re, -Im], [Im, Re]]``, whose
    spectrum is that of ``m`` with every eigenvalue doubled.
    """
    m = np.asarray(m, dtype=complex)
    lead = m.shape[:-2]
    n = m.shape[-1]
    flat = m.reshape((-1, n, n))
    emb = np.block([[flat.real, -flat.imag], [flat.imag, flat.real]])
    ev = np.sort(_jacobi_symmetric(emb), axis=-1)
    ev = 0.5 * (ev[:, 0::2] + ev[:, 1::2])
    return ev.reshape(lead + (n,))


def _entropy(xi: np.ndarray) -> float:
    pos = xi[xi > 0]
    return float(-np.sum(pos * np.log(pos)))


def _clamped(xi: np.ndarray) -> np.ndarray:
    if np.min(xi) < -EIG_CLAMP:
        raise NegativeEigenvalue(f"eigenvalue {np.min(xi):.3e} below -{EIG_CLAMP:g}")
    xi = np.clip(xi, 0.0, None)
    return xi / xi.sum()


@dataclass(frozen=True)
class EntropyBreakdown:
    xi: np.ndarray
    zeta1: float
    zeta2: float
    zeta3: float
    varpi: float
    entropy: float


def cardano_coefficients(rho) -> tuple[float, float, float]:
    """Characteristic-cubic coefficients of the exchange-symmetric sector.

    With rows/columns 2 and 3 equal, the nonzero spectrum is that of
    ``[[r11, s r12, r14], [s r21, 2 r22, s r24], [r41, s r42, r44]]``
    (``s = sqrt(2)``); these are ``-trace``, the principal 2x2 minors and
    ``-det`` of that matrix.
    """
    r = _normalized(rho)
    r11, r22, r44 = r[0, 0], r[1, 1], r[3, 3]
    r12, r21, r14, r41, r24, r42 = r[0, 1], r[1, 0], r[0, 3], r[3, 0], r[1, 3], r[3, 1]
    z1 = -r11 - 2.0 * r22 - r44
    z2 = -2.0 * r12 * r21 - r14 * r41 - 2.0 * r24 * r42 + 2.0 * r22 * r44 + r11 * (2.0 * r22 + r44)
    z3 = 2.0 * (r14 * (r22 * r41 - r21 * r42)
                + r12 * (r21 * r44 - r24 * r41)
                + r11 * (r24 * r42 - r22 * r44))
    return float(z1.real), float(z2.real), float(z3.real)


def check_exchange_symmetry(rho, tol: float = STRUCTURE_TOL) -> None:
    r = _normalized(rho)
    gap = max(np.max(np.abs(r[1, :] - r[2, :])), np.max(np.abs(r[:, 1] - r[:, 2])))
    if gap > tol:
        raise StructureViolation(f"rows 2 and 3 differ by {gap:.3e}")


def entropy_cardano(rho) -> EntropyBreakdown:
    """Von Neumann entropy from the trigonometric roots of the symmetric-sector cubic."""
    check_exchange_symmetry(rho)
    z1, z2, z3 = cardano_coefficients(rho)
    try:
        roots = solve_cubic_trig(CubicCoefficients(z1, z2, z3))
        three, varpi = roots.as_tuple(), roots.phi
    except DegenerateDiscriminant:
        three, varpi = (-z1 / 3.0,) * 3, 0.0
    xi = np.array(sorted(three, reverse=True) + [0.0])
    xi = _clamped(xi)
    return EntropyBreakdown(xi, z1, z2, z3, varpi, _entropy(xi))


def entropy_eigen(rho) -> EntropyBreakdown:
    """Von Neumann entropy from a direct Hermitian eigensolve (no symmetry assumed)."""
    xi = _clamped(hermitian_eigvalsh(_normalized(rho))[::-1])
    nan = float("nan")
    return EntropyBreakdown(xi, nan, nan, nan, nan, _entropy(xi))


def entropy(rho) -> float:
    """Cardano path when it is well conditioned, direct eigensolve otherwise.

    The cubic route needs the exchange symmetry and loses accuracy once two of
    its roots are near zero (an almost pure atomic state).
    """
    try:
        out = entropy_cardano(rho)
    except (StructureViolation, NegativeEigenvalue):
        return entropy_eigen(rho).entropy
    if np.sort(out.xi[:3])[1] < CARDANO_FLOOR:
        return entropy_eigen(rho).entropy
    return out.entropy


def purity(rho) -> float:
    r = _normalized(rho)
    return float(np.sum(np.abs(r) ** 2))


def concurrence(rho) -> float:
    r"""I-concurrence of the atoms/fields split, ``sqrt(2 sum_{i!=j} (r_ii r_jj - r_ij r_ji))``."""
    r = _normalized(rho)
    d = np.diag(r).real
    pair = np.outer(d, d) - (r * r.T).real
    np.fill_diagonal(pair, 0.0)
    radicand = 2.0 * float(np.sum(pair))
    if radicand < 0.0:
        if radicand < -RADICAND_CLAMP:
            raise NegativeRadicand(f"concurrence radicand {radicand:.3e}")
        radicand = 0.0
    return math.sqrt(radicand)


def partial_transpose(rho) -> np.ndarray:
    """Transpose on the second atom: ``rho[(a,b),(c,d)] -> rho[(a,d),(c,b)]``."""
    r = np.asarray(rho, dtype=complex)
    lead = r.shape[:-2]
    t = r.reshape(lead + (2, 2, 2, 2))
    t = np.swapaxes(t, -3, -1)
    return t.reshape(lead + (4, 4))


def negativity(rho) -> float:
    """``max(0, -2 * sum of negative eigenvalues of the partial transpose)``."""
    ev = hermitian_eigvalsh(partial_transpose(_normalized(rho)))
    return max(0.0, float(-2.0 * np.sum(ev[ev < 0])))


def negativity_batch(rhos) -> np.ndarray:
    ev = hermitian_eigvalsh(partial_transpose(_normalized(rhos)))
    return np.maximum(0.0, -2.0 * np.sum(np.where(ev < 0, ev, 0.0), axis=-1))


@dataclass(frozen=True)
class MeasureSample:
    tau: float
    entropy: float
    concurrence: float
    negativity: float
    norm_error: float

    def check_bounds(self) -> list[str]:
        problems = []
        if self.entropy < 0:
            problems.append("entropy < 0")
        if not 0.0 <= self.concurrence <= MAX_CONCURRENCE + 1e-9:
            problems.append("concurrence outside [0, sqrt(3/2)]")
        if not 0.0 <= self.negativity <= 1.0 + 1e-9:
            problems.append("negativity outside [0, 1]")
        return problems
