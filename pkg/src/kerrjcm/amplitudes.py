"""Closed-form amplitudes of a single photon block.

Within block ``(n1, n2)`` the identical-atom dynamics couple three amplitudes
(``B == C``). Putting ``D ~ exp(i mu t)`` turns them into a cubic whose
three roots give

    D(t) = sum_m b_m exp(i mu_m t)
    B(t) = C(t) = -i exp(i Delta t) / (2 f2) * sum_m (mu_m + V3) b_m exp(i mu_m t)
    A(t) = exp(2 i Delta t) / (2 f1 f2)
           * sum_m (2 f2**2 - (mu_m + V3)(mu_m + V2 + Delta)) b_m exp(i mu_m t)

Blocks at the vacuum edge (``n1`` or ``n2`` in ``{-2, -1}``) miss one or two
of the four kets; they reduce to a two-level or a single-level problem and are
solved by :func:`solve_edge_block`.

Every solution is stored as a mode expansion: ``mu`` (the exponents) and
``modes[m, k]`` (coefficient of ``exp(i mu_m t)`` in amplitude ``k`` before the
frame phase ``exp(i k_frame Delta t)`` with ``k_frame = (2, 1, 1, 0)``).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .cubic import (CubicCoefficients, CubicRoots, disc_epsilon,
                    min_root_separation, solve_cubic_trig)
from .exceptions import DegenerateRoots, ParameterError
from .model import BlockCoefficients

logger = logging.getLogger(__name__)

FRAME = np.array([2.0, 1.0, 1.0, 0.0])
CLOSED_FORM_RTOL = 1e-6


@dataclass(frozen=True)
class BlockSolution:
    coeffs: BlockCoefficients
    delta: float
    roots: CubicRoots | None
    weights: np.ndarray
    mu: np.ndarray
    modes: np.ndarray
    a0: complex = 1.0
    d0: complex = 0.0
    closed_form_discrepancy: float = field(default=0.0, compare=False)

    @property
    def block(self) -> tuple[int, int]:
        return (self.coeffs.n1, self.coeffs.n2)

    @property
    def initial_norm(self) -> float:
        return abs(self.a0) ** 2 + abs(self.d0) ** 2


def characteristic_coefficients(block: BlockCoefficients, delta: float) -> CubicCoefficients:
    f1s, f2s = block.f1 ** 2, block.f2 ** 2
    V1, V2, V3 = block.V1, block.V2, block.V3
    u = 2.0 * delta + V1
    w = delta + V2
    x1 = 3.0 * delta + V1 + V2 + V3
    x2 = -2.0 * (f1s + f2s) + u * w + (3.0 * delta + V1 + V2) * V3
    x3 = -2.0 * f2s * u + (-2.0 * f1s + u * w) * V3
    return CubicCoefficients(x1, x2, x3)


def block_roots(block: BlockCoefficients, delta: float) -> CubicRoots:
    """Roots ``mu_m`` of the block's cubic, ascending.

    The cubic is solved for ``nu = mu + V3`` so the coefficients stay of the
    order of the couplings even when the Kerr shifts are large.
    """
    shifted = characteristic_coefficients(block.shifted(block.V3), delta)
    nu = solve_cubic_trig(shifted)
    if min_root_separation(nu) <= disc_epsilon(shifted.x1):
        raise DegenerateRoots("cubic roots coincide", block=(block.n1, block.n2))
    return nu.shifted(-block.V3)


def _weights_linear(a0, d0, block: BlockCoefficients, nu: np.ndarray, delta: float) -> np.ndarray:
    f1, f2 = block.f1, block.f2
    a_row = (2.0 * f2 ** 2 - nu * (nu + block.V2 - block.V3 + delta)) / (2.0 * f1 * f2)
    system = np.vstack([np.ones(3), nu, a_row]).astype(complex)
    rhs = np.array([d0, 0.0, a0], dtype=complex)
    return np.linalg.solve(system, rhs)


def weights_closed_form(a0, d0, block: BlockCoefficients, roots) -> np.ndarray:
    """Lagrange form of the weights: one term per root, the other two in the denominator."""
    nu = np.asarray(list(roots), dtype=float) + block.V3
    out = np.empty(3, dtype=complex)
    for m in range(3):
        k, l = [j for j in range(3) if j != m]
        num = -2.0 * a0 * block.f1 * block.f2 + d0 * (2.0 * block.f2 ** 2 + nu[k] * nu[l])
        out[m] = num / ((nu[m] - nu[k]) * (nu[m] - nu[l]))
    return out


def _check_separation(block: BlockCoefficients, roots) -> None:
    nu = [r + block.V3 for r in roots]
    x1 = 3.0 * max(abs(v) for v in nu)
    if min_root_separation(nu) <= disc_epsilon(x1):
        raise DegenerateRoots("cubic roots coincide; weight system is singular",
                              block=(block.n1, block.n2))


def initial_weights(beta: float, block: BlockCoefficients, roots, delta: float = 0.0) -> np.ndarray:
    """Weights ``b_m`` for atoms starting in ``cos(beta/2)|ee> + sin(beta/2)|gg>``."""
    b, _ = _initial_weights(math.cos(beta / 2.0), math.sin(beta / 2.0), block, roots, delta)
    return b


def _initial_weights(a0, d0, block, roots, delta):
    _check_separation(block, roots)
    nu = np.asarray(list(roots), dtype=float) + block.V3
    b = _weights_linear(a0, d0, block, nu, delta)
    ref = weights_closed_form(a0, d0, block, roots)
    scale = max(np.max(np.abs(b)), 1e-300)
    discrepancy = float(np.max(np.abs(b - ref)) / scale)
    if discrepancy > CLOSED_FORM_RTOL:
        logger.warning("block (%d, %d): closed-form weights differ from linear solve by %.3e",
                       block.n1, block.n2, discrepancy)
    return b, discrepancy


def _full_modes(block: BlockCoefficients, delta: float, roots, b: np.ndarray) -> np.ndarray:
    nu = np.asarray(list(roots), dtype=float) + block.V3
    f1, f2 = block.f1, block.f2
    modes = np.empty((3, 4), dtype=complex)
    modes[:, 0] = (2.0 * f2 ** 2 - nu * (nu + block.V2 - block.V3 + delta)) / (2.0 * f1 * f2) * b
    modes[:, 1] = -1j * nu / (2.0 * f2) * b
    modes[:, 2] = modes[:, 1]
    modes[:, 3] = b
    return modes


def solve_block(block: BlockCoefficients, delta: float, beta: float | None = None,
                *, a0: complex | None = None, d0: complex | None = None,
                roots: CubicRoots | None = None) -> BlockSolution:
    """Closed-form solution of one block.

    Give either ``beta`` (atoms in ``cos|ee> + sin|gg>``, unit block norm) or
    explicit initial amplitudes ``a0`` of ``|ee>`` and ``d0`` of ``|gg>``.
    ``roots`` overrides the computed cubic roots (used for fault injection).
    """
    if beta is not None:
        if a0 is not None or d0 is not None:
            raise ParameterError("give beta or (a0, d0), not both")
        a0, d0 = math.cos(beta / 2.0), math.sin(beta / 2.0)
    a0 = complex(a0 or 0.0)
    d0 = complex(d0 or 0.0)
    if block.is_edge:
        return solve_edge_block(block, delta, a0, d0)
    if roots is None:
        roots = block_roots(block, delta)
    b, discrepancy = _initial_weights(a0, d0, block, roots, delta)
    return BlockSolution(
        coeffs=block, delta=delta, roots=roots, weights=b,
        mu=np.asarray(roots.as_tuple(), dtype=float),
        modes=_full_modes(block, delta, roots, b),
        a0=a0, d0=d0, closed_form_discrepancy=discrepancy,
    )


def _quadratic_roots(p: float, q: float, f: float) -> np.ndarray:
    # (nu + p)(nu + q) = 2 f**2
    half = 0.5 * (p - q)
    r = math.sqrt(half * half + 2.0 * f * f)
    return np.array([-0.5 * (p + q) - r, -0.5 * (p + q) + r])


def solve_edge_block(block: BlockCoefficients, delta: float, a0: complex, d0: complex) -> BlockSolution:
    """Blocks with ``n1`` or ``n2`` in ``{-2, -1}``.

    ``n1 == -2``: only ``|ee, 0, n2>`` exists, a pure Kerr phase.
    ``n1 == -1``: ``|ee, 1, n2>`` coupled to the two one-excitation kets.
    ``n2 == -1`` and ``n2 == -2`` mirror these on the ``|gg>`` side.
    """
    n1, n2 = block.n1, block.n2
    a_exists = n1 + 2 >= 0 and n2 >= 0
    d_exists = n1 >= 0 and n2 + 2 >= 0
    if (a0 and not a_exists) or (d0 and not d_exists):
        raise ParameterError(f"initial amplitude on a ket missing from edge block ({n1}, {n2})")
    V1, V2, V3 = block.V1, block.V2, block.V3
    empty = np.zeros(0, dtype=complex)
    if a0 == 0 and d0 == 0:
        return BlockSolution(block, delta, None, empty, np.zeros(1), np.zeros((1, 4), complex), a0, d0)
    if n1 == -2:
        mu = np.array([-(2.0 * delta + V1)])
        modes = np.array([[a0, 0, 0, 0]], dtype=complex)
    elif n2 == -2:
        mu = np.array([-V3])
        modes = np.array([[0, 0, 0, d0]], dtype=complex)
    elif n1 == -1:
        f1 = block.f1
        bshift = delta + V2
        mu = _quadratic_roots(2.0 * delta + V1, bshift, f1)
        c1 = 1j * f1 * a0 / (mu[0] - mu[1])
        c = np.array([c1, -c1])
        modes = np.zeros((2, 4), dtype=complex)
        modes[:, 0] = -1j * (mu + bshift) * c / f1
        modes[:, 1] = c
        modes[:, 2] = c
    else:  # n2 == -1
        f2 = block.f2
        mu = _quadratic_roots(delta + V2, V3, f2)
        d = np.array([d0 * (mu[1] + V3) / (mu[1] - mu[0]),
                      d0 * (mu[0] + V3) / (mu[0] - mu[1])])
        modes = np.zeros((2, 4), dtype=complex)
        modes[:, 1] = -1j * (mu + V3) * d / (2.0 * f2)
        modes[:, 2] = modes[:, 1]
        modes[:, 3] = d
    return BlockSolution(block, delta, None, empty, mu, modes, a0, d0)


def amplitudes_at(solution: BlockSolution, t):
    """``(A, B, C, D)`` at time(s) ``t`` (same shape as ``t``)."""
    t = np.asarray(t, dtype=float)
    flat = t.reshape(-1)
    osc = np.exp(1j * np.outer(flat, solution.mu))
    amps = osc @ solution.modes
    amps *= np.exp(1j * np.outer(flat, FRAME * solution.delta))
    return tuple(amps[:, k].reshape(t.shape) for k in range(4))


def block_norm(solution: BlockSolution, t):
    A, B, C, D = amplitudes_at(solution, t)
    return np.abs(A) ** 2 + np.abs(B) ** 2 + np.abs(C) ** 2 + np.abs(D) ** 2
