"""Runge-Kutta reference integration of the four-amplitude block equations.

The oracle integrates the general equations (unequal couplings and detunings
allowed), so the identical-atom reduction used by the closed form is checked
rather than assumed. Each photon block is integrated on its own: the
interaction only moves a photon between the rotated modes while flipping an
atom, so both the total photon number ``n1 + n2 + 2`` and the label ``n1``
(photons in mode 1 minus atomic excitations, up to a constant) are conserved
and no block ever couples to another.

Two integrators live here:

* :func:`integrate_blocks` (and its single-block wrapper
  :func:`integrate_block`) rewrites the equations in the frame
  ``A = exp(i(D1+D2-Vr)t) A'``, ``B = exp(i(D1-Vr)t) B'``,
  ``C = exp(i(D2-Vr)t) C'``, ``D = exp(-i Vr t) D'``, where the system is
  autonomous, ``y' = M y``. A classical RK4 step is then the fixed matrix
  ``I + E`` with ``E = hM + (hM)^2/2 + (hM)^3/6 + (hM)^4/24``; stepping
  through an output interval of ``2**p`` steps is done by repeated squaring
  of ``I + E`` (tracking ``E`` only, to keep the increments exact). Step
  halving continues until the endpoint moves by less than ``HALVING_TOL``.
* :func:`rk4_direct` steps the original time-dependent right-hand side with
  explicit ``exp(+-i D_j t)`` factors, one RK4 step at a time. It is slow and
  used to check the frame change on small blocks.
"""
from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .amplitudes import BlockSolution, amplitudes_at, solve_block
from .exceptions import GridMismatch, ParameterError, StepSizeFailure
from .model import ModelParams, block_coefficients, rotated_frame

HALVING_TOL = 1e-10
MAX_STEP = 1e-3
MAX_PHASE_PER_STEP = 0.05
MAX_HALVINGS = 12


@dataclass(frozen=True)
class OdeTrajectory:
    times: np.ndarray
    amps: np.ndarray  # (len(times), 4): A, B, C, D
    block: tuple[int, int]
    step: float

    @property
    def norms(self) -> np.ndarray:
        return np.sum(np.abs(self.amps) ** 2, axis=1)

    @property
    def norm_drift(self) -> float:
        n = self.norms
        return float(np.max(np.abs(n - n[0])))


def _couplings(lam: float, n1: int, n2: int) -> tuple[float, float]:
    a, b = (n1 + 2) * (n2 + 1), (n1 + 1) * (n2 + 2)
    f1 = lam * math.sqrt(a) if n1 + 2 > 0 and n2 + 1 > 0 else 0.0
    f2 = lam * math.sqrt(b) if n1 + 1 > 0 and n2 + 2 > 0 else 0.0
    return f1, f2


def frame_rates(params: ModelParams, n1: int, n2: int) -> tuple[np.ndarray, np.ndarray, float]:
    """Generator ``M`` of the autonomous frame, the frame phase rates and ``Vr``."""
    frame = rotated_frame(params)
    d1, d2 = frame.delta1, frame.delta2
    f1a, f2a = _couplings(params.lambda1, n1, n2)
    f1b, f2b = _couplings(params.lambda2, n1, n2)
    kerr = block_coefficients(n1, n2, 1.0, params.chi)
    vr = (kerr.V1 + kerr.V2 + kerr.V3) / 3.0
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = -1j * (d1 + d2 + kerr.V1 - vr)
    m[0, 1], m[0, 2] = f1b, f1a
    m[1, 0], m[1, 1], m[1, 3] = -f1b, -1j * (d1 + kerr.V2 - vr), f2a
    m[2, 0], m[2, 2], m[2, 3] = -f1a, -1j * (d2 + kerr.V2 - vr), f2b
    m[3, 1], m[3, 2], m[3, 3] = -f2a, -f2b, -1j * (kerr.V3 - vr)
    rates = np.array([d1 + d2, d1, d2, 0.0]) - vr
    return m, rates, vr


def rk4_increment(m: np.ndarray, h: float) -> np.ndarray:
    """``R(hM) - I`` for the classical RK4 stability polynomial (batched over leading axes)."""
    z = h * m
    z2 = z @ z
    z3 = z2 @ z
    return z + z2 / 2.0 + z3 / 6.0 + (z3 @ z) / 24.0


def interval_increment(m: np.ndarray, interval: float, p: int) -> np.ndarray:
    """Increment of ``2**p`` RK4 steps of size ``interval / 2**p``."""
    e = rk4_increment(m, interval / 2 ** p)
    for _ in range(p):
        e = 2.0 * e + e @ e
    return e


def _grid_intervals(times: np.ndarray):
    gaps = np.diff(times)
    if gaps.size and gaps.max() - gaps.min() <= 1e-12 * gaps.max():
        return np.full(gaps.shape, (times[-1] - times[0]) / gaps.size), True
    return gaps, False


def _propagate(m: np.ndarray, y0: np.ndarray, times: np.ndarray, p_of: dict) -> np.ndarray:
    gaps, uniform = _grid_intervals(times)
    out = np.empty((times.size,) + y0.shape, dtype=complex)
    out[0] = y0
    cache = {}
    y = y0
    for k, gap in enumerate(gaps):
        key = gap if not uniform else "u"
        if key not in cache:
            cache[key] = interval_increment(m, gap, p_of(gap))
        e = cache[key]
        y = y + np.einsum("bij,bj->bi", e, y)
        out[k + 1] = y
    return out


def _check_grid(times) -> np.ndarray:
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 2:
        raise ParameterError("time grid needs at least two points")
    if times[0] != 0.0:
        raise ParameterError("time grid must start at 0")
    if not np.all(np.diff(times) > 0):
        raise ParameterError("time grid must be strictly increasing")
    return times


def integrate_blocks(params: ModelParams, blocks, t_grid, initial) -> list[OdeTrajectory]:
    """Integrate many blocks on a common grid.

    ``initial`` has shape ``(len(blocks), 4)``. The RK4 step is the same for
    all blocks and is halved until the endpoints of every block move by less
    than ``HALVING_TOL``; StepSizeFailure if that needs more than
    ``MAX_HALVINGS`` extra halvings.
    """
    times = _check_grid(t_grid)
    blocks = [tuple(b) for b in blocks]
    y0 = np.asarray(initial, dtype=complex).reshape(len(blocks), 4)
    gens, rates = [], []
    for n1, n2 in blocks:
        m, r, _ = frame_rates(params, n1, n2)
        gens.append(m)
        rates.append(r)
    m = np.array(gens)
    rates = np.array(rates)
    speed = max(float(np.max(np.abs(np.linalg.eigvals(m)))), 1e-12)
    h0 = min(MAX_STEP, MAX_PHASE_PER_STEP / speed)

    def levels(extra):
        return lambda gap: max(0, math.ceil(math.log2(gap / h0))) + extra

    prev = _propagate(m, y0, times, levels(0))
    change = math.inf
    for extra in range(1, MAX_HALVINGS + 1):
        cur = _propagate(m, y0, times, levels(extra))
        change = float(np.max(np.abs(cur[-1] - prev[-1])))
        if change < HALVING_TOL:
            break
        prev = cur
    else:
        raise StepSizeFailure(f"step halving stalled at endpoint change {change:.3e}")
    step = times[-1] / (times.size - 1) / 2 ** levels(extra)(times[-1] / (times.size - 1))
    phases = np.exp(1j * times[:, None, None] * rates[None, :, :])
    lab = cur * phases
    return [OdeTrajectory(times, lab[:, i, :], blocks[i], step) for i in range(len(blocks))]


def default_initial(params: ModelParams, n1: int, n2: int) -> np.ndarray:
    """``(cos(beta/2), 0, 0, sin(beta/2))`` with kets missing from an edge block zeroed."""
    a0, d0 = math.cos(params.beta / 2.0), math.sin(params.beta / 2.0)
    if n1 + 2 < 0 or n2 < 0:
        a0 = 0.0
    if n1 < 0 or n2 + 2 < 0:
        d0 = 0.0
    return np.array([a0, 0.0, 0.0, d0], dtype=complex)


def integrate_block(params: ModelParams, n1: int, n2: int, t_grid, initial=None) -> OdeTrajectory:
    if initial is None:
        initial = default_initial(params, n1, n2)
    return integrate_blocks(params, [(n1, n2)], t_grid, [initial])[0]


def rk4_direct(params: ModelParams, n1: int, n2: int, t_end: float, h: float,
               initial=None, t_start: float = 0.0) -> np.ndarray:
    """Plain RK4 on the time-dependent equations; returns ``(A, B, C, D)`` at ``t_end``.

    ``t_end`` may lie before ``t_start``, in which case the steps run backwards.
    """
    frame = rotated_frame(params)
    d1, d2 = frame.delta1, frame.delta2
    f1a, f2a = _couplings(params.lambda1, n1, n2)
    f1b, f2b = _couplings(params.lambda2, n1, n2)
    kerr = block_coefficients(n1, n2, 1.0, params.chi)
    V1, V2, V3 = kerr.V1, kerr.V2, kerr.V3

    def rhs(t, A, B, C, D):
        p1, p2 = cmath.exp(1j * d1 * t), cmath.exp(1j * d2 * t)
        q1, q2 = p1.conjugate(), p2.conjugate()
        return (f1b * p2 * B + f1a * p1 * C - 1j * V1 * A,
                -f1b * q2 * A + f2a * p1 * D - 1j * V2 * B,
                -f1a * q1 * A + f2b * p2 * D - 1j * V2 * C,
                -f2a * q1 * B - f2b * q2 * C - 1j * V3 * D)

    y = list(default_initial(params, n1, n2) if initial is None else initial)
    span = t_end - t_start
    steps = max(1, round(abs(span) / abs(h)))
    h = span / steps
    for k in range(steps):
        t = t_start + k * h
        k1 = rhs(t, *y)
        k2 = rhs(t + h / 2, *[a + h / 2 * b for a, b in zip(y, k1)])
        k3 = rhs(t + h / 2, *[a + h / 2 * b for a, b in zip(y, k2)])
        k4 = rhs(t + h, *[a + h * b for a, b in zip(y, k3)])
        y = [a + h / 6 * (b + 2 * c + 2 * d + e) for a, b, c, d, e in zip(y, k1, k2, k3, k4)]
    return np.array(y)


def compare_block(analytic: BlockSolution, numeric: OdeTrajectory) -> float:
    """Largest absolute amplitude difference over the trajectory grid."""
    if analytic.block != numeric.block:
        raise GridMismatch(f"analytic block {analytic.block} vs trajectory block {numeric.block}")
    if numeric.times.ndim != 1 or numeric.times.shape[0] != numeric.amps.shape[0]:
        raise GridMismatch("trajectory times and amplitudes disagree in length")
    exact = np.stack(amplitudes_at(analytic, numeric.times), axis=1)
    return float(np.max(np.abs(exact - numeric.amps)))


@dataclass(frozen=True)
class ValidationRow:
    n1: int
    n2: int
    max_deviation: float
    norm_drift: float


@dataclass(frozen=True)
class ValidationReport:
    rows: list[ValidationRow]

    @property
    def max_deviation(self) -> float:
        return max(r.max_deviation for r in self.rows)

    @property
    def max_norm_drift(self) -> float:
        return max(r.norm_drift for r in self.rows)

    def summary(self) -> str:
        return f"max_deviation={self.max_deviation:.17g} blocks={len(self.rows)}"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["block_n1", "block_n2", "max_deviation", "norm_drift"])
        for r in self.rows:
            w.writerow([r.n1, r.n2, f"{r.max_deviation:.17g}", f"{r.norm_drift:.17g}"])
        return buf.getvalue()


def validation_blocks(n_valid: int, beta: float):
    """Blocks up to ``n_valid`` in each index plus the edge blocks that carry weight."""
    blocks = [(n1, n2) for n1 in range(n_valid + 1) for n2 in range(n_valid + 1)]
    if math.cos(beta / 2.0) > 1e-15:
        blocks += [(n1, n2) for n1 in (-2, -1) for n2 in range(n_valid + 1)]
    if math.sin(beta / 2.0) > 1e-15:
        blocks += [(n1, n2) for n1 in range(n_valid + 1) for n2 in (-2, -1)]
    return blocks


def validate(params: ModelParams, t_grid, n_valid: int = 25, solver=solve_block) -> ValidationReport:
    """Closed form against RK4 for every block up to ``n_valid``.

    ``solver(block_coefficients, delta, a0=..., d0=...)`` builds the analytic
    side; tests replace it to check that corrupted solutions are caught.
    """
    delta = params.require_identical()
    blocks = validation_blocks(n_valid, params.beta)
    initial = np.array([default_initial(params, *b) for b in blocks])
    trajectories = integrate_blocks(params, blocks, t_grid, initial)
    rows = []
    for (n1, n2), y0, traj in zip(blocks, initial, trajectories):
        coeffs = block_coefficients(n1, n2, params.lam, params.chi)
        sol = solver(coeffs, delta, a0=y0[0], d0=y0[3])
        rows.append(ValidationRow(n1, n2, compare_block(sol, traj), traj.norm_drift))
    return ValidationReport(rows)
