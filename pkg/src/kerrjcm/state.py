"""Joint atoms-plus-fields state and its reduction to the two-atom density matrix.

The photon table of a :class:`JointState` is indexed by the actual photon
numbers in the rotated modes, ``0 .. n_max + 2`` per mode (the block kets
reach two photons above the block label).

Two ways of attaching the coherent-state weights to the blocks are offered:

``"projected"`` (default)
    The initial product state ``(cos|ee> + sin|gg>) |alpha1, alpha2>``,
    truncated at ``n_max`` photons per mode, is split exactly over the blocks:
    block ``(n1, n2)`` starts with ``cos * q[n1+2] * q[n2]`` on ``|ee>`` and
    ``sin * q[n1] * q[n2+2]`` on ``|gg>``. Blocks with ``n1`` or ``n2`` equal
    to ``-1`` or ``-2`` carry the vacuum-edge kets.
``"shared"``
    Every block ``(n1, n2) >= 0`` gets the common prefactor
    ``q[n1] * q[n2]`` on both branches. The ``|ee>`` and ``|gg>`` field
    states then differ already at ``t = 0``, so the atoms start out mixed.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .amplitudes import FRAME, BlockSolution, solve_block
from .exceptions import NumericalError, TruncationTooSmall
from .model import ModelParams, block_coefficients

WEIGHTINGS = ("projected", "shared")
ATOM_LABELS = ("e1e2", "e1g2", "g1e2", "g1g2")


@dataclass(frozen=True)
class CoherentWeights:
    alpha: complex
    q: np.ndarray
    tail_mass: float

    def __getitem__(self, n: int) -> complex:
        return self.q[n] if 0 <= n < self.q.size else 0.0


def coherent_weights(alpha: complex, n_max: int, tail_tol: float) -> CoherentWeights:
    """Fock amplitudes ``exp(-|a|^2/2) a^n / sqrt(n!)`` for ``n <= n_max``."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    alpha = complex(alpha)
    q = np.empty(n_max + 1, dtype=complex)
    q[0] = math.exp(-abs(alpha) ** 2 / 2.0)
    for n in range(n_max):
        q[n + 1] = q[n] * alpha / math.sqrt(n + 1)
    tail = max(0.0, 1.0 - math.fsum(np.abs(q) ** 2))
    if tail > tail_tol:
        raise TruncationTooSmall(
            f"|alpha|^2={abs(alpha) ** 2:g}: mass {tail:.3e} beyond n_max={n_max} exceeds {tail_tol:g}")
    return CoherentWeights(alpha, q, tail)


class BlockEnsemble:
    """All block solutions for one parameter set, stacked for vectorised evaluation."""

    def __init__(self, params: ModelParams, weighting: str = "projected", solver=solve_block):
        if weighting not in WEIGHTINGS:
            raise ValueError(f"weighting must be one of {WEIGHTINGS}, got {weighting!r}")
        self.params = params
        self.weighting = weighting
        self.delta = params.require_identical()
        self.lam = params.lam
        self.q1 = coherent_weights(params.alpha1, params.n_max, params.tail_tol)
        self.q2 = coherent_weights(params.alpha2, params.n_max, params.tail_tol)
        c, s = math.cos(params.beta / 2.0), math.sin(params.beta / 2.0)
        n = params.n_max
        if weighting == "projected":
            labels = [(n1, n2) for n1 in range(-2, n + 1) for n2 in range(-2, n + 1)]
            inits = [(c * self.q1[n1 + 2] * self.q2[n2], s * self.q1[n1] * self.q2[n2 + 2])
                     for n1, n2 in labels]
        else:
            labels = [(n1, n2) for n1 in range(n + 1) for n2 in range(n + 1)]
            inits = [(c * self.q1[n1] * self.q2[n2], s * self.q1[n1] * self.q2[n2])
                     for n1, n2 in labels]
        self.solutions: list[BlockSolution] = []
        for (n1, n2), (a0, d0) in zip(labels, inits):
            if a0 == 0 and d0 == 0:
                continue
            coeffs = block_coefficients(n1, n2, self.lam, params.chi)
            try:
                self.solutions.append(solver(coeffs, self.delta, a0=a0, d0=d0))
            except NumericalError as exc:
                if exc.block is not None:
                    raise
                raise type(exc)(str(exc), block=(n1, n2)) from exc
        self.size = n + 3
        count = len(self.solutions)
        self.mu = np.zeros((count, 3))
        self.modes = np.zeros((count, 3, 4), dtype=complex)
        for i, sol in enumerate(self.solutions):
            k = sol.mu.size
            self.mu[i, :k] = sol.mu
            self.modes[i, :k] = sol.modes
        n1 = np.array([s.block[0] for s in self.solutions])
        n2 = np.array([s.block[1] for s in self.solutions])
        self._targets = [(n1 + 2, n2), (n1 + 1, n2 + 1), (n1 + 1, n2 + 1), (n1, n2 + 2)]
        self._valid = [(a >= 0) & (b >= 0) for a, b in self._targets]

    @property
    def blocks(self) -> list[tuple[int, int]]:
        return [s.block for s in self.solutions]

    @property
    def initial_norm(self) -> float:
        return math.fsum(s.initial_norm for s in self.solutions)

    def block_amplitudes(self, times) -> np.ndarray:
        """``(len(times), n_blocks, 4)`` weighted block amplitudes at scaled times."""
        t = np.atleast_1d(np.asarray(times, dtype=float)) / self.lam
        osc = np.exp(1j * t[:, None, None] * self.mu[None, :, :])
        amps = np.einsum("tbm,bmk->tbk", osc, self.modes)
        amps *= np.exp(1j * t[:, None] * (FRAME * self.delta)[None, :])[:, None, :]
        return amps

    def tables(self, times) -> np.ndarray:
        """``(len(times), 4, n_max+3, n_max+3)`` photon-number amplitude tables."""
        amps = self.block_amplitudes(times)
        out = np.zeros((amps.shape[0], 4, self.size, self.size), dtype=complex)
        for k in range(4):
            ok = self._valid[k]
            a, b = self._targets[k]
            out[:, k, a[ok], b[ok]] = amps[:, ok, k]
        return out


@dataclass(frozen=True)
class JointState:
    tau: float
    table: np.ndarray  # (4, n_max+3, n_max+3)
    expected_norm: float

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.table) ** 2))

    def amplitude(self, atom_index: int, n1: int, n2: int) -> complex:
        """Amplitude of ``|atom_index, n1, n2>``, atom index 1..4 in the order ee, eg, ge, gg."""
        if not 1 <= atom_index <= 4:
            raise IndexError("atom index runs from 1 to 4")
        if not (0 <= n1 < self.table.shape[1] and 0 <= n2 < self.table.shape[2]):
            return 0j
        return complex(self.table[atom_index - 1, n1, n2])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["atomIndex", "n1", "n2", "re", "im"])
        for k, n1, n2 in zip(*np.nonzero(self.table)):
            z = self.table[k, n1, n2]
            w.writerow([k + 1, n1, n2, f"{z.real:.17g}", f"{z.imag:.17g}"])
        return buf.getvalue()


def assemble_state(params: ModelParams, tau: float, ensemble: BlockEnsemble | None = None,
                   weighting: str = "projected") -> JointState:
    """Joint state at scaled time ``tau = lambda * t``."""
    if ensemble is None:
        ensemble = BlockEnsemble(params, weighting)
    table = ensemble.tables([tau])[0]
    return JointState(float(tau), table, ensemble.initial_norm)


@dataclass(frozen=True)
class AtomDensityMatrix:
    """Raw (unnormalised) two-atom density matrix; basis ee, eg, ge, gg."""

    matrix: np.ndarray

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    @property
    def trace_deficit(self) -> float:
        return 1.0 - self.trace

    def normalized(self) -> np.ndarray:
        return self.matrix / self.trace

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def reduce_tables(tables: np.ndarray) -> np.ndarray:
    """Partial trace over both modes for a stack of tables, ``(T, 4, 4)``."""
    return np.einsum("tinm,tjnm->tij", tables, tables.conj())


def atom_density_matrix(state: JointState) -> AtomDensityMatrix:
    return AtomDensityMatrix(reduce_tables(state.table[None])[0])


def atom_gram_eigenvalues(state: JointState, normalize: bool = False) -> np.ndarray:
    """Squared Schmidt coefficients of the atoms/fields split, ascending.

    Computed from the singular values of the ``4 x (photon pairs)`` amplitude
    matrix, so they are the spectrum of the field side as much as the atom side.
    """
    s = np.linalg.svd(state.table.reshape(4, -1), compute_uv=False)
    ev = np.sort(s ** 2)
    return ev / ev.sum() if normalize else ev
