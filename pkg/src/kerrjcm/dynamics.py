"""Time series of the entanglement measures over a scaled-time grid."""
from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .measures import MeasureSample, concurrence, entropy, negativity_batch
from .model import ModelParams
from .state import BlockEnsemble, reduce_tables

CHUNK = 32
HEADER = ("tau", "entropy", "concurrence", "negativity", "norm_error")


def worker_count(default: int = 4) -> int:
    raw = os.environ.get("CAVITY_THREADS")
    if raw is None:
        return max(1, min(default, os.cpu_count() or 1))
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"CAVITY_THREADS must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"CAVITY_THREADS must be a positive integer, got {raw!r}")
    return value


def fmt(x: float) -> str:
    return f"{float(x) + 0.0:.17g}"


@dataclass(frozen=True)
class MeasureSeries:
    tau: np.ndarray
    entropy: np.ndarray
    concurrence: np.ndarray
    negativity: np.ndarray
    norm_error: np.ndarray

    def __len__(self):
        return self.tau.size

    def samples(self) -> list[MeasureSample]:
        return [MeasureSample(*map(float, row)) for row in zip(
            self.tau, self.entropy, self.concurrence, self.negativity, self.norm_error)]

    def as_array(self) -> np.ndarray:
        return np.column_stack([self.entropy, self.concurrence, self.negativity, self.norm_error])

    def write_csv(self, out, scenario=None, header=True) -> None:
        w = csv.writer(out, lineterminator="\n")
        if header:
            w.writerow((("scenario",) if scenario is not None else ()) + HEADER)
        for row in zip(self.tau, self.entropy, self.concurrence, self.negativity, self.norm_error):
            cells = [fmt(v) for v in row]
            w.writerow(([scenario] if scenario is not None else []) + cells)

    def to_csv(self, scenario=None) -> str:
        buf = io.StringIO()
        self.write_csv(buf, scenario)
        return buf.getvalue()


def density_matrices(ensemble: BlockEnsemble, taus, workers: int = 1) -> np.ndarray:
    """Raw two-atom density matrices ``(len(taus), 4, 4)``."""
    taus = np.asarray(taus, dtype=float)
    chunks = [taus[i:i + CHUNK] for i in range(0, taus.size, CHUNK)]

    def run(chunk):
        return reduce_tables(ensemble.tables(chunk))

    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, chunks))
    else:
        parts = [run(c) for c in chunks]
    return np.concatenate(parts) if parts else np.zeros((0, 4, 4), dtype=complex)


def measures_from_rhos(taus, rhos: np.ndarray) -> MeasureSeries:
    taus = np.asarray(taus, dtype=float)
    traces = np.trace(rhos, axis1=-2, axis2=-1).real
    ent = np.array([entropy(r) for r in rhos])
    conc = np.array([concurrence(r) for r in rhos])
    neg = negativity_batch(rhos) if len(rhos) else np.zeros(0)
    return MeasureSeries(taus, ent, conc, neg, 1.0 - traces)


def simulate(params: ModelParams, taus, weighting: str = "projected",
             workers: int | None = None, ensemble: BlockEnsemble | None = None) -> MeasureSeries:
    if ensemble is None:
        ensemble = BlockEnsemble(params, weighting)
    if workers is None:
        workers = worker_count()
    rhos = density_matrices(ensemble, taus, workers)
    return measures_from_rhos(taus, rhos)
