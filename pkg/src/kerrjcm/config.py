"""Run configuration: ``key = value`` lines, ``#`` starts a comment.

``chi`` and ``delta`` are given in units of ``lambda`` (the common atom-field
coupling). Without ``delta`` the detuning follows from ``omega1``/``omega2``
and the mode frequencies; with it, both atomic frequencies are placed so the
detuning equals ``delta * lambda`` and setting ``omega1``/``omega2`` as well is
an error.

``sweep`` lists scenarios as ``chi:delta`` pairs separated by commas, e.g.
``sweep = 0:0, 0:5, 0.4:0, 0.4:5``.

The defaults ``chi = 0.4``, ``delta = 5``, ``beta = 0`` are our own choice of
a representative working point, not values taken from any measurement.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConfigError, ParameterError
from .model import ModelParams

FLOAT_KEYS = ("omega1", "omega2", "Omega1", "Omega2", "lambda12", "lambda", "chi", "beta",
              "alpha1_sq", "alpha2_sq", "tail_tol", "tau_start", "tau_end", "delta")
INT_KEYS = ("n_max", "tau_steps")
KEYS = FLOAT_KEYS + INT_KEYS + ("sweep", "output_path")

FIGURE_GRID = ((0.0, 0.0), (0.0, 5.0), (0.4, 0.0), (0.4, 5.0))


@dataclass(frozen=True)
class RunConfig:
    params: ModelParams = field(default_factory=ModelParams)
    tau_start: float = 0.0
    tau_end: float = 30.0
    tau_steps: int = 600
    sweep: tuple[tuple[float, float], ...] | None = None
    output_path: str | None = None

    def __post_init__(self):
        if not 0.0 <= self.tau_start < self.tau_end:
            raise ConfigError(f"need tau_end > tau_start >= 0, got {self.tau_start}, {self.tau_end}")
        if self.tau_steps < 2:
            raise ConfigError(f"tau_steps must be >= 2, got {self.tau_steps}")

    @property
    def taus(self) -> np.ndarray:
        """``tau_steps`` intervals, so ``tau_steps + 1`` points including both ends."""
        return np.linspace(self.tau_start, self.tau_end, self.tau_steps + 1)

    @property
    def scenarios(self) -> tuple[tuple[float, float], ...]:
        return FIGURE_GRID if self.sweep is None else self.sweep


def _parse_sweep(value: str, line: int) -> tuple[tuple[float, float], ...]:
    pairs = []
    for item in value.split(","):
        item = item.strip()
        if not item:
            continue
        parts = item.split(":")
        if len(parts) != 2:
            raise ConfigError(f"sweep entry {item!r} is not chi:delta", line)
        try:
            chi, delta = float(parts[0]), float(parts[1])
        except ValueError:
            raise ConfigError(f"sweep entry {item!r} is not numeric", line) from None
        if not (math.isfinite(chi) and math.isfinite(delta)):
            raise ConfigError(f"sweep entry {item!r} is not finite", line)
        pairs.append((chi, delta))
    if not pairs:
        raise ConfigError("sweep list is empty", line)
    return tuple(pairs)


def _read(text: str) -> dict[str, tuple[object, int]]:
    values: dict[str, tuple[object, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"expected key=value, got {body!r}", lineno)
        key, value = (part.strip() for part in body.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        if key in FLOAT_KEYS:
            try:
                parsed = float(value)
            except ValueError:
                raise ConfigError(f"{key}: cannot parse {value!r} as a number", lineno) from None
            if not math.isfinite(parsed):
                raise ConfigError(f"{key} must be finite", lineno)
        elif key in INT_KEYS:
            try:
                parsed = int(value)
            except ValueError:
                raise ConfigError(f"{key}: cannot parse {value!r} as an integer", lineno) from None
        elif key == "sweep":
            parsed = _parse_sweep(value, lineno)
        else:
            if not value:
                raise ConfigError("output_path is empty", lineno)
            parsed = value
        values[key] = (parsed, lineno)
    return values


def parse_config(text: str) -> RunConfig:
    values = _read(text)

    def get(key, default):
        return values[key][0] if key in values else default

    def line_of(*keys):
        found = [values[k][1] for k in keys if k in values]
        return max(found) if found else None

    lam = get("lambda", 1.0)
    if lam <= 0:
        raise ConfigError("lambda must be positive", line_of("lambda"))
    for key in ("alpha1_sq", "alpha2_sq"):
        if get(key, 10.0) < 0:
            raise ConfigError(f"{key} must be non-negative", line_of(key))
    beta = get("beta", 0.0)
    if not 0.0 <= beta <= math.pi:
        raise ConfigError(f"beta must lie in [0, pi], got {beta}", line_of("beta"))
    if "delta" in values and ("omega1" in values or "omega2" in values):
        raise ConfigError("give either delta or omega1/omega2, not both",
                          line_of("delta", "omega1", "omega2"))
    defaults = ModelParams()
    kwargs = dict(
        omega1=get("omega1", defaults.omega1), omega2=get("omega2", defaults.omega2),
        Omega1=get("Omega1", defaults.Omega1), Omega2=get("Omega2", defaults.Omega2),
        lambda12=get("lambda12", defaults.lambda12),
        lambda1=lam, lambda2=lam, chi=get("chi", 0.4) * lam, beta=beta,
        alpha1=math.sqrt(get("alpha1_sq", 10.0)), alpha2=math.sqrt(get("alpha2_sq", 10.0)),
        n_max=get("n_max", defaults.n_max), tail_tol=get("tail_tol", defaults.tail_tol),
    )
    try:
        params = ModelParams(**kwargs)
        if "delta" in values:
            params = params.with_scaled(params.chi / lam, values["delta"][0])
    except ParameterError as exc:
        raise ConfigError(str(exc), line_of("n_max", "tail_tol", "lambda12", "delta")) from exc
    try:
        return RunConfig(
            params=params,
            tau_start=get("tau_start", 0.0), tau_end=get("tau_end", 30.0),
            tau_steps=get("tau_steps", 600), sweep=get("sweep", None),
            output_path=get("output_path", None),
        )
    except ConfigError as exc:
        raise ConfigError(str(exc), line_of("tau_start", "tau_end", "tau_steps")) from exc
