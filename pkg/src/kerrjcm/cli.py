"""Command line driver.

Subcommands: ``simulate``, ``validate``, ``sweep`` and ``roots``. Exit status
is 0 on success, 2 for configuration errors, 3 for numerical failures and 4
when validation exceeds its threshold.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import amplitudes
from .config import RunConfig, parse_config
from .dynamics import MeasureSeries, fmt, simulate
from .exceptions import ConfigError, NumericalError, ParameterError
from .model import block_coefficients, rotated_frame
from .oracle import ValidationReport, validate

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_VALIDATION = 0, 2, 3, 4
N_VALID = 25
VALIDATION_THRESHOLD = 1e-6
SUMMARY_HEADER = ("scenario", "chi_over_lambda", "delta_over_lambda", "max_entropy",
                  "mean_entropy", "max_concurrence", "max_negativity")


def run_simulate(config: RunConfig, workers: int | None = None) -> MeasureSeries:
    return simulate(config.params, config.taus, workers=workers)


def run_validate(config: RunConfig, n_valid: int = N_VALID, solver=None) -> ValidationReport:
    """Closed form against RK4 on ``[0, tau_end]`` for blocks up to ``n_valid``."""
    if solver is None:
        solver = amplitudes.solve_block
    params = config.params
    t_grid = np.linspace(0.0, config.tau_end, config.tau_steps + 1) / params.lam
    return validate(params, t_grid, n_valid=n_valid, solver=solver)


def scenario_label(chi: float, delta: float) -> str:
    return f"chi={chi:g};delta={delta:g}"


@dataclass(frozen=True)
class SweepResult:
    scenarios: tuple[tuple[float, float], ...]
    series: tuple[MeasureSeries, ...]

    def series_csv(self) -> str:
        buf = io.StringIO()
        for i, ((chi, delta), s) in enumerate(zip(self.scenarios, self.series)):
            s.write_csv(buf, scenario=scenario_label(chi, delta), header=(i == 0))
        return buf.getvalue()

    def summary_rows(self):
        for (chi, delta), s in zip(self.scenarios, self.series):
            yield (scenario_label(chi, delta), chi, delta, float(np.max(s.entropy)),
                   math.fsum(s.entropy) / len(s), float(np.max(s.concurrence)),
                   float(np.max(s.negativity)))

    def summary_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(SUMMARY_HEADER)
        for row in self.summary_rows():
            w.writerow([row[0]] + [fmt(v) for v in row[1:]])
        return buf.getvalue()


def run_sweep(config: RunConfig, workers: int | None = None) -> SweepResult:
    scenarios = tuple(config.scenarios)
    if not scenarios:
        raise ConfigError("sweep list is empty")
    series = []
    for chi, delta in scenarios:
        params = config.params.with_scaled(chi, delta)
        series.append(simulate(params, config.taus, workers=workers))
    return SweepResult(scenarios, tuple(series))


def _complex(z: complex) -> str:
    z = complex(z)
    return f"{z.real + 0.0:.17g}{z.imag + 0.0:+.17g}j"


def roots_dump(config: RunConfig, n1: int, n2: int) -> str:
    """``key=value`` lines describing one block's closed-form solution."""
    if n1 < 0 or n2 < 0:
        raise ConfigError("block indices must be non-negative")
    params = config.params
    delta = params.require_identical()
    block = block_coefficients(n1, n2, params.lam, params.chi)
    x = amplitudes.characteristic_coefficients(block, delta)
    sol = amplitudes.solve_block(block, delta, params.beta)
    frame = rotated_frame(params)
    lines = [("n1", n1), ("n2", n2), ("theta", fmt(frame.theta)), ("delta", fmt(delta)),
             ("f1", fmt(block.f1)), ("f2", fmt(block.f2)),
             ("V1", fmt(block.V1)), ("V2", fmt(block.V2)), ("V3", fmt(block.V3)),
             ("x1", fmt(x.x1)), ("x2", fmt(x.x2)), ("x3", fmt(x.x3))]
    lines += [(f"mu{m + 1}", fmt(v)) for m, v in enumerate(sol.mu)]
    lines += [(f"b{m + 1}", _complex(v)) for m, v in enumerate(sol.weights)]
    lines.append(("weights_closed_form_discrepancy", fmt(sol.closed_form_discrepancy)))
    return "".join(f"{k}={v}\n" for k, v in lines)


def _load(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    except UnicodeDecodeError as exc:
        raise ConfigError(f"{path} is not UTF-8") from exc
    return parse_config(text)


def _write(text: str, path: str | None, stdout) -> None:
    if path is None:
        stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kerrjcm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="entropy, concurrence and negativity over the tau grid")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="CSV path (default: output_path from the config, else stdout)")

    p = sub.add_parser("validate", help="closed form against RK4, per block")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="per-block CSV path (default stdout)")
    p.add_argument("--n-valid", type=int, default=N_VALID)

    p = sub.add_parser("sweep", help="one series per (chi, delta) scenario")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="series CSV path (default stdout)")
    p.add_argument("--summary", help="summary CSV path (default <out>.summary.csv, or stderr)")

    p = sub.add_parser("roots", help="dump one block's cubic, roots and weights")
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--n2", type=int, required=True)
    p.add_argument("--config", required=True)
    return parser


def _dispatch(args, stdout, stderr) -> int:
    config = _load(args.config)
    if args.command == "simulate":
        series = run_simulate(config)
        _write(series.to_csv(), args.out or config.output_path, stdout)
    elif args.command == "validate":
        if args.n_valid < 0:
            raise ConfigError("--n-valid must be non-negative")
        report = run_validate(config, n_valid=args.n_valid)
        _write(report.to_csv(), args.out, stdout)
        stderr.write(report.summary() + "\n")
        if not report.max_deviation <= VALIDATION_THRESHOLD:
            stderr.write(f"validation failed: deviation above {VALIDATION_THRESHOLD:g}\n")
            return EXIT_VALIDATION
    elif args.command == "sweep":
        result = run_sweep(config)
        out = args.out or config.output_path
        _write(result.series_csv(), out, stdout)
        summary = args.summary or (out + ".summary.csv" if out else None)
        _write(result.summary_csv(), summary, stderr)
    else:
        stdout.write(roots_dump(config, args.n1, args.n2))
    return EXIT_OK


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args, stdout, stderr)
    except (ConfigError, ParameterError) as exc:
        stderr.write(f"config error: {exc}\n")
        return EXIT_CONFIG
    except NumericalError as exc:
        stderr.write(f"numerical error: {exc}\n")
        return EXIT_NUMERICAL
    except ValueError as exc:
        # e.g. a malformed CAVITY_THREADS
        stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
