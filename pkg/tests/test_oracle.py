import math

import numpy as np
import pytest

from kerrjcm import oracle
from kerrjcm.amplitudes import amplitudes_at, solve_block
from kerrjcm.cubic import CubicRoots
from kerrjcm.exceptions import (GridMismatch, NonIdenticalAtoms,
                                ParameterError, StepSizeFailure)
from kerrjcm.model import ModelParams, block_coefficients
from kerrjcm.oracle import (OdeTrajectory, compare_block, integrate_block,
                            integrate_blocks, rk4_direct, validate)

from conftest import scenario

GRID = np.linspace(0.0, 30.0, 601)


def test_starts_at_initial_condition():
    p = scenario(0.4, 5.0, beta=1.0)
    traj = integrate_block(p, 2, 3, GRID)
    np.testing.assert_array_equal(traj.amps[0], [math.cos(0.5), 0, 0, math.sin(0.5)])


def test_identical_atoms_keep_b_equal_c():
    traj = integrate_block(scenario(0.4, 5.0, beta=2.0), 4, 1, GRID)
    assert np.max(np.abs(traj.amps[:, 1] - traj.amps[:, 2])) < 1e-10


def test_norm_drift():
    traj = integrate_block(scenario(0.4, 5.0, beta=2.0), 25, 25, GRID)
    assert traj.norm_drift < 1e-10


def test_compare_with_itself_is_zero():
    sol = solve_block(block_coefficients(2, 2, 1.0, 0.4), 5.0, 0.3)
    amps = np.stack(amplitudes_at(sol, GRID), axis=1)
    assert compare_block(sol, OdeTrajectory(GRID, amps, (2, 2), 1e-3)) == 0.0


def test_compare_rejects_other_block():
    sol = solve_block(block_coefficients(2, 2, 1.0, 0.4), 5.0, 0.3)
    traj = integrate_block(scenario(0.4, 5.0, beta=0.3), 2, 1, GRID[:5])
    with pytest.raises(GridMismatch):
        compare_block(sol, traj)


@pytest.mark.parametrize("grid", [[0.0], [0.5, 1.0], [0.0, 2.0, 1.0]])
def test_bad_grids(grid):
    with pytest.raises(ParameterError):
        integrate_block(scenario(0.0, 0.0), 0, 0, grid)


def test_non_identical_atoms_frame_against_direct_stepping():
    p = ModelParams(omega1=4.0, omega2=5.3, lambda1=1.0, lambda2=1.4, chi=0.3, beta=1.1)
    traj = integrate_block(p, 3, 2, [0.0, 2.5])
    direct = rk4_direct(p, 3, 2, 2.5, 2.5e-4)
    assert np.max(np.abs(traj.amps[-1] - direct)) < 1e-9
    assert abs(traj.norms[-1] - 1.0) < 1e-10


def test_time_reversal():
    p = scenario(0.4, 5.0, beta=0.7)
    y0 = oracle.default_initial(p, 3, 4)
    # the step the halving check settles on for this block
    h = integrate_block(p, 3, 4, [0.0, 3.0]).step
    forward = rk4_direct(p, 3, 4, 3.0, h, y0)
    back = rk4_direct(p, 3, 4, 0.0, h, forward, t_start=3.0)
    assert np.max(np.abs(back - y0)) < 1e-8


def test_step_halving_failure(monkeypatch):
    monkeypatch.setattr(oracle, "HALVING_TOL", 0.0)
    monkeypatch.setattr(oracle, "MAX_HALVINGS", 2)
    with pytest.raises(StepSizeFailure):
        integrate_block(scenario(0.4, 5.0), 3, 3, GRID[:50])


def test_batched_equals_single():
    p = scenario(0.4, 5.0, beta=2.2)
    blocks = [(0, 0), (5, 2), (9, 9)]
    init = [oracle.default_initial(p, *b) for b in blocks]
    many = integrate_blocks(p, blocks, GRID[:100], init)
    for b, traj in zip(blocks, many):
        single = integrate_block(p, *b, GRID[:100])
        assert np.max(np.abs(single.amps - traj.amps)) < 1e-9


def test_validate_resonant_without_kerr():
    report = validate(scenario(0.0, 0.0, beta=math.pi / 2), GRID, n_valid=8)
    assert report.max_deviation < 1e-8
    assert report.max_norm_drift < 1e-10
    assert len(report.rows) == 81 + 2 * 2 * 9


def test_validate_report_format():
    report = validate(scenario(0.4, 5.0), GRID[:41], n_valid=2)
    lines = report.to_csv().splitlines()
    assert lines[0] == "block_n1,block_n2,max_deviation,norm_drift"
    assert len(lines) == 1 + len(report.rows)
    assert report.summary().startswith("max_deviation=")
    assert report.summary().endswith(f"blocks={len(report.rows)}")


def test_validate_catches_tampered_root():
    def tampered(block, delta, **kw):
        if block.n1 == 3 and block.n2 == 1:
            good = solve_block(block, delta, **kw)
            r = good.roots
            return solve_block(block, delta, roots=CubicRoots(r.mu1 + 1e-3, r.mu2, r.mu3, r.phi), **kw)
        return solve_block(block, delta, **kw)

    report = validate(scenario(0.4, 5.0), GRID, n_valid=4, solver=tampered)
    worst = max(report.rows, key=lambda r: r.max_deviation)
    assert (worst.n1, worst.n2) == (3, 1)
    assert report.max_deviation > 1e-6


def test_validate_needs_identical_atoms():
    with pytest.raises(NonIdenticalAtoms):
        validate(ModelParams(lambda2=1.5), GRID[:3], n_valid=1)
